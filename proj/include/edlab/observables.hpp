#pragma once

#include "edlab/dynamics.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace edlab {

/// Von Neumann entropy in bits.
struct EntropyValue {
  double bits = 0.0;
};

/// Entropy of sites 1..cut. Singular values of the 2^cut x 2^{L-cut}
/// coefficient matrix below 1e-12 are dropped.
EntropyValue entanglement_entropy(const PureState& psi, int cut);
/// Central cut L/2.
EntropyValue entanglement_entropy(const PureState& psi);
/// Throws DomainError unless |psi| = 1 within 1e-8.
EntropyValue entanglement_entropy(const Eigen::VectorXcd& amplitudes, int L, int cut);

/// log2 m - m / (2 n ln 2) with m = 2^min(cut, L-cut), n = 2^max(...),
/// clamped at zero.
double page_value(int L, int cut);

/// (L/2)(2L-2)/(2L-1): the spread distance once the perturbation energy is
/// shared equally by all L sites and L-1 bonds.
double equipartition_spread(int L);

struct TimeWindow {
  double start = 0.0;
  double stop = 0.0;
};

/// Ensemble mean and standard error of an observable on a time grid.
struct EnsembleSeries {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::size_t count = 0;
};

/// samples[i][j] is member i at times[j]. Standard error is the sample
/// standard deviation over sqrt(count); zero for a single member.
EnsembleSeries summarize_ensemble(std::span<const double> times,
                                  const std::vector<std::vector<double>>& samples);

/// R(t) = 2 tr(W e^{-iHt} A e^{iHt}) / D with W and A rotated into the
/// eigenbasis (the perturbation strength cancels).
double energy_spread_R(const SpectralDecomposition& d, const Eigen::MatrixXd& w_hat,
                       const Eigen::MatrixXd& a_hat, double t);

/// R(t) evaluator over a full or parity-blocked EigenSystem.
class EnergySpread {
 public:
  EnergySpread(const EigenSystem& sys, const CouplingParams& p);
  double operator()(double t) const { return 2.0 * trace_(t); }

 private:
  TwoOperatorTrace trace_;
};

enum class FitKind { linear, power_law };
std::string_view to_string(FitKind k);

struct FitResult {
  FitKind kind = FitKind::linear;
  double coefficient = 0.0;  // slope, or power-law prefactor
  double exponent = 1.0;     // power law only
  TimeWindow window;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Linear: least-squares slope through the origin. Power law: least-squares
/// line through (log t, log y). Needs at least 4 points inside the window.
FitResult fit_growth(std::span<const double> times, std::span<const double> values,
                     TimeWindow window, FitKind kind);

/// D from the prefactor of R(t) = (4/sqrt(pi)) sqrt(D t).
double diffusivity_from_prefactor(double prefactor);

struct SaturationEstimate {
  double value = 0.0;
  TimeWindow window;
  std::size_t samples = 0;
};

/// Evenly spaced sample times start..stop (inclusive) used by saturation_estimate.
std::vector<double> saturation_times(TimeWindow window, std::size_t samples);
/// Mean of `observable` at `samples` evenly spaced times in the window.
SaturationEstimate saturation_estimate(const std::function<double(double)>& observable,
                                       TimeWindow window, std::size_t samples);
/// Same, interpolating linearly in a series.
SaturationEstimate saturation_estimate(std::span<const double> times,
                                       std::span<const double> values, TimeWindow window,
                                       std::size_t samples);

struct CollapseCurve {
  int L = 0;
  std::vector<double> x;  // t / S_L(inf)
  std::vector<double> y;  // S(t) / S_L(inf)
};

struct CollapseInput {
  int L = 0;
  std::vector<double> times;
  std::vector<double> values;
  double saturation = 0.0;
};

struct CollapseResult {
  std::vector<CollapseCurve> curves;
  /// RMS over a common x grid of the standard deviation of y across L.
  double score = 0.0;
  TimeWindow x_range;
};

/// Rescales each curve by its saturation value and scores the spread over
/// x in [x_lo, x_hi] intersected with the common range of the curves.
CollapseResult scaling_collapse(const std::vector<CollapseInput>& inputs, double x_lo = 0.2,
                                double x_hi = 0.8, std::size_t grid_points = 61);

/// Linear interpolation of (xs, ys) at x; xs ascending.
double interpolate(std::span<const double> xs, std::span<const double> ys, double x);

}  // namespace edlab
