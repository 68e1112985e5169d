#include "edlab/observables.hpp"

#include "edlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace edlab {

EntropyValue entanglement_entropy(const Eigen::VectorXcd& amplitudes, int L, int cut) {
  if (L < 2 || L > 30 || amplitudes.size() != (Eigen::Index{1} << L)) {
    throw DomainError("entanglement_entropy: amplitude count is not 2^L");
  }
  if (cut < 1 || cut > L - 1) {
    throw DomainError("entanglement_entropy: cut " + std::to_string(cut) +
                      " outside 1..L-1");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-8) {
    throw DomainError("entanglement_entropy: state is not normalized");
  }
  // sites 1..cut live in the low bits, so rows index subsystem A
  const Eigen::Index rows = Eigen::Index{1} << cut;
  const Eigen::Index cols = Eigen::Index{1} << (L - cut);
  const Eigen::Map<const Eigen::MatrixXcd> c(amplitudes.data(), rows, cols);
  const Eigen::VectorXd s = rows <= cols ? Eigen::BDCSVD<Eigen::MatrixXcd>(c).singularValues()
                                         : Eigen::BDCSVD<Eigen::MatrixXcd>(c.adjoint()).singularValues();
  double bits = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] < 1e-12) continue;
    const double p = s[k] * s[k];
    bits -= p * std::log2(p);
  }
  return {std::max(bits, 0.0)};
}

EntropyValue entanglement_entropy(const PureState& psi, int cut) {
  return entanglement_entropy(psi.amplitudes(), psi.length(), cut);
}

EntropyValue entanglement_entropy(const PureState& psi) {
  return entanglement_entropy(psi, psi.length() / 2);
}

double page_value(int L, int cut) {
  if (cut < 0 || cut > L) throw DomainError("page_value: cut outside 0..L");
  const int small = std::min(cut, L - cut);
  const int large = L - small;
  const double m = std::ldexp(1.0, small);
  const double n = std::ldexp(1.0, large);
  return std::max(0.0, small - m / (2.0 * n * std::numbers::ln2));
}

double equipartition_spread(int L) {
  return 0.5 * L * (2.0 * L - 2.0) / (2.0 * L - 1.0);
}

EnsembleSeries summarize_ensemble(std::span<const double> times,
                                  const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw DomainError("summarize_ensemble: empty ensemble");
  EnsembleSeries s;
  s.times.assign(times.begin(), times.end());
  s.count = samples.size();
  s.mean.assign(times.size(), 0.0);
  s.standard_error.assign(times.size(), 0.0);
  for (const auto& row : samples) {
    if (row.size() != times.size()) throw DomainError("summarize_ensemble: ragged samples");
  }
  const auto n = static_cast<double>(samples.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    double sum = 0.0;
    for (const auto& row : samples) sum += row[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& row : samples) ss += (row[j] - mean) * (row[j] - mean);
    s.mean[j] = mean;
    s.standard_error[j] = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return s;
}

double energy_spread_R(const SpectralDecomposition& d, const Eigen::MatrixXd& w_hat,
                       const Eigen::MatrixXd& a_hat, double t) {
  return 2.0 * heisenberg_trace(d, a_hat, w_hat, t);
}

EnergySpread::EnergySpread(const EigenSystem& sys, const CouplingParams& p)
    : trace_(sys, central_bond_operator(p.L), weighted_spread_operator_terms(p)) {}

std::string_view to_string(FitKind k) { return k == FitKind::linear ? "linear" : "power-law"; }

FitResult fit_growth(std::span<const double> times, std::span<const double> values,
                     TimeWindow window, FitKind kind) {
  if (times.size() != values.size()) throw DomainError("fit_growth: length mismatch");
  if (!(window.start <= window.stop)) throw DomainError("fit_growth: empty window");
  const double slack = 1e-12 * std::max(1.0, std::abs(window.stop));
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= window.start - slack && times[i] <= window.stop + slack) {
      ts.push_back(times[i]);
      ys.push_back(values[i]);
    }
  }
  if (ts.size() < 4) {
    throw DomainError("fit_growth: " + std::to_string(ts.size()) +
                      " points in window, at least 4 required");
  }
  FitResult f;
  f.kind = kind;
  f.window = window;
  f.points = ts.size();
  const auto n = static_cast<double>(ts.size());
  if (kind == FitKind::linear) {
    double sty = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      sty += ts[i] * ys[i];
      stt += ts[i] * ts[i];
    }
    f.coefficient = sty / stt;
    f.exponent = 1.0;
  } else {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] <= 0.0 || ys[i] <= 0.0) {
        throw DomainError("fit_growth: power-law fit needs positive times and values");
      }
      const double lx = std::log(ts[i]), ly = std::log(ys[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw DomainError("fit_growth: degenerate time window");
    f.exponent = (n * sxy - sx * sy) / denom;
    f.coefficient = std::exp((sy - f.exponent * sx) / n);
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double model = f.coefficient * std::pow(ts[i], f.exponent);
    ss += (ys[i] - model) * (ys[i] - model);
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

double diffusivity_from_prefactor(double prefactor) {
  const double root = prefactor * std::sqrt(std::numbers::pi) / 4.0;
  return root * root;
}

std::vector<double> saturation_times(TimeWindow window, std::size_t samples) {
  if (samples == 0 || !(window.start <= window.stop)) {
    throw DomainError("saturation_estimate: empty window");
  }
  std::vector<double> ts(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    ts[i] = samples == 1 ? window.start
                         : window.start + (window.stop - window.start) * static_cast<double>(i) /
                                              static_cast<double>(samples - 1);
  }
  return ts;
}

SaturationEstimate saturation_estimate(const std::function<double(double)>& observable,
                                       TimeWindow window, std::size_t samples) {
  double sum = 0.0;
  for (double t : saturation_times(window, samples)) sum += observable(t);
  return {sum / static_cast<double>(samples), window, samples};
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  if (xs.empty() || xs.size() != ys.size()) throw DomainError("interpolate: bad arrays");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - w) * ys[lo] + w * ys[hi];
}

SaturationEstimate saturation_estimate(std::span<const double> times,
                                       std::span<const double> values, TimeWindow window,
                                       std::size_t samples) {
  if (times.empty() || window.start < times.front() || window.stop > times.back()) {
    throw DomainError("saturation_estimate: window outside the series");
  }
  return saturation_estimate([&](double t) { return interpolate(times, values, t); }, window,
                             samples);
}

CollapseResult scaling_collapse(const std::vector<CollapseInput>& inputs, double x_lo,
                                double x_hi, std::size_t grid_points) {
  if (inputs.size() < 2) {
    throw DomainError("scaling_collapse: at least two chain lengths are required");
  }
  CollapseResult res;
  double lo = x_lo, hi = x_hi;
  for (const auto& in : inputs) {
    if (in.times.size() != in.values.size() || in.times.size() < 2 || !(in.saturation > 0.0)) {
      throw DomainError("scaling_collapse: malformed curve for L=" + std::to_string(in.L));
    }
    CollapseCurve c;
    c.L = in.L;
    for (std::size_t i = 0; i < in.times.size(); ++i) {
      c.x.push_back(in.times[i] / in.saturation);
      c.y.push_back(in.values[i] / in.saturation);
    }
    lo = std::max(lo, c.x.front());
    hi = std::min(hi, c.x.back());
    res.curves.push_back(std::move(c));
  }
  if (!(lo < hi)) throw DomainError("scaling_collapse: rescaled curves do not overlap");
  res.x_range = {lo, hi};
  double acc = 0.0;
  const auto k = static_cast<double>(res.curves.size());
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid_points - 1);
    std::vector<double> ys;
    for (const auto& c : res.curves) ys.push_back(interpolate(c.x, c.y, x));
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= k;
    for (double y : ys) acc += (y - mean) * (y - mean) / k;
  }
  res.score = std::sqrt(acc / static_cast<double>(grid_points));
  return res;
}

}  // namespace edlab
