#pragma once

#include "edlab/basis.hpp"
#include "edlab/eigensolver.hpp"
#include "edlab/hamiltonian.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace edlab {

/// Unit-norm amplitude vector over the full 2^L computational basis.
class PureState {
 public:
  PureState() = default;
  /// Throws DomainError unless the length is 2^L and the norm is 1 within `tol`.
  PureState(int L, Eigen::VectorXcd amplitudes, double tol = 1e-10);

  int length() const { return L_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  double norm() const { return amp_.norm(); }

 private:
  int L_ = 0;
  Eigen::VectorXcd amp_;
};

/// Per-site polar and azimuthal angles, theta in [0, pi], phi in [0, 2 pi).
struct BlochAngles {
  std::vector<double> theta;
  std::vector<double> phi;
};

enum class SamplingMode {
  sphere_uniform,  // cos(theta) uniform: isotropic direction on the sphere
  literal_ranges,  // theta itself uniform on [0, pi)
};

SamplingMode parse_sampling_mode(std::string_view s);
std::string_view to_string(SamplingMode m);

/// prod_i [cos(theta_i/2)|up> + e^{i phi_i} sin(theta_i/2)|down>]
PureState product_state(const BlochAngles& angles);

struct ProductSample {
  BlochAngles angles;
  PureState state;
};

/// Independent generator for ensemble member `member` of chain length L.
std::mt19937_64 member_stream(std::uint64_t base_seed, int L, std::uint64_t member);
/// Uniform double on [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

ProductSample sample_product_state(std::mt19937_64& rng, int L, SamplingMode mode);

/// Eigenpairs of H covering the full space, either as one decomposition or as
/// the even and odd parity blocks of a reflection-symmetric Hamiltonian.
class EigenSystem {
 public:
  struct Block {
    std::optional<Parity> parity;  // empty for a full-space block
    SpectralDecomposition spectrum;
  };

  static EigenSystem full(int L, SpectralDecomposition d);
  static EigenSystem blocked(std::shared_ptr<const ParitySectors> sectors,
                             SpectralDecomposition even, SpectralDecomposition odd);

  int length() const { return L_; }
  std::size_t dimension() const { return std::size_t{1} << L_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool is_blocked() const { return sectors_ != nullptr; }

  /// Coordinates of a full-space vector in block b's (unrotated) basis.
  Eigen::VectorXcd to_block(std::size_t b, const Eigen::VectorXcd& full) const;
  /// full += embedding of the columns of `block_cols`.
  void embed_add(std::size_t b, const Eigen::MatrixXcd& block_cols, Eigen::MatrixXcd& full) const;
  /// Compression of `op` onto block b, in block coordinates (not rotated).
  Eigen::MatrixXd operator_block(std::size_t b, const ChainOperator& op) const;

  /// All eigenvalues, ascending.
  Eigen::VectorXd eigenvalues() const;

 private:
  int L_ = 0;
  std::shared_ptr<const ParitySectors> sectors_;
  std::vector<Block> blocks_;
};

/// psi(t) = Q e^{-i Lambda t} Q^T psi0 using a full-space decomposition.
PureState evolve_state(const SpectralDecomposition& d, const PureState& psi0, double t);
PureState evolve_state(const EigenSystem& sys, const PureState& psi0, double t);
/// Same state evaluated at every time in `times` (one matrix product per block).
std::vector<PureState> evolve_series(const EigenSystem& sys, const PureState& psi0,
                                     std::span<const double> times);

/// (1/D) sum_{m,n} Bh_{mn} Ah_{nm} e^{i(lambda_m - lambda_n) t} for operators
/// already rotated into the eigenbasis of d, i.e. tr(B e^{-iHt} A e^{iHt}) / D.
/// Throws NumericalError if the imaginary residue exceeds 1e-10.
double heisenberg_trace(const SpectralDecomposition& d, const Eigen::MatrixXd& a_hat,
                        const Eigen::MatrixXd& b_hat, double t);

/// Precomputed tr(B e^{-iHt} A e^{iHt}) / 2^L over an EigenSystem. A must be
/// reflection symmetric when the system is blocked; B need not be.
class TwoOperatorTrace {
 public:
  TwoOperatorTrace(const EigenSystem& sys, const ChainOperator& a, const ChainOperator& b);

  double operator()(double t) const;
  std::vector<double> operator()(std::span<const double> times) const;

 private:
  struct Term {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd weights;  // Bh o Ah
  };
  std::vector<Term> terms_;
  double normalization_ = 1.0;
};

/// Local energies <H_r>(t)/eps after the center-bond perturbation, one value
/// per position r = 1, 3/2, ..., L.
struct EnergyProfile {
  std::vector<LocalTermIndex> positions;
  std::vector<double> values;

  double total() const;
};

EnergyProfile energy_profile(const EigenSystem& sys, const CouplingParams& p, double t);
EnergyProfile energy_profile(const SpectralDecomposition& d, const CouplingParams& p, double t);

}  // namespace edlab
