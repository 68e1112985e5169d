#include "edlab/dynamics.hpp"

#include "edlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace edlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXcd phases(const Eigen::VectorXd& lambda, double t) {
  Eigen::VectorXcd u(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) u[k] = std::polar(1.0, -lambda[k] * t);
  return u;
}

// Q (diag(e^{-i lambda t}) c) for every t, as columns.
Eigen::MatrixXcd propagate_block(const SpectralDecomposition& d, const Eigen::VectorXcd& block,
                                 std::span<const double> times) {
  const Eigen::MatrixXd& q = d.eigenvectors;
  const Eigen::VectorXd c_re = q.transpose() * block.real();
  const Eigen::VectorXd c_im = q.transpose() * block.imag();
  const auto n = d.dimension();
  const auto nt = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd re(n, nt), im(n, nt);
  for (Eigen::Index j = 0; j < nt; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double angle = -d.eigenvalues[k] * times[j];
      const double cs = std::cos(angle), sn = std::sin(angle);
      re(k, j) = cs * c_re[k] - sn * c_im[k];
      im(k, j) = sn * c_re[k] + cs * c_im[k];
    }
  }
  Eigen::MatrixXcd out(n, nt);
  out.real() = q * re;
  out.imag() = q * im;
  return out;
}

}  // namespace

PureState::PureState(int L, Eigen::VectorXcd amplitudes, double tol)
    : L_(L), amp_(std::move(amplitudes)) {
  if (L < 1 || L > 62 || amp_.size() != (Eigen::Index{1} << L)) {
    throw DomainError("PureState: amplitude count does not equal 2^L");
  }
  if (std::abs(amp_.norm() - 1.0) > tol) {
    throw DomainError("PureState: norm " + std::to_string(amp_.norm()) + " is not 1");
  }
}

SamplingMode parse_sampling_mode(std::string_view s) {
  if (s == "sphere") return SamplingMode::sphere_uniform;
  if (s == "literal") return SamplingMode::literal_ranges;
  throw ConfigError("unknown sampling mode '" + std::string(s) + "' (expected sphere or literal)");
}

std::string_view to_string(SamplingMode m) {
  return m == SamplingMode::sphere_uniform ? "sphere" : "literal";
}

PureState product_state(const BlochAngles& angles) {
  const auto L = static_cast<int>(angles.theta.size());
  if (angles.phi.size() != angles.theta.size()) {
    throw DomainError("product_state: theta and phi lengths differ");
  }
  Eigen::VectorXcd psi(1);
  psi[0] = 1.0;
  // site i occupies bit i-1, so each new site doubles the vector at the top
  for (int i = 0; i < L; ++i) {
    const std::complex<double> up = std::cos(angles.theta[i] / 2.0);
    const std::complex<double> down =
        std::polar(1.0, angles.phi[i]) * std::sin(angles.theta[i] / 2.0);
    const auto half = psi.size();
    Eigen::VectorXcd next(2 * half);
    next.head(half) = down * psi;
    next.tail(half) = up * psi;
    psi = std::move(next);
  }
  psi.normalize();
  return PureState(L, std::move(psi));
}

std::mt19937_64 member_stream(std::uint64_t base_seed, int L, std::uint64_t member) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(L), static_cast<std::uint32_t>(member),
                    static_cast<std::uint32_t>(member >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ProductSample sample_product_state(std::mt19937_64& rng, int L, SamplingMode mode) {
  BlochAngles a;
  a.theta.resize(L);
  a.phi.resize(L);
  for (int i = 0; i < L; ++i) {
    if (mode == SamplingMode::sphere_uniform) {
      // cos(theta) on (-1, 1]
      a.theta[i] = std::acos(1.0 - 2.0 * uniform01(rng));
    } else {
      a.theta[i] = std::numbers::pi * uniform01(rng);
    }
    a.phi[i] = kTwoPi * uniform01(rng);
  }
  PureState s = product_state(a);
  return {std::move(a), std::move(s)};
}

EigenSystem EigenSystem::full(int L, SpectralDecomposition d) {
  build_basis(L);
  if (static_cast<std::size_t>(d.dimension()) != (std::size_t{1} << L)) {
    throw DomainError("EigenSystem::full: decomposition does not cover 2^L states");
  }
  EigenSystem s;
  s.L_ = L;
  s.blocks_.push_back({std::nullopt, std::move(d)});
  return s;
}

EigenSystem EigenSystem::blocked(std::shared_ptr<const ParitySectors> sectors,
                                 SpectralDecomposition even, SpectralDecomposition odd) {
  if (!sectors) throw DomainError("EigenSystem::blocked: missing sectors");
  if (static_cast<std::size_t>(even.dimension()) != sectors->even_dim() ||
      static_cast<std::size_t>(odd.dimension()) != sectors->odd_dim()) {
    throw DomainError("EigenSystem::blocked: block dimensions do not match the sectors");
  }
  EigenSystem s;
  s.L_ = sectors->basis().length;
  s.sectors_ = std::move(sectors);
  s.blocks_.push_back({Parity::even, std::move(even)});
  s.blocks_.push_back({Parity::odd, std::move(odd)});
  return s;
}

Eigen::VectorXcd EigenSystem::to_block(std::size_t b, const Eigen::VectorXcd& full) const {
  const auto& blk = blocks_.at(b);
  if (!blk.parity) return full;
  return sectors_->project(*blk.parity, full);
}

void EigenSystem::embed_add(std::size_t b, const Eigen::MatrixXcd& block_cols,
                            Eigen::MatrixXcd& full) const {
  const auto& blk = blocks_.at(b);
  if (!blk.parity) {
    full += block_cols;
    return;
  }
  sectors_->embed_add(*blk.parity, block_cols, full);
}

Eigen::MatrixXd EigenSystem::operator_block(std::size_t b, const ChainOperator& op) const {
  const auto& blk = blocks_.at(b);
  if (!blk.parity) return op.dense(build_basis(L_)).dense();
  return op.block(*sectors_, *blk.parity).dense();
}

Eigen::VectorXd EigenSystem::eigenvalues() const {
  Eigen::VectorXd all(static_cast<Eigen::Index>(dimension()));
  Eigen::Index k = 0;
  for (const auto& blk : blocks_) {
    all.segment(k, blk.spectrum.dimension()) = blk.spectrum.eigenvalues;
    k += blk.spectrum.dimension();
  }
  std::sort(all.data(), all.data() + all.size());
  return all;
}

PureState evolve_state(const SpectralDecomposition& d, const PureState& psi0, double t) {
  if (d.dimension() != psi0.amplitudes().size()) {
    throw DomainError("evolve_state: state and decomposition dimensions differ");
  }
  const double ts[1] = {t};
  Eigen::MatrixXcd out = propagate_block(d, psi0.amplitudes(), ts);
  return PureState(psi0.length(), out.col(0));
}

PureState evolve_state(const EigenSystem& sys, const PureState& psi0, double t) {
  const double ts[1] = {t};
  return std::move(evolve_series(sys, psi0, ts).front());
}

std::vector<PureState> evolve_series(const EigenSystem& sys, const PureState& psi0,
                                     std::span<const double> times) {
  if (psi0.length() != sys.length()) {
    throw DomainError("evolve_series: state length differs from the eigensystem's chain length");
  }
  const auto D = static_cast<Eigen::Index>(sys.dimension());
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(D, static_cast<Eigen::Index>(times.size()));
  for (std::size_t b = 0; b < sys.blocks().size(); ++b) {
    const auto coords = sys.to_block(b, psi0.amplitudes());
    sys.embed_add(b, propagate_block(sys.blocks()[b].spectrum, coords, times), full);
  }
  std::vector<PureState> out;
  out.reserve(times.size());
  for (Eigen::Index j = 0; j < full.cols(); ++j) out.emplace_back(psi0.length(), full.col(j));
  return out;
}

namespace {

std::complex<double> phase_sandwich(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& w,
                                    double t) {
  const Eigen::VectorXcd u = phases(lambda, t);
  const Eigen::VectorXd wr = w * u.real();
  const Eigen::VectorXd wi = w * u.imag();
  // u^H (W u)
  const double re = u.real().dot(wr) + u.imag().dot(wi);
  const double im = u.real().dot(wi) - u.imag().dot(wr);
  return {re, im};
}

void check_real(std::complex<double> z, const char* where) {
  if (std::abs(z.imag()) > 1e-10) {
    throw NumericalError(std::string(where) + ": imaginary residue " +
                             std::to_string(z.imag()) + " exceeds 1e-10",
                         std::abs(z.imag()));
  }
}

}  // namespace

double heisenberg_trace(const SpectralDecomposition& d, const Eigen::MatrixXd& a_hat,
                        const Eigen::MatrixXd& b_hat, double t) {
  const auto n = d.dimension();
  if (a_hat.rows() != n || a_hat.cols() != n || b_hat.rows() != n || b_hat.cols() != n) {
    throw DomainError("heisenberg_trace: operator dimensions differ from the decomposition");
  }
  const Eigen::MatrixXd w = b_hat.cwiseProduct(a_hat.transpose());
  const std::complex<double> z = phase_sandwich(d.eigenvalues, w, t) / static_cast<double>(n);
  check_real(z, "heisenberg_trace");
  return z.real();
}

TwoOperatorTrace::TwoOperatorTrace(const EigenSystem& sys, const ChainOperator& a,
                                   const ChainOperator& b)
    : normalization_(static_cast<double>(sys.dimension())) {
  if (a.L != sys.length() || b.L != sys.length()) {
    throw DomainError("TwoOperatorTrace: operator length differs from the chain length");
  }
  if (sys.is_blocked() && !a.reflection_symmetric()) {
    throw SymmetryError("TwoOperatorTrace: evolved operator must be reflection symmetric "
                        "on a parity-blocked system");
  }
  for (std::size_t k = 0; k < sys.blocks().size(); ++k) {
    const auto& spec = sys.blocks()[k].spectrum;
    const Eigen::MatrixXd a_hat = rotate_to_eigenbasis(spec, sys.operator_block(k, a));
    const Eigen::MatrixXd b_hat = rotate_to_eigenbasis(spec, sys.operator_block(k, b));
    terms_.push_back({spec.eigenvalues, b_hat.cwiseProduct(a_hat)});
  }
}

double TwoOperatorTrace::operator()(double t) const {
  std::complex<double> z = 0.0;
  for (const auto& term : terms_) z += phase_sandwich(term.eigenvalues, term.weights, t);
  z /= normalization_;
  check_real(z, "TwoOperatorTrace");
  return z.real();
}

std::vector<double> TwoOperatorTrace::operator()(std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back((*this)(t));
  return out;
}

double EnergyProfile::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

EnergyProfile energy_profile(const EigenSystem& sys, const CouplingParams& p, double t) {
  if (p.L != sys.length()) throw DomainError("energy_profile: parameter L differs from system");
  const ChainOperator a = central_bond_operator(p.L);
  EnergyProfile prof;
  prof.positions = local_positions(p.L);
  prof.values.assign(prof.positions.size(), 0.0);
  for (std::size_t k = 0; k < sys.blocks().size(); ++k) {
    const auto& spec = sys.blocks()[k].spectrum;
    const Eigen::MatrixXd& q = spec.eigenvectors;
    const Eigen::MatrixXd a_hat = rotate_to_eigenbasis(spec, sys.operator_block(k, a));
    // Re of e^{-iHt} A e^{iHt} in block coordinates; the imaginary part is
    // antisymmetric and drops out of traces with symmetric H_r.
    Eigen::MatrixXd evolved(a_hat.rows(), a_hat.cols());
    for (Eigen::Index n = 0; n < a_hat.cols(); ++n) {
      for (Eigen::Index m = 0; m < a_hat.rows(); ++m) {
        evolved(m, n) = a_hat(m, n) * std::cos((spec.eigenvalues[m] - spec.eigenvalues[n]) * t);
      }
    }
    const Eigen::MatrixXd x = q * (evolved * q.transpose());
    for (std::size_t r = 0; r < prof.positions.size(); ++r) {
      const Eigen::MatrixXd hr = sys.operator_block(k, local_term_operator(prof.positions[r], p));
      prof.values[r] += hr.cwiseProduct(x).sum();
    }
  }
  for (double& v : prof.values) v /= static_cast<double>(sys.dimension());
  return prof;
}

EnergyProfile energy_profile(const SpectralDecomposition& d, const CouplingParams& p, double t) {
  return energy_profile(EigenSystem::full(p.L, d), p, t);
}

}  // namespace edlab
