#pragma once

#include "edlab/basis.hpp"

#include <Eigen/Dense>

#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

namespace edlab {

/// Couplings of the mixed-field Ising chain and its (even) length.
struct CouplingParams {
  double g = 0.0;  // transverse field
  double h = 0.0;  // bulk longitudinal field
  double J = 1.0;  // Ising coupling
  int L = 0;
};

/// Throws ConfigError for J == 0 or a chain length that build_basis rejects.
void validate(const CouplingParams& p);
/// Non-fatal notes when the parameters sit at an integrable point (g or h zero).
std::vector<std::string> regime_warnings(const CouplingParams& p);

/// Named parameter sets: "main", "supp-A", "supp-B".
CouplingParams preset(std::string_view name, int L);
std::vector<std::string> preset_names();

/// Dense real matrix checked for symmetry on construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Throws DomainError if `m` is not square or not symmetric to `rel_tol`.
  explicit SymmetricMatrix(Eigen::MatrixXd m, double rel_tol = 1e-12);

  static SymmetricMatrix identity(Eigen::Index n);

  Eigen::Index dimension() const { return m_.rows(); }
  const Eigen::MatrixXd& dense() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double max_abs() const { return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0; }
  double trace() const { return m_.trace(); }

 private:
  Eigen::MatrixXd m_;
};

/// Max-norm asymmetry relative to max(1, |M|_max).
double relative_asymmetry(const Eigen::MatrixXd& m);

/// Position r of a local energy term, stored doubled: 2r = 2..2L (even) for
/// sites, 3..2L-1 (odd) for the bond between sites (2r-1)/2 and (2r+1)/2.
class LocalTermIndex {
 public:
  /// Throws DomainError if `doubled` is not a valid position for length L.
  LocalTermIndex(int doubled, int L);
  static LocalTermIndex site(int r, int L) { return {2 * r, L}; }
  /// Bond between `left_site` and `left_site + 1`.
  static LocalTermIndex bond(int left_site, int L) { return {2 * left_site + 1, L}; }

  int doubled() const { return doubled_; }
  bool is_site() const { return doubled_ % 2 == 0; }
  double position() const { return 0.5 * doubled_; }
  /// |r - (L+1)/2|
  double distance_from_center(int L) const { return 0.5 * std::abs(doubled_ - (L + 1)); }

  friend bool operator==(const LocalTermIndex&, const LocalTermIndex&) = default;

 private:
  int doubled_;
};

/// Every local position of an L-site chain in increasing r: 1, 3/2, 2, ..., L.
std::vector<LocalTermIndex> local_positions(int L);

/// Operator of the form sum_i x_i sigma^x_i + sum_i z_i sigma^z_i
/// + sum_b zz_b sigma^z_b sigma^z_{b+1}; every operator in this model is one.
/// Index 0 of each array is site 1 (or the bond 1-2).
struct ChainOperator {
  int L = 0;
  std::vector<double> x;   // L entries
  std::vector<double> z;   // L entries
  std::vector<double> zz;  // L-1 entries

  explicit ChainOperator(int length = 0)
      : L(length), x(length, 0.0), z(length, 0.0), zz(length > 0 ? length - 1 : 0, 0.0) {}

  double diagonal(BasisIndex n) const;
  ChainOperator& operator+=(const ChainOperator& other);
  ChainOperator& operator*=(double s);

  bool reflection_symmetric(double tol = 0.0) const;

  /// Full 2^L matrix in the computational basis.
  SymmetricMatrix dense(const SpinBasis& basis) const;
  /// Sector-diagonal block P^T O P. For operators that do not commute with the
  /// reflection this is the compression onto the sector, which is what traces
  /// against reflection-symmetric states need.
  SymmetricMatrix block(const ParitySectors& sectors, Parity which) const;
};

ChainOperator hamiltonian_operator(const CouplingParams& p);
ChainOperator local_term_operator(LocalTermIndex r, const CouplingParams& p);
ChainOperator weighted_spread_operator_terms(const CouplingParams& p);
/// sigma^z_{L/2} sigma^z_{L/2+1}, the perturbation placed on the center bond.
ChainOperator central_bond_operator(int L);

SymmetricMatrix build_hamiltonian(const CouplingParams& p, const SpinBasis& basis);
SymmetricMatrix build_local_term(LocalTermIndex r, const CouplingParams& p,
                                 const SpinBasis& basis);
/// W = sum_r |r - (L+1)/2| H_r, so that R(t) = (2/eps) <W>(t).
SymmetricMatrix build_weighted_spread_operator(const CouplingParams& p, const SpinBasis& basis);

/// R M R for the site-inversion permutation R.
SymmetricMatrix reflection_conjugate(const SymmetricMatrix& m, const SpinBasis& basis);

/// Block of a full-space matrix in the orthonormal sector basis. With
/// `check_commutes`, throws SymmetryError unless |RMR - M|_max <= 1e-10 max(1, |M|_max).
SymmetricMatrix project_to_sector(const SymmetricMatrix& m, const ParitySectors& sectors,
                                  Parity which, bool check_commutes = true);

}  // namespace edlab
