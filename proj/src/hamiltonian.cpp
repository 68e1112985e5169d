#include "edlab/hamiltonian.hpp"

#include "edlab/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace edlab {

void validate(const CouplingParams& p) {
  build_basis(p.L);
  if (p.J == 0.0) throw ConfigError("Ising coupling J must be nonzero");
  if (!std::isfinite(p.g) || !std::isfinite(p.h) || !std::isfinite(p.J)) {
    throw ConfigError("couplings must be finite");
  }
}

std::vector<std::string> regime_warnings(const CouplingParams& p) {
  std::vector<std::string> w;
  if (p.g == 0.0) w.emplace_back("g = 0: the chain is classical (diagonal in z)");
  if (p.h == 0.0) w.emplace_back("h = 0: bulk longitudinal field off, the chain is integrable");
  return w;
}

CouplingParams preset(std::string_view name, int L) {
  const double s5 = std::sqrt(5.0);
  if (name == "main") return {(s5 + 5.0) / 8.0, (s5 + 1.0) / 4.0, 1.0, L};
  if (name == "supp-A") return {0.6, 1.0, 1.0, L};
  if (name == "supp-B") return {-1.45, std::numbers::pi / 2.0, 1.0, L};
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected main, supp-A, supp-B)");
}

std::vector<std::string> preset_names() { return {"main", "supp-A", "supp-B"}; }

double relative_asymmetry(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m, double rel_tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DomainError("SymmetricMatrix: matrix is not square");
  const double asym = relative_asymmetry(m_);
  if (asym > rel_tol) {
    throw DomainError("SymmetricMatrix: relative asymmetry " + std::to_string(asym) +
                      " exceeds tolerance");
  }
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
  return SymmetricMatrix(Eigen::MatrixXd::Identity(n, n));
}

LocalTermIndex::LocalTermIndex(int doubled, int L) : doubled_(doubled) {
  const bool site = doubled % 2 == 0 && doubled >= 2 && doubled <= 2 * L;
  const bool bond = doubled % 2 != 0 && doubled >= 3 && doubled <= 2 * L - 1;
  if (!site && !bond) {
    throw DomainError("local term position 2r=" + std::to_string(doubled) +
                      " is invalid for L=" + std::to_string(L));
  }
}

std::vector<LocalTermIndex> local_positions(int L) {
  std::vector<LocalTermIndex> out;
  out.reserve(2 * L - 1);
  for (int d = 2; d <= 2 * L; ++d) out.emplace_back(d, L);
  return out;
}

double ChainOperator::diagonal(BasisIndex n) const {
  double v = 0.0;
  for (int i = 0; i < L; ++i) {
    v += ((n >> i) & 1u) ? z[i] : -z[i];
  }
  for (int b = 0; b + 1 < L; ++b) {
    const bool aligned = ((n >> b) & 1u) == ((n >> (b + 1)) & 1u);
    v += aligned ? zz[b] : -zz[b];
  }
  return v;
}

ChainOperator& ChainOperator::operator+=(const ChainOperator& other) {
  if (other.L != L) throw DomainError("ChainOperator: length mismatch");
  for (int i = 0; i < L; ++i) {
    x[i] += other.x[i];
    z[i] += other.z[i];
  }
  for (std::size_t b = 0; b < zz.size(); ++b) zz[b] += other.zz[b];
  return *this;
}

ChainOperator& ChainOperator::operator*=(double s) {
  for (auto& c : x) c *= s;
  for (auto& c : z) c *= s;
  for (auto& c : zz) c *= s;
  return *this;
}

bool ChainOperator::reflection_symmetric(double tol) const {
  for (int i = 0; i < L; ++i) {
    if (std::abs(x[i] - x[L - 1 - i]) > tol || std::abs(z[i] - z[L - 1 - i]) > tol) return false;
  }
  const int nb = static_cast<int>(zz.size());
  for (int b = 0; b < nb; ++b) {
    if (std::abs(zz[b] - zz[nb - 1 - b]) > tol) return false;
  }
  return true;
}

SymmetricMatrix ChainOperator::dense(const SpinBasis& basis) const {
  if (basis.length != L) throw DomainError("ChainOperator::dense: basis length mismatch");
  const auto D = static_cast<Eigen::Index>(basis.dimension);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(D, D);
  for (Eigen::Index n = 0; n < D; ++n) {
    m(n, n) = diagonal(static_cast<BasisIndex>(n));
    for (int i = 0; i < L; ++i) {
      if (x[i] != 0.0) m(n ^ (Eigen::Index{1} << i), n) += x[i];
    }
  }
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix ChainOperator::block(const ParitySectors& sectors, Parity which) const {
  if (sectors.basis().length != L) throw DomainError("ChainOperator::block: basis length mismatch");
  const auto& orbits = sectors.states(which);
  const auto d = static_cast<Eigen::Index>(orbits.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const OrbitState& o = orbits[col];
    const BasisIndex members[2] = {o.representative, o.partner};
    const int count = o.palindrome ? 1 : 2;
    for (int k = 0; k < count; ++k) {
      const BasisIndex n = members[k];
      const double cn = sectors.coefficient(which, n);
      // diagonal part keeps n inside the same orbit
      m(col, col) += cn * cn * diagonal(n);
      for (int i = 0; i < L; ++i) {
        if (x[i] == 0.0) continue;
        const BasisIndex f = n ^ (BasisIndex{1} << i);
        const auto row = sectors.position(which, f);
        if (row < 0) continue;
        m(row, col) += sectors.coefficient(which, f) * cn * x[i];
      }
    }
  }
  return SymmetricMatrix(std::move(m));
}

ChainOperator hamiltonian_operator(const CouplingParams& p) {
  validate(p);
  ChainOperator op(p.L);
  for (int i = 0; i < p.L; ++i) {
    op.x[i] = p.g;
    op.z[i] = p.h;
  }
  op.z.front() = p.h - p.J;
  op.z.back() = p.h - p.J;
  for (auto& c : op.zz) c = p.J;
  return op;
}

ChainOperator local_term_operator(LocalTermIndex r, const CouplingParams& p) {
  validate(p);
  ChainOperator op(p.L);
  if (r.is_site()) {
    const int i = r.doubled() / 2 - 1;
    op.x[i] = p.g;
    op.z[i] = (i == 0 || i == p.L - 1) ? p.h - p.J : p.h;
  } else {
    op.zz[(r.doubled() - 3) / 2] = p.J;
  }
  return op;
}

ChainOperator weighted_spread_operator_terms(const CouplingParams& p) {
  ChainOperator w(p.L);
  for (const auto& r : local_positions(p.L)) {
    ChainOperator term = local_term_operator(r, p);
    term *= r.distance_from_center(p.L);
    w += term;
  }
  return w;
}

ChainOperator central_bond_operator(int L) {
  build_basis(L);
  ChainOperator op(L);
  op.zz[L / 2 - 1] = 1.0;
  return op;
}

SymmetricMatrix build_hamiltonian(const CouplingParams& p, const SpinBasis& basis) {
  if (basis.length != p.L) throw DomainError("build_hamiltonian: basis length differs from L");
  return hamiltonian_operator(p).dense(basis);
}

SymmetricMatrix build_local_term(LocalTermIndex r, const CouplingParams& p,
                                 const SpinBasis& basis) {
  if (basis.length != p.L) throw DomainError("build_local_term: basis length differs from L");
  return local_term_operator(r, p).dense(basis);
}

SymmetricMatrix build_weighted_spread_operator(const CouplingParams& p, const SpinBasis& basis) {
  if (basis.length != p.L) {
    throw DomainError("build_weighted_spread_operator: basis length differs from L");
  }
  return weighted_spread_operator_terms(p).dense(basis);
}

SymmetricMatrix reflection_conjugate(const SymmetricMatrix& m, const SpinBasis& basis) {
  const auto D = static_cast<Eigen::Index>(basis.dimension);
  if (m.dimension() != D) throw DomainError("reflection_conjugate: dimension mismatch");
  std::vector<Eigen::Index> perm(D);
  for (Eigen::Index n = 0; n < D; ++n) {
    perm[n] = static_cast<Eigen::Index>(reflect_index(static_cast<BasisIndex>(n), basis.length));
  }
  Eigen::MatrixXd out(D, D);
  for (Eigen::Index j = 0; j < D; ++j) {
    for (Eigen::Index i = 0; i < D; ++i) out(i, j) = m(perm[i], perm[j]);
  }
  return SymmetricMatrix(std::move(out));
}

SymmetricMatrix project_to_sector(const SymmetricMatrix& m, const ParitySectors& sectors,
                                  Parity which, bool check_commutes) {
  const SpinBasis& basis = sectors.basis();
  if (m.dimension() != static_cast<Eigen::Index>(basis.dimension)) {
    throw DomainError("project_to_sector: matrix dimension differs from 2^L");
  }
  if (check_commutes) {
    const SymmetricMatrix rmr = reflection_conjugate(m, basis);
    const double defect = (rmr.dense() - m.dense()).cwiseAbs().maxCoeff() /
                          std::max(1.0, m.max_abs());
    if (defect > 1e-10) {
      throw SymmetryError("project_to_sector: operator does not commute with the reflection "
                          "(defect " + std::to_string(defect) + ")");
    }
  }
  const auto& orbits = sectors.states(which);
  const auto d = static_cast<Eigen::Index>(orbits.size());
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    const OrbitState& ob = orbits[b];
    for (Eigen::Index a = 0; a <= b; ++a) {
      const OrbitState& oa = orbits[a];
      double v = 0.0;
      const BasisIndex ia[2] = {oa.representative, oa.partner};
      const BasisIndex ib[2] = {ob.representative, ob.partner};
      for (int s = 0; s < (oa.palindrome ? 1 : 2); ++s) {
        const double ca = sectors.coefficient(which, ia[s]);
        for (int t = 0; t < (ob.palindrome ? 1 : 2); ++t) {
          v += ca * sectors.coefficient(which, ib[t]) * m(ia[s], ib[t]);
        }
      }
      out(a, b) = out(b, a) = v;
    }
  }
  return SymmetricMatrix(std::move(out));
}

}  // namespace edlab
