#include "edlab/basis.hpp"

#include "edlab/errors.hpp"

#include <cmath>
#include <string>

namespace edlab {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

SpinBasis build_basis(int L, int max_length) {
  if (L < 2 || L > max_length) {
    throw ConfigError("chain length L=" + std::to_string(L) + " must satisfy 2 <= L <= " +
                      std::to_string(max_length));
  }
  if (L % 2 != 0) {
    throw ConfigError("chain length L=" + std::to_string(L) +
                      " must be even so the central bond is defined");
  }
  return SpinBasis{L, std::size_t{1} << L};
}

BasisIndex reflect_index(BasisIndex n, int L) {
  if (L < 1 || L > 63 || n >= (BasisIndex{1} << L)) {
    throw DomainError("basis index " + std::to_string(n) + " out of range for L=" +
                      std::to_string(L));
  }
  BasisIndex r = 0;
  for (int b = 0; b < L; ++b) {
    r |= ((n >> b) & 1u) << (L - 1 - b);
  }
  return r;
}

std::string_view to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

ParitySectors::ParitySectors(const SpinBasis& basis)
    : basis_(basis),
      even_pos_(basis.dimension, -1),
      odd_pos_(basis.dimension, -1),
      odd_sign_(basis.dimension, 0) {
  even_.reserve(even_sector_dimension(basis.length));
  odd_.reserve(odd_sector_dimension(basis.length));
  for (BasisIndex n = 0; n < basis.dimension; ++n) {
    const BasisIndex m = reflect_index(n, basis.length);
    if (m < n) continue;
    const bool palindrome = (m == n);
    even_pos_[n] = even_pos_[m] = static_cast<std::int32_t>(even_.size());
    even_.push_back({n, m, palindrome});
    if (!palindrome) {
      odd_pos_[n] = odd_pos_[m] = static_cast<std::int32_t>(odd_.size());
      odd_sign_[n] = 1;
      odd_sign_[m] = -1;
      odd_.push_back({n, m, false});
    }
  }
}

std::int64_t ParitySectors::position(Parity p, BasisIndex n) const {
  return p == Parity::even ? even_pos_.at(n) : odd_pos_.at(n);
}

double ParitySectors::coefficient(Parity p, BasisIndex n) const {
  if (p == Parity::even) {
    if (even_pos_.at(n) < 0) return 0.0;
    return even_[even_pos_[n]].palindrome ? 1.0 : kInvSqrt2;
  }
  return odd_sign_.at(n) * kInvSqrt2;
}

Eigen::VectorXcd ParitySectors::project(Parity p, const Eigen::VectorXcd& full) const {
  if (static_cast<std::size_t>(full.size()) != basis_.dimension) {
    throw DomainError("project: vector length does not match 2^L");
  }
  const auto& orbits = states(p);
  Eigen::VectorXcd out(orbits.size());
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const auto& o = orbits[k];
    if (o.palindrome) {
      out[k] = full[o.representative];
    } else if (p == Parity::even) {
      out[k] = kInvSqrt2 * (full[o.representative] + full[o.partner]);
    } else {
      out[k] = kInvSqrt2 * (full[o.representative] - full[o.partner]);
    }
  }
  return out;
}

Eigen::VectorXcd ParitySectors::embed(Parity p, const Eigen::VectorXcd& sector) const {
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(basis_.dimension, 1);
  embed_add(p, sector, full);
  return full.col(0);
}

void ParitySectors::embed_add(Parity p, const Eigen::MatrixXcd& sector,
                              Eigen::MatrixXcd& full) const {
  const auto& orbits = states(p);
  if (static_cast<std::size_t>(sector.rows()) != orbits.size() ||
      static_cast<std::size_t>(full.rows()) != basis_.dimension ||
      full.cols() != sector.cols()) {
    throw DomainError("embed: shape mismatch between sector and full-space arrays");
  }
  const double sign = p == Parity::even ? 1.0 : -1.0;
  for (Eigen::Index c = 0; c < sector.cols(); ++c) {
    for (std::size_t k = 0; k < orbits.size(); ++k) {
      const auto& o = orbits[k];
      if (o.palindrome) {
        full(o.representative, c) += sector(k, c);
      } else {
        const std::complex<double> a = kInvSqrt2 * sector(k, c);
        full(o.representative, c) += a;
        full(o.partner, c) += sign * a;
      }
    }
  }
}

Eigen::MatrixXd ParitySectors::isometry(Parity p) const {
  const auto& orbits = states(p);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(basis_.dimension, orbits.size());
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const auto& o = orbits[k];
    if (o.palindrome) {
      v(o.representative, k) = 1.0;
    } else {
      v(o.representative, k) = kInvSqrt2;
      v(o.partner, k) = p == Parity::even ? kInvSqrt2 : -kInvSqrt2;
    }
  }
  return v;
}

ParitySectors build_parity_sectors(const SpinBasis& basis) {
  if (basis.dimension != (std::size_t{1} << basis.length)) {
    throw DomainError("build_parity_sectors: inconsistent basis");
  }
  return ParitySectors(basis);
}

std::size_t even_sector_dimension(int L) {
  return ((std::size_t{1} << L) + (std::size_t{1} << (L / 2))) / 2;
}

std::size_t odd_sector_dimension(int L) {
  return ((std::size_t{1} << L) - (std::size_t{1} << (L / 2))) / 2;
}

}  // namespace edlab
