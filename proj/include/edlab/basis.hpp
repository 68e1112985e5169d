#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace edlab {

using BasisIndex = std::uint64_t;

inline constexpr int kMaxChainLength = 16;

/// Computational z-basis of an open chain of `length` spins-1/2.
///
/// Bit b of a basis index holds site b+1; a set bit is spin up (sigma^z = +1).
struct SpinBasis {
  int length = 0;
  std::size_t dimension = 0;

  bool spin_up(BasisIndex n, int site) const {
    return (n >> (site - 1)) & 1u;
  }
  /// sigma^z eigenvalue of `site` (1-based) in basis state `n`.
  int sigma_z(BasisIndex n, int site) const { return spin_up(n, site) ? 1 : -1; }
};

/// Throws ConfigError unless L is even and 2 <= L <= max_length.
SpinBasis build_basis(int L, int max_length = kMaxChainLength);

/// Image of basis state n under the site inversion i -> L+1-i.
BasisIndex reflect_index(BasisIndex n, int L);

enum class Parity { even, odd };

std::string_view to_string(Parity p);

/// One reflection orbit {n, R n} as a sector basis vector.
/// Even: (|n> + |Rn>)/sqrt2, odd: (|n> - |Rn>)/sqrt2, palindrome: |n> (even only).
struct OrbitState {
  BasisIndex representative;  // the smaller index of the orbit
  BasisIndex partner;
  bool palindrome;
};

/// Even/odd reflection-parity sectors of a SpinBasis.
class ParitySectors {
 public:
  explicit ParitySectors(const SpinBasis& basis);

  const SpinBasis& basis() const { return basis_; }
  std::size_t dimension(Parity p) const { return states(p).size(); }
  std::size_t even_dim() const { return even_.size(); }
  std::size_t odd_dim() const { return odd_.size(); }
  const std::vector<OrbitState>& states(Parity p) const {
    return p == Parity::even ? even_ : odd_;
  }

  /// Sector-basis coordinate of full basis state n, or -1 if n has no
  /// component in this sector (palindromes in the odd sector).
  std::int64_t position(Parity p, BasisIndex n) const;
  /// Overlap <sector state at position(p, n) | n>.
  double coefficient(Parity p, BasisIndex n) const;

  /// Orthogonal projection of a full-space vector onto sector coordinates.
  Eigen::VectorXcd project(Parity p, const Eigen::VectorXcd& full) const;
  /// Embedding of sector coordinates back into the full space.
  Eigen::VectorXcd embed(Parity p, const Eigen::VectorXcd& sector) const;
  /// Adds the embedding of every column of `sector` into `full` (D x k).
  void embed_add(Parity p, const Eigen::MatrixXcd& sector, Eigen::MatrixXcd& full) const;

  /// Dense D x d isometry whose columns are the sector basis vectors.
  Eigen::MatrixXd isometry(Parity p) const;

 private:
  SpinBasis basis_;
  std::vector<OrbitState> even_;
  std::vector<OrbitState> odd_;
  // position and sign lookups indexed by full basis index
  std::vector<std::int32_t> even_pos_;
  std::vector<std::int32_t> odd_pos_;
  std::vector<std::int8_t> odd_sign_;
};

ParitySectors build_parity_sectors(const SpinBasis& basis);

/// Closed-form sector sizes (2^L +- 2^{L/2}) / 2.
std::size_t even_sector_dimension(int L);
std::size_t odd_sector_dimension(int L);

}  // namespace edlab
