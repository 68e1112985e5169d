#pragma once

#include "edlab/hamiltonian.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace edlab {

/// Eigenpairs of a real symmetric matrix: M = Q diag(lambda) Q^T with
/// ascending eigenvalues and column k of Q belonging to eigenvalue k.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Eigen::Index source_dimension = 0;

  Eigen::Index dimension() const { return eigenvalues.size(); }
};

/// Full dense symmetric eigendecomposition (divide and conquer, falling back
/// to QR iteration). Throws NumericalError if neither converges.
SpectralDecomposition eigendecompose(const SymmetricMatrix& m);
/// Checks symmetry first; asymmetric input throws DomainError.
SpectralDecomposition eigendecompose(const Eigen::MatrixXd& m);

struct DecompositionResidual {
  double orthonormality = 0.0;   // |Q^T Q - I|_max
  double reconstruction = 0.0;   // |M - Q Lambda Q^T|_max
};

DecompositionResidual verify_decomposition(const SymmetricMatrix& m,
                                           const SpectralDecomposition& d);

/// Q^T M Q, symmetrized against rounding.
Eigen::MatrixXd rotate_to_eigenbasis(const SpectralDecomposition& d, const Eigen::MatrixXd& m);

/// Identifies one cached decomposition: couplings, chain length, and sector
/// label ("even", "odd" or "full").
struct CacheKey {
  CouplingParams params;
  std::string sector;

  std::uint64_t hash() const;
  std::string file_name() const;
};

/// Directory of binary eigendecomposition files. Each file stores a version
/// tag, the key, the dimension, eigenvalues and eigenvectors as raw doubles,
/// so a hit reproduces the decomposition bit for bit.
class EigenCache {
 public:
  static constexpr std::uint32_t kVersion = 1;

  /// An empty directory disables caching.
  explicit EigenCache(std::filesystem::path dir = {});

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& directory() const { return dir_; }

  std::optional<SpectralDecomposition> load(const CacheKey& key);
  void store(const CacheKey& key, const SpectralDecomposition& d);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

void write_decomposition(const std::filesystem::path& file, const CacheKey& key,
                         const SpectralDecomposition& d);
/// Returns nullopt when the file's key differs from `key`; throws IoError on
/// a malformed file.
std::optional<SpectralDecomposition> read_decomposition(const std::filesystem::path& file,
                                                        const CacheKey& key);

}  // namespace edlab
