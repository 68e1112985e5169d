#include "edlab/eigensolver.hpp"

#include "edlab/errors.hpp"

#include <lapacke.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace edlab {

namespace {

DecompositionResidual residual_of(const Eigen::MatrixXd& m, const Eigen::VectorXd& w,
                                  const Eigen::MatrixXd& q) {
  DecompositionResidual r;
  const auto n = q.cols();
  r.orthonormality =
      (q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  r.reconstruction = (m - q * w.asDiagonal() * q.transpose()).cwiseAbs().maxCoeff();
  return r;
}

constexpr std::array<char, 8> kMagic = {'E', 'D', 'L', 'A', 'B', 'E', 'I', 'G'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::filesystem::path& file) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw IoError("truncated eigendecomposition cache file: " + file.string());
  }
  return v;
}

}  // namespace

SpectralDecomposition eigendecompose(const SymmetricMatrix& m) {
  const auto n = m.dimension();
  SpectralDecomposition d;
  d.source_dimension = n;
  if (n == 0) return d;

  d.eigenvectors = m.dense();
  d.eigenvalues.resize(n);
  const auto ln = static_cast<lapack_int>(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', ln, d.eigenvectors.data(), ln,
                                   d.eigenvalues.data());
  if (info != 0) {
    d.eigenvectors = m.dense();
    info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', ln, d.eigenvectors.data(), ln,
                         d.eigenvalues.data());
  }
  if (info != 0) {
    double achieved = std::numeric_limits<double>::quiet_NaN();
    if (d.eigenvalues.allFinite() && d.eigenvectors.allFinite()) {
      achieved = residual_of(m.dense(), d.eigenvalues, d.eigenvectors).reconstruction;
    }
    throw NumericalError("symmetric eigensolver failed to converge (LAPACK info " +
                             std::to_string(info) + ")",
                         achieved);
  }
  return d;
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& m) {
  return eigendecompose(SymmetricMatrix(m));
}

DecompositionResidual verify_decomposition(const SymmetricMatrix& m,
                                           const SpectralDecomposition& d) {
  if (d.eigenvectors.rows() != m.dimension() || d.eigenvectors.cols() != d.eigenvalues.size() ||
      d.eigenvalues.size() != m.dimension()) {
    throw DomainError("verify_decomposition: dimension mismatch");
  }
  return residual_of(m.dense(), d.eigenvalues, d.eigenvectors);
}

Eigen::MatrixXd rotate_to_eigenbasis(const SpectralDecomposition& d, const Eigen::MatrixXd& m) {
  if (m.rows() != d.eigenvectors.rows() || m.cols() != m.rows()) {
    throw DomainError("rotate_to_eigenbasis: dimension mismatch");
  }
  Eigen::MatrixXd mq = m * d.eigenvectors;
  Eigen::MatrixXd out = d.eigenvectors.transpose() * mq;
  return 0.5 * (out + out.transpose());
}

std::uint64_t CacheKey::hash() const {
  // FNV-1a over the exact bit patterns of the key
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(std::bit_cast<std::uint64_t>(params.g));
  mix(std::bit_cast<std::uint64_t>(params.h));
  mix(std::bit_cast<std::uint64_t>(params.J));
  mix(static_cast<std::uint64_t>(params.L));
  for (char c : sector) mix(static_cast<unsigned char>(c));
  return h;
}

std::string CacheKey::file_name() const {
  std::ostringstream os;
  os << "eig_" << std::hex << hash() << std::dec << "_L" << params.L << "_" << sector << ".bin";
  return os.str();
}

void write_decomposition(const std::filesystem::path& file, const CacheKey& key,
                         const SpectralDecomposition& d) {
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open cache file for writing: " + tmp.string());
    os.write(kMagic.data(), kMagic.size());
    put(os, EigenCache::kVersion);
    put(os, key.params.g);
    put(os, key.params.h);
    put(os, key.params.J);
    put(os, static_cast<std::int32_t>(key.params.L));
    put(os, static_cast<std::uint32_t>(key.sector.size()));
    os.write(key.sector.data(), static_cast<std::streamsize>(key.sector.size()));
    put(os, static_cast<std::uint64_t>(d.eigenvalues.size()));
    put(os, static_cast<std::uint64_t>(d.source_dimension));
    os.write(reinterpret_cast<const char*>(d.eigenvalues.data()),
             static_cast<std::streamsize>(sizeof(double) * d.eigenvalues.size()));
    os.write(reinterpret_cast<const char*>(d.eigenvectors.data()),
             static_cast<std::streamsize>(sizeof(double) * d.eigenvectors.size()));
    if (!os) throw IoError("failed writing cache file: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoError("cannot move cache file into place: " + file.string() + ": " + ec.message());
}

std::optional<SpectralDecomposition> read_decomposition(const std::filesystem::path& file,
                                                        const CacheKey& key) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw IoError("cannot open cache file: " + file.string());
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("not an eigendecomposition cache file: " + file.string());
  }
  if (get<std::uint32_t>(is, file) != EigenCache::kVersion) return std::nullopt;
  CouplingParams p;
  p.g = get<double>(is, file);
  p.h = get<double>(is, file);
  p.J = get<double>(is, file);
  p.L = get<std::int32_t>(is, file);
  std::string sector(get<std::uint32_t>(is, file), '\0');
  if (!is.read(sector.data(), static_cast<std::streamsize>(sector.size()))) {
    throw IoError("truncated eigendecomposition cache file: " + file.string());
  }
  const CouplingParams& k = key.params;
  if (std::bit_cast<std::uint64_t>(p.g) != std::bit_cast<std::uint64_t>(k.g) ||
      std::bit_cast<std::uint64_t>(p.h) != std::bit_cast<std::uint64_t>(k.h) ||
      std::bit_cast<std::uint64_t>(p.J) != std::bit_cast<std::uint64_t>(k.J) || p.L != k.L ||
      sector != key.sector) {
    return std::nullopt;
  }
  const auto n = static_cast<Eigen::Index>(get<std::uint64_t>(is, file));
  SpectralDecomposition d;
  d.source_dimension = static_cast<Eigen::Index>(get<std::uint64_t>(is, file));
  d.eigenvalues.resize(n);
  d.eigenvectors.resize(n, n);
  is.read(reinterpret_cast<char*>(d.eigenvalues.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  is.read(reinterpret_cast<char*>(d.eigenvectors.data()),
          static_cast<std::streamsize>(sizeof(double) * n * n));
  if (!is) throw IoError("truncated eigendecomposition cache file: " + file.string());
  return d;
}

EigenCache::EigenCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!enabled()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::optional<SpectralDecomposition> EigenCache::load(const CacheKey& key) {
  if (!enabled()) return std::nullopt;
  const auto file = dir_ / key.file_name();
  if (!std::filesystem::exists(file)) {
    ++misses_;
    return std::nullopt;
  }
  auto d = read_decomposition(file, key);
  if (d) {
    ++hits_;
  } else {
    ++misses_;
  }
  return d;
}

void EigenCache::store(const CacheKey& key, const SpectralDecomposition& d) {
  if (!enabled()) return;
  write_decomposition(dir_ / key.file_name(), key, d);
}

}  // namespace edlab
