#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

namespace itreg {

/// Seeded random source with a fixed cross-platform sampling scheme.
/// mt19937_64 output is pinned by the standard; uniforms and normals are
/// derived from it with explicit formulas so that a given seed reproduces
/// bit-identical streams on any conforming implementation.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // rejection sampling keeps the distribution exact
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller; second value cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    // row-major fill order so the stream layout is part of the contract
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  /// Fisher-Yates shuffle of 0..n-1, returning the first k entries.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + uniform_index(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// FNV-1a over the raw little-endian bytes of the doubles.
inline std::uint64_t fnv1a_digest(std::uint64_t state, const double* data,
                                  std::size_t count) {
  constexpr std::uint64_t prime = 1099511628211ull;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      state ^= (bits >> (8 * b)) & 0xffu;
      state *= prime;
    }
  }
  return state;
}

inline std::uint64_t digest(const Eigen::VectorXd& v,
                            std::uint64_t state = 14695981039346656037ull) {
  return fnv1a_digest(state, v.data(), static_cast<std::size_t>(v.size()));
}

inline std::uint64_t digest(const Eigen::MatrixXd& m,
                            std::uint64_t state = 14695981039346656037ull) {
  return fnv1a_digest(state, m.data(), static_cast<std::size_t>(m.size()));
}

}  // namespace itreg
