#pragma once

#include "conelab/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace conelab {

/// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Seeded random source. The engine (mt19937_64) is fully specified by the
/// standard; the distributions below are written out so that output is
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  /// Independent generator keyed by (seed, stream); does not advance this one.
  Rng substream(std::uint64_t stream) const { return Rng(substream_seed(seed_, stream)); }

  std::uint64_t seed() const { return seed_; }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Vec normal_vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Mat normal_mat(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Vec unit_vec(Eigen::Index n) {
    for (;;) {
      Vec v = normal_vec(n);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
  }

  /// Point uniform in the unit ball of R^n.
  Vec ball_vec(Eigen::Index n) {
    const double r = std::pow(uniform(), 1.0 / static_cast<double>(n));
    return r * unit_vec(n);
  }

  /// Flat Dirichlet weights (all concentration parameters 1).
  Vec dirichlet(Eigen::Index n) {
    Vec w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      w(i) = -std::log(u);
    }
    return w / w.sum();
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace conelab
