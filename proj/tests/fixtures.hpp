#pragma once

#include "conelab/cone.hpp"

#include <cmath>

namespace conelab::testing {

/// {z >= sqrt(x^2 + y^2)}
inline ConeRep ice_cream() {
  Mat basis(3, 2);
  basis << 1, 0, 0, 1, 0, 0;
  return {EllipsoidalCone(make_vec({0, 0, 1}), make_vec({0, 0, 1}), basis, Mat::Identity(2, 2)), "ice-cream", {}};
}

inline ConeRep orthant(Eigen::Index n) {
  std::vector<Vec> gens;
  for (Eigen::Index i = 0; i < n; ++i) gens.push_back(Vec::Unit(n, i));
  return {polyhedral_from_generators(gens), "orthant", {}};
}

/// Cone over the square {(+-1, +-1, 1)}.
inline ConeRep square_cone() {
  std::vector<Vec> gens{make_vec({1, 1, 1}), make_vec({1, -1, 1}), make_vec({-1, 1, 1}), make_vec({-1, -1, 1})};
  return {polyhedral_from_generators(gens), "square", {}};
}

}  // namespace conelab::testing

#include "conelab/random.hpp"

namespace conelab::testing {

/// Random ellipsoidal cone: unit axis, center off-axis, form A^T A + 0.1 I.
inline ConeRep random_ellipsoidal(Rng& rng, Eigen::Index n) {
  const Vec u = rng.unit_vec(n);
  const Mat basis = annihilator(LinearSubspace{u}).basis;
  const Vec center = u + basis * (0.5 * rng.normal_vec(n - 1));
  const Mat A = rng.normal_mat(n - 1, n - 1);
  const Mat form = A.transpose() * A + 0.1 * Mat::Identity(n - 1, n - 1);
  return {EllipsoidalCone(u, center, basis, form), "random-ellipsoidal", {}};
}

/// Random pointed polyhedral cone with generators in a cap around e_n.
inline ConeRep random_polyhedral(Rng& rng, Eigen::Index n, int count) {
  std::vector<Vec> gens;
  for (int i = 0; i < count; ++i) {
    Vec g = rng.normal_vec(n) * 0.6;
    g(n - 1) = 1.0;
    gens.push_back(g.normalized());
  }
  return {polyhedral_from_generators(gens), "random-polyhedral", {}};
}

}  // namespace conelab::testing
