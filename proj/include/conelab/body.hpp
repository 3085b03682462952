#pragma once

#include "conelab/linalg.hpp"
#include "conelab/types.hpp"

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

namespace conelab {

struct Polytope {
  std::vector<Vec> vertices;  // ambient coordinates
};

/// {center + basis * y : y^T form y <= 1}
struct Ellipsoid {
  Vec center;
  Mat basis;  // n x k, orthonormal columns
  Mat form;   // k x k, symmetric positive definite
};

/// Bounded convex set sitting inside an ambient affine subspace of R^n.
struct ConvexBody {
  AffineSubspace ambient;
  std::variant<Polytope, Ellipsoid> shape;

  bool is_polytope() const { return std::holds_alternative<Polytope>(shape); }
  bool is_ellipsoid() const { return std::holds_alternative<Ellipsoid>(shape); }
  const Polytope& polytope() const { return std::get<Polytope>(shape); }
  const Ellipsoid& ellipsoid() const { return std::get<Ellipsoid>(shape); }
  Eigen::Index ambient_dim() const { return ambient.ambient(); }
};

inline ConvexBody make_polytope(std::vector<Vec> vertices, AffineSubspace ambient) {
  return {std::move(ambient), Polytope{std::move(vertices)}};
}

inline ConvexBody make_ellipsoid(Vec center, Mat basis, Mat form) {
  AffineSubspace ambient = make_affine(center, LinearSubspace{basis});
  return {std::move(ambient), Ellipsoid{std::move(center), std::move(basis), std::move(form)}};
}

/// Affine hull of the body itself (may be smaller than the ambient subspace).
inline AffineSubspace body_hull(const ConvexBody& body, double tol_rank = 1e-9) {
  if (body.is_ellipsoid()) {
    const Ellipsoid& e = body.ellipsoid();
    return make_affine(e.center, LinearSubspace{e.basis});
  }
  return affine_span(body.polytope().vertices, tol_rank);
}

inline double diameter(const ConvexBody& body) {
  if (body.is_ellipsoid()) {
    const Ellipsoid& e = body.ellipsoid();
    if (e.form.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> eig(e.form);
    return 2.0 / std::sqrt(eig.eigenvalues()(0));
  }
  const auto& v = body.polytope().vertices;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]).norm());
  return best;
}

/// Vertex centroid for polytopes, center for ellipsoids.
inline Vec body_centroid(const ConvexBody& body) {
  if (body.is_ellipsoid()) return body.ellipsoid().center;
  const auto& v = body.polytope().vertices;
  Vec c = Vec::Zero(v.front().size());
  for (const Vec& p : v) c += p;
  return c / static_cast<double>(v.size());
}

/// Ellipsoid in its own coordinates: y^T F y <= 1 where x = center + basis*y.
inline double ellipsoid_gauge(const Ellipsoid& e, const Vec& y) {
  return std::sqrt(std::max(0.0, y.dot(e.form * y)));
}

/// Symmetric square root inverse F^{-1/2}; maps the unit sphere onto the
/// boundary of {y^T F y <= 1}.
inline Mat inverse_sqrt(const Mat& form) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(form);
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

namespace detail {

/// max |a + G w|^2 over |w| <= 1 with G symmetric positive definite, given in
/// the eigenbasis of G^2 (eigenvalues g2 ascending, rotated shift a).
inline double max_shifted_quadratic(const Vec& g2, const Vec& a) {
  const Eigen::Index k = g2.size();
  if (k == 0) return a.squaredNorm();
  const double top = g2(k - 1);
  // w_i(mu) = g_i a_i / (mu - g_i^2); find mu > top with |w(mu)| = 1.
  auto wnorm2 = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double w = std::sqrt(g2(i)) * a(i) / (mu - g2(i));
      s += w * w;
    }
    return s;
  };
  auto value = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double g = std::sqrt(g2(i));
      const double w = g * a(i) / (mu - g2(i));
      s += (a(i) + g * w) * (a(i) + g * w);
    }
    return s;
  };
  // Hard case: the top component of a vanishes and the limit norm is < 1.
  const double scale = std::max(1.0, a.norm());
  double top_mass = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    if (g2(i) >= top * (1.0 - 1e-12)) top_mass += a(i) * a(i);
  if (std::sqrt(top_mass) <= 1e-13 * scale) {
    double lim = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (g2(i) >= top * (1.0 - 1e-12)) continue;
      const double w = std::sqrt(g2(i)) * a(i) / (top - g2(i));
      lim += w * w;
    }
    if (lim <= 1.0) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (g2(i) >= top * (1.0 - 1e-12)) continue;
        const double g = std::sqrt(g2(i));
        const double w = g * a(i) / (top - g2(i));
        s += (a(i) + g * w) * (a(i) + g * w);
      }
      return s + top * (1.0 - lim);
    }
  }
  double lo = top;
  double hi = top + std::sqrt(top) * a.norm() + top + 1e-300;
  while (wnorm2(hi) > 1.0) hi = top + 2.0 * (hi - top);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (wnorm2(mid) > 1.0) lo = mid;
    else hi = mid;
  }
  return value(hi);
}

}  // namespace detail

/// Largest Euclidean norm over the body.
inline double max_norm(const ConvexBody& body) {
  if (body.is_polytope()) {
    double best = 0.0;
    for (const Vec& v : body.polytope().vertices) best = std::max(best, v.norm());
    return best;
  }
  // |c + B y|^2 = |c_perp|^2 + |c_B + y|^2 with y = F^{-1/2} w, |w| <= 1.
  const Ellipsoid& e = body.ellipsoid();
  const Vec cb = e.basis.transpose() * e.center;
  const double perp2 = (e.center - e.basis * cb).squaredNorm();
  Eigen::SelfAdjointEigenSolver<Mat> eig(e.form);
  // eigenvalues of F ascending -> eigenvalues of F^{-1} descending.
  const Eigen::Index k = e.form.rows();
  Vec g2(k);
  Vec a(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index src = k - 1 - i;
    g2(i) = 1.0 / eig.eigenvalues()(src);
    a(i) = eig.eigenvectors().col(src).dot(cb);
  }
  return std::sqrt(perp2 + detail::max_shifted_quadratic(g2, a));
}

struct SymmetryVerdict {
  bool symmetric = false;
  Vec center;
  double defect = 0.0;  // worst mismatch / diameter
  Vec witness;
};

}  // namespace conelab
