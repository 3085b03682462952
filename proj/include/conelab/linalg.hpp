#pragma once

#include "conelab/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace conelab {

/// Linear subspace of R^n held as an orthonormal basis (one column per direction).
struct LinearSubspace {
  Mat basis;  // n x k, orthonormal columns

  static LinearSubspace zero(Eigen::Index n) { return {Mat(n, 0)}; }
  static LinearSubspace full(Eigen::Index n) { return {Mat::Identity(n, n)}; }

  Eigen::Index ambient() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }

  Mat projector() const { return basis * basis.transpose(); }
  Vec project(const Vec& x) const { return basis * (basis.transpose() * x); }

  /// Distance from x to the subspace.
  double distance(const Vec& x) const { return (x - project(x)).norm(); }
};

/// Affine subspace base + span(directions). Canonical form keeps the base
/// orthogonal to the directions, so it is the point closest to the origin.
struct AffineSubspace {
  Vec base;
  LinearSubspace directions;

  Eigen::Index ambient() const { return base.size(); }
  Eigen::Index dim() const { return directions.dim(); }
  Eigen::Index codim() const { return ambient() - dim(); }

  double distance(const Vec& x) const { return directions.distance(x - base); }

  /// Coordinates of x (assumed in the subspace) relative to the base.
  Vec coords(const Vec& x) const { return directions.basis.transpose() * (x - base); }
  Vec point(const Vec& coords) const { return base + directions.basis * coords; }
};

/// Orthonormal basis for the column span of `cols`; singular values below
/// tol_rank * sigma_max are treated as zero.
inline LinearSubspace orthonormal_span(const Mat& cols, double tol_rank = 1e-9) {
  const Eigen::Index n = cols.rows();
  if (cols.cols() == 0) return LinearSubspace::zero(n);
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= std::numeric_limits<double>::min()) return LinearSubspace::zero(n);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol_rank * sv(0)) ++rank;
  return {svd.matrixU().leftCols(rank)};
}

inline AffineSubspace make_affine(const Vec& point, LinearSubspace directions) {
  Vec base = point - directions.project(point);
  return {std::move(base), std::move(directions)};
}

/// Orthogonal complement; the annihilator under the dot-product identification.
inline LinearSubspace annihilator(const LinearSubspace& L) {
  const Eigen::Index n = L.ambient();
  if (L.dim() == 0) return LinearSubspace::full(n);
  if (L.dim() >= n) return LinearSubspace::zero(n);
  Eigen::HouseholderQR<Mat> qr(L.basis);
  const Mat Q = qr.householderQ() * Mat::Identity(n, n);
  return {Q.rightCols(n - L.dim())};
}

/// Hyperplane {x : phi . x = 1}.
inline AffineSubspace hyperplane(const Vec& phi) {
  const double nn = phi.squaredNorm();
  if (nn == 0.0) throw Error(ErrorCode::Degenerate, "hyperplane: zero functional");
  LinearSubspace normal{phi / std::sqrt(nn)};
  return {phi / nn, annihilator(normal)};
}

/// Smallest affine subspace containing the points, with numerical rank
/// decided on the centered point matrix.
inline AffineSubspace affine_span(std::span<const Vec> points, double tol_rank = 1e-9) {
  if (points.empty()) throw Error(ErrorCode::BadParams, "affine_span: no points");
  const Eigen::Index n = points.front().size();
  Vec mean = Vec::Zero(n);
  for (const Vec& p : points) {
    require_dim(p, n, "affine_span");
    mean += p;
  }
  mean /= static_cast<double>(points.size());
  Mat centered(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) centered.col(static_cast<Eigen::Index>(i)) = points[i] - mean;
  // A cloud of coincident points only has rounding-level spread.
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv(0) > 1e-14 * std::max(1.0, mean.norm())) {
    while (rank < sv.size() && sv(rank) > tol_rank * sv(0)) ++rank;
  }
  LinearSubspace dirs{svd.matrixU().leftCols(rank)};
  return make_affine(mean, std::move(dirs));
}

/// The perpendicular affine space {phi : phi . x = 1 for all x in A}.
inline AffineSubspace perp_affine(const AffineSubspace& A, double tol_origin = 1e-10) {
  const double dist = A.base.norm();
  if (dist <= tol_origin) throw Error(ErrorCode::OriginInSpan, "perp_affine: 0 lies in the affine subspace");
  const Eigen::Index n = A.ambient();
  Mat span(n, A.dim() + 1);
  span.leftCols(A.dim()) = A.directions.basis;
  span.col(A.dim()) = A.base / dist;
  LinearSubspace dirs = annihilator(LinearSubspace{span});
  return {A.base / (dist * dist), std::move(dirs)};
}

/// Orthogonal projection onto annihilator(L), a concrete model of V/L.
inline Mat quotient_project(const LinearSubspace& L) {
  const Eigen::Index n = L.ambient();
  if (L.dim() >= n) throw Error(ErrorCode::Degenerate, "quotient_project: subspace is the whole space");
  return Mat::Identity(n, n) - L.projector();
}

/// Spectral distance between the orthogonal projectors; infinite when the
/// dimensions differ.
inline double subspace_distance(const LinearSubspace& a, const LinearSubspace& b) {
  if (a.ambient() != b.ambient() || a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  if (a.dim() == 0) return 0.0;
  const Mat diff = a.projector() - b.projector();
  Eigen::JacobiSVD<Mat> svd(diff);
  return svd.singularValues()(0);
}

inline double subspace_distance(const AffineSubspace& a, const AffineSubspace& b) {
  const double lin = subspace_distance(a.directions, b.directions);
  if (!std::isfinite(lin)) return lin;
  return std::max(lin, (a.base - b.base).norm());
}

/// True when every point of a lies in b, within tol.
inline bool is_contained(const AffineSubspace& a, const AffineSubspace& b, double tol = 1e-9) {
  if (a.ambient() != b.ambient() || a.dim() > b.dim()) return false;
  if (b.distance(a.base) > tol * std::max(1.0, a.base.norm())) return false;
  for (Eigen::Index j = 0; j < a.dim(); ++j)
    if (b.directions.distance(a.directions.basis.col(j)) > tol) return false;
  return true;
}

/// Numerical rank of a matrix, cut relative to the largest singular value.
inline Eigen::Index numerical_rank(const Mat& m, double tol_rank = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& sv = svd.singularValues();
  if (sv(0) <= std::numeric_limits<double>::min()) return 0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol_rank * sv(0)) ++r;
  return r;
}

}  // namespace conelab
