#pragma once

#include "conelab/body.hpp"
#include "conelab/cone.hpp"
#include "conelab/double_description.hpp"
#include "conelab/linalg.hpp"

#include <limits>
#include <utility>
#include <variant>

namespace conelab {

struct Unbounded {};
struct Empty {};

/// Result of slicing a cone: a bounded body, or one of the two non-body outcomes.
using Section = std::variant<ConvexBody, Unbounded, Empty>;

inline bool is_body(const Section& s) { return std::holds_alternative<ConvexBody>(s); }
inline bool is_unbounded(const Section& s) { return std::holds_alternative<Unbounded>(s); }
inline bool is_empty(const Section& s) { return std::holds_alternative<Empty>(s); }
inline const ConvexBody& body_of(const Section& s) { return std::get<ConvexBody>(s); }

namespace detail {

/// {x^T M x <= 0, u . x >= 0} intersected with A, by restricting the quadric.
inline Section quadric_section(const Mat& M, const Vec& u, const AffineSubspace& A) {
  const Eigen::Index k = A.dim();
  const Vec& b = A.base;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (k == 0) {
    const double t = u.dot(b);
    if (t >= 0.0 && b.dot(M * b) <= 1e-12 * scale * std::max(1.0, b.squaredNorm()))
      return make_polytope({b}, A);
    return Empty{};
  }
  const Mat& D = A.directions.basis;
  Mat P = D.transpose() * M * D;
  P = 0.5 * (P + P.transpose());
  const Vec q = D.transpose() * (M * b);
  const double s = b.dot(M * b);

  Eigen::SelfAdjointEigenSolver<Mat> eig(P);
  const double lmin = eig.eigenvalues()(0);
  const double eps = 1e-12 * scale;
  if (lmin > eps) {
    const Vec y0 = -eig.eigenvectors() *
                   (eig.eigenvalues().cwiseInverse().asDiagonal() * (eig.eigenvectors().transpose() * q));
    const double rho = -q.dot(y0) - s;
    const Vec x0 = b + D * y0;
    if (u.dot(x0) < 0.0) return Empty{};
    const double rho_tol = 1e-12 * scale * std::max(1.0, x0.squaredNorm());
    if (rho < -rho_tol) return Empty{};
    if (rho <= rho_tol) return make_polytope({x0}, A);
    Mat form = P / rho;
    return ConvexBody{A, Ellipsoid{x0, D, std::move(form)}};
  }
  if (lmin < -eps) return Unbounded{};
  // Parabolic restriction: the section is unbounded along the null direction
  // on whichever nappe the quadric decreases into.
  const Vec v = eig.eigenvectors().col(0);
  const double qv = q.dot(v);
  const double uv = u.dot(D * v);
  if (std::abs(qv) <= eps) return Unbounded{};
  const double sigma = qv > 0.0 ? -1.0 : 1.0;
  return sigma * uv > 0.0 ? Section{Unbounded{}} : Section{Empty{}};
}

inline Section polyhedral_section(const PolyhedralCone& C, const AffineSubspace& A, double tol) {
  const Eigen::Index k = A.dim();
  const Vec& b = A.base;
  if (k == 0) {
    for (const Vec& h : C.halfspaces)
      if (h.dot(b) < -tol * std::max(1.0, b.norm())) return Empty{};
    return make_polytope({b}, A);
  }
  const Mat& D = A.directions.basis;
  const auto m = static_cast<Eigen::Index>(C.halfspaces.size());
  Mat H(m + 1, k + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec& h = C.halfspaces[static_cast<std::size_t>(i)];
    H.row(i).head(k) = (D.transpose() * h).transpose();
    H(i, k) = h.dot(b);
  }
  H.row(m).setZero();
  H(m, k) = 1.0;
  std::vector<Vec> rays;
  try {
    rays = extreme_rays(H, 1e-10);
  } catch (const Error&) {
    // Restricted cone contains a line: the section is unbounded (or empty,
    // which a pointed cone cannot produce here).
    return Unbounded{};
  }
  std::vector<Vec> vertices;
  bool recession = false;
  for (const Vec& r : rays) {
    if (r(k) <= 1e-9) recession = true;
    else vertices.push_back(b + D * (r.head(k) / r(k)));
  }
  // Rays with s = 0 are recession directions; they only matter if some ray
  // actually reaches the slice s = 1.
  if (vertices.empty()) return Empty{};
  if (recession) return Unbounded{};
  return make_polytope(std::move(vertices), A);
}

}  // namespace detail

/// C intersected with the affine subspace A.
inline Section section_by_affine(const ConeRep& C, const AffineSubspace& A, double tol_mem = 1e-9) {
  require_dim(A.base, C.dim(), "section_by_affine");
  if (C.is_ellipsoidal()) {
    const EllipsoidalCone& E = C.ellipsoidal();
    return detail::quadric_section(E.quadric(), E.u(), A);
  }
  return detail::polyhedral_section(C.polyhedral(), A, tol_mem);
}

/// S_phi(C) = {y in C : phi . y = 1}.
inline Section section_by_functional(const ConeRep& C, const Vec& phi, double tol = 1e-12) {
  require_dim(phi, C.dim(), "section_by_functional");
  const double pn = phi.norm();
  if (pn == 0.0) throw Error(ErrorCode::BadParams, "section_by_functional: phi = 0");
  const AffineSubspace A = hyperplane(phi);
  if (C.is_ellipsoidal()) return section_by_affine(C, A);
  std::vector<Vec> vertices;
  bool recession = false;
  for (const Vec& g : C.polyhedral().generators) {
    const double t = phi.dot(g);
    if (t > tol * pn) vertices.push_back(g / t);
    else recession = true;
  }
  if (vertices.empty()) return Empty{};
  if (recession) return Unbounded{};
  return make_polytope(std::move(vertices), A);
}

/// Worst relative mismatch of the vertex set under reflection through
/// `candidate`, with the offending vertex.
inline std::pair<double, Vec> symmetry_defect(const ConvexBody& body, const Vec& candidate) {
  const double diam = diameter(body);
  if (body.is_ellipsoid()) {
    const Vec& c = body.ellipsoid().center;
    return {diam > 0.0 ? (c - candidate).norm() / diam : (c - candidate).norm(), c};
  }
  const auto& verts = body.polytope().vertices;
  double worst = 0.0;
  Vec witness = verts.front();
  for (const Vec& v : verts) {
    const Vec mirror = 2.0 * candidate - v;
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& w : verts) best = std::min(best, (mirror - w).norm());
    if (best > worst) {
      worst = best;
      witness = v;
    }
  }
  return {diam > 0.0 ? worst / diam : worst, witness};
}

/// Center of symmetry of a bounded body. Polytopes use the vertex centroid as
/// the candidate, which is the center whenever one exists.
inline SymmetryVerdict center_of_symmetry(const ConvexBody& body, double tol_sym = 1e-8) {
  if (body.is_ellipsoid()) {
    const Vec& c = body.ellipsoid().center;
    return {true, c, 0.0, c};
  }
  if (body.polytope().vertices.empty()) throw Error(ErrorCode::EmptySection, "center_of_symmetry: no vertices");
  Vec c = body_centroid(body);
  auto [defect, witness] = symmetry_defect(body, c);
  return {defect <= tol_sym, std::move(c), defect, std::move(witness)};
}

}  // namespace conelab
