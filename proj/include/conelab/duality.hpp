#pragma once

#include "conelab/body.hpp"
#include "conelab/cone.hpp"
#include "conelab/linalg.hpp"
#include "conelab/sections.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace conelab {

/// Dual cone under the dot-product identification of V* with R^n.
inline ConeRep dual(const ConeRep& C) {
  ConeRep out;
  out.id = C.id + "*";
  out.provenance = C.provenance;
  if (C.is_polyhedral()) {
    const PolyhedralCone& P = C.polyhedral();
    if (P.generators.empty() || P.halfspaces.empty())
      throw Error(ErrorCode::Degenerate, "dual: polyhedral cone needs both descriptions");
    out.shape = PolyhedralCone{P.dim, P.halfspaces, P.generators};
    return out;
  }
  // C = {x^T M x <= 0} (u-nappe)  =>  C* = {psi^T M^{-1} psi <= 0} on the nappe of u,
  // since u is strictly positive on C \ {0}.
  const EllipsoidalCone& E = C.ellipsoidal();
  const Mat M = E.quadric();
  Mat Minv = M.inverse();
  Minv = 0.5 * (Minv + Minv.transpose());
  out.shape = EllipsoidalCone::from_quadric(Minv, E.u());
  return out;
}

/// min of phi over the base ellipsoid {u . x = 1} of an ellipsoidal cone.
inline double min_over_base(const EllipsoidalCone& E, const Vec& phi) {
  const Ellipsoid base = E.base();
  const Vec g = E.basis().transpose() * phi;
  Eigen::LLT<Mat> llt(base.form);
  // max over y^T F y <= 1 of g . y is sqrt(g^T F^{-1} g)
  return phi.dot(base.center) - std::sqrt(std::max(0.0, g.dot(llt.solve(g))));
}

/// phi > 0 on C \ {0}.
inline bool strictly_positive(const ConeRep& C, const Vec& phi, double tol = 1e-12) {
  require_dim(phi, C.dim(), "strictly_positive");
  const double pn = phi.norm();
  if (pn == 0.0) return false;
  if (C.is_ellipsoidal()) {
    const EllipsoidalCone& E = C.ellipsoidal();
    return min_over_base(E, phi) > tol * pn * E.center().norm();
  }
  for (const Vec& g : C.polyhedral().generators)
    if (phi.dot(g) <= tol * pn) return false;
  return true;
}

/// Membership test for C* that only looks at a bounded section S_phi(C).
class DualMembership {
 public:
  explicit DualMembership(ConvexBody section) : section_(std::move(section)) {
    scale_ = max_norm(section_);
  }

  /// min of psi over the section.
  double min_value(const Vec& psi) const {
    if (section_.is_polytope()) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& v : section_.polytope().vertices) best = std::min(best, psi.dot(v));
      return best;
    }
    const Ellipsoid& e = section_.ellipsoid();
    const Vec g = e.basis.transpose() * psi;
    Eigen::LLT<Mat> llt(e.form);
    return psi.dot(e.center) - std::sqrt(std::max(0.0, g.dot(llt.solve(g))));
  }

  bool contains(const Vec& psi, double tol_mem = 1e-9) const {
    const double pn = psi.norm();
    if (pn == 0.0) return true;
    return min_value(psi) >= -tol_mem * pn * scale_;
  }

  const ConvexBody& section() const { return section_; }

 private:
  ConvexBody section_;
  double scale_ = 1.0;
};

inline DualMembership dual_from_section(const ConeRep& C, const Vec& phi) {
  Section s = section_by_functional(C, phi);
  if (is_unbounded(s)) throw Error(ErrorCode::UnboundedSection, "dual_from_section: S_phi contains a ray");
  if (is_empty(s)) throw Error(ErrorCode::EmptySection, "dual_from_section: S_phi is empty");
  return DualMembership(body_of(s));
}

struct DualityCertificate {
  Vec phi;
  double r_star = std::numeric_limits<double>::infinity();  // max |x| over S_phi
  double eps_star = 0.0;                                     // dist(phi, boundary of C*)
  double product_defect = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Distance from an interior point phi of the quadric cone {p^T N p <= 0}
/// to its boundary: the nearest point is (I - mu N)^{-1} phi with mu the
/// root of sum nu_i a_i^2 / (1 - mu nu_i)^2 on (0, 1/nu_max). When phi has
/// no weight on the top eigenspace the root may sit at 1/nu_max itself, and
/// the nearest points form a sphere in that eigenspace.
inline double quadric_boundary_distance(const Mat& N, const Vec& phi) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(N);
  const Vec& nu = eig.eigenvalues();
  const Vec a = eig.eigenvectors().transpose() * phi;
  const Eigen::Index n = nu.size();
  const double nu_max = nu(n - 1);
  std::vector<bool> top(static_cast<std::size_t>(n));
  double top_mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    top[static_cast<std::size_t>(i)] = nu(i) >= nu_max * (1.0 - 1e-10);
    if (top[static_cast<std::size_t>(i)]) top_mass += a(i) * a(i);
  }
  auto f_rest = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (top[static_cast<std::size_t>(i)]) continue;
      const double d = 1.0 - mu * nu(i);
      s += nu(i) * a(i) * a(i) / (d * d);
    }
    return s;
  };
  auto step_norm2 = [&](double mu, bool skip_top) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (skip_top && top[static_cast<std::size_t>(i)]) continue;
      const double t = a(i) * mu * nu(i) / (1.0 - mu * nu(i));
      s += t * t;
    }
    return s;
  };

  const double mu_cap = 1.0 / nu_max;
  if (top_mass <= 1e-24 * a.squaredNorm()) {
    const double rest = f_rest(mu_cap);
    if (rest <= 0.0) {
      // psi = (I - N/nu_max)^{-1} phi off the top eigenspace, plus a free
      // component z there with nu_max |z|^2 = -rest.
      return std::sqrt(step_norm2(mu_cap, true) - rest / nu_max);
    }
  }
  auto f = [&](double mu) {
    double s = f_rest(mu);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!top[static_cast<std::size_t>(i)]) continue;
      const double d = 1.0 - mu * nu(i);
      s += nu(i) * a(i) * a(i) / (d * d);
    }
    return s;
  };
  double lo = 0.0;
  double hi = mu_cap;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  // psi - phi = V diag(mu nu / (1 - mu nu)) a
  return std::sqrt(step_norm2(0.5 * (lo + hi), false));
}

}  // namespace detail

/// Pairs the radius of S_phi(C) with the distance from phi to the boundary
/// of C*; their product is 1 whenever S_phi is bounded and nonempty.
inline DualityCertificate boundedness_certificate(const ConeRep& C, const Vec& phi) {
  require_dim(phi, C.dim(), "boundedness_certificate");
  DualityCertificate cert;
  cert.phi = phi;
  const Section s = section_by_functional(C, phi);
  if (is_empty(s)) {
    cert.r_star = 0.0;
    return cert;
  }
  if (is_unbounded(s)) return cert;
  cert.r_star = max_norm(body_of(s));

  if (C.is_polyhedral()) {
    // Facets of C* are orthogonal to the generators of C. The nearest boundary
    // point is the projection onto a facet hyperplane that stays in C*.
    const PolyhedralCone& P = C.polyhedral();
    const ConeRep D = dual(C);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& g : P.generators) {
      const double height = g.dot(phi);
      const Vec foot = phi - height * g;
      if (contains(D, foot, 1e-9)) best = std::min(best, height);
    }
    cert.eps_star = std::isfinite(best) ? best : 0.0;
  } else {
    const ConeRep D = dual(C);
    const Mat N = D.ellipsoidal().quadric();
    cert.eps_star = interior_contains(D, phi, 0.0) ? detail::quadric_boundary_distance(N, phi) : 0.0;
  }
  cert.product_defect = std::abs(cert.r_star * cert.eps_star - 1.0);
  return cert;
}

struct PerpSection {
  ConvexBody body;
  AffineSubspace affine;  // {x : psi . x = 1 for all psi in the dual section}
};

/// Section of C perpendicular to a bounded section of C* spanned by `dual_points`.
inline PerpSection perp_section(const ConeRep& C, std::span<const Vec> dual_points, double tol_mem = 1e-9) {
  if (dual_points.empty()) throw Error(ErrorCode::BadParams, "perp_section: no dual points");
  for (const Vec& p : dual_points) require_dim(p, C.dim(), "perp_section");
  const AffineSubspace B = affine_span(dual_points);
  const ConeRep D = dual(C);
  const Section dual_section = section_by_affine(D, B, tol_mem);
  if (is_unbounded(dual_section)) throw Error(ErrorCode::UnboundedInput, "perp_section: dual section is unbounded");
  if (is_empty(dual_section)) throw Error(ErrorCode::EmptySection, "perp_section: dual section is empty");
  bool meets_interior = false;
  for (const Vec& p : dual_points) meets_interior = meets_interior || interior_contains(D, p, tol_mem);
  if (!meets_interior) meets_interior = interior_contains(D, body_centroid(body_of(dual_section)), tol_mem);
  if (!meets_interior) throw Error(ErrorCode::PreconditionFailed, "perp_section: dual section misses int C*");

  AffineSubspace A = perp_affine(B);
  Section s = section_by_affine(C, A, tol_mem);
  if (!is_body(s)) throw Error(ErrorCode::EmptySection, "perp_section: perpendicular section is empty");
  return {body_of(s), std::move(A)};
}

/// Given S_phi(C) bounded and symmetric about x, checks that S_x(C*) is
/// centrally symmetric about phi. The verdict's defect includes the offset of
/// the detected center from phi.
inline SymmetryVerdict check_symmetry_duality(const ConeRep& C, const Vec& phi, const Vec& x,
                                              double tol_sym = 1e-8) {
  require_dim(phi, C.dim(), "check_symmetry_duality");
  require_dim(x, C.dim(), "check_symmetry_duality");
  const Section primal = section_by_functional(C, phi);
  if (!is_body(primal)) throw Error(ErrorCode::PreconditionFailed, "S_phi is not a bounded section");
  const ConvexBody& sp = body_of(primal);
  const SymmetryVerdict pv = center_of_symmetry(sp, tol_sym);
  const double pd = diameter(sp);
  if (!pv.symmetric || (pv.center - x).norm() > tol_sym * std::max(pd, 1e-300))
    throw Error(ErrorCode::PreconditionFailed, "S_phi is not centrally symmetric about x");

  const Section dual_section = section_by_functional(dual(C), x);
  if (!is_body(dual_section)) throw Error(ErrorCode::PreconditionFailed, "S_x(C*) is not bounded");
  const ConvexBody& sd = body_of(dual_section);
  SymmetryVerdict v = center_of_symmetry(sd, tol_sym);
  const double dd = diameter(sd);
  const double offset = dd > 0.0 ? (v.center - phi).norm() / dd : (v.center - phi).norm();
  if (offset > v.defect) {
    v.defect = offset;
    v.witness = v.center;
  }
  v.symmetric = v.defect <= tol_sym;
  return v;
}

}  // namespace conelab
