#pragma once

#include "conelab/body.hpp"
#include "conelab/double_description.hpp"
#include "conelab/linalg.hpp"
#include "conelab/nnls.hpp"
#include "conelab/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace conelab {

/// Pointed polyhedral cone with both descriptions kept in sync:
/// cone(generators) == {x : h . x >= 0 for every halfspace normal h}.
/// All vectors are unit length.
struct PolyhedralCone {
  Eigen::Index dim = 0;
  std::vector<Vec> generators;
  std::vector<Vec> halfspaces;

  Mat generator_rows() const { return rows_of(generators, dim); }
  Mat halfspace_rows() const { return rows_of(halfspaces, dim); }
};

namespace detail {

inline std::vector<Vec> normalized_unique(const std::vector<Vec>& vs, Eigen::Index n, const char* what) {
  std::vector<Vec> out;
  for (const Vec& v : vs) {
    require_dim(v, n, what);
    const double nrm = v.norm();
    if (nrm <= 1e-300) continue;
    Vec u = v / nrm;
    bool dup = false;
    for (const Vec& w : out) {
      if ((w - u).norm() < 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(u));
  }
  return out;
}

/// Keeps the vectors of `candidates` that are extreme with respect to the
/// constraints `against`: the active constraints must have rank n - 1.
inline std::vector<Vec> keep_extreme(const std::vector<Vec>& candidates, const std::vector<Vec>& against,
                                     Eigen::Index n, double tol) {
  std::vector<Vec> out;
  for (const Vec& c : candidates) {
    std::vector<Vec> active;
    for (const Vec& a : against)
      if (std::abs(a.dot(c)) <= tol) active.push_back(a);
    if (static_cast<Eigen::Index>(active.size()) >= n - 1 && numerical_rank(rows_of(active, n), 1e-8) >= n - 1)
      out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Facet normals from generators (double description); generators that are
/// not extreme rays are dropped. Degenerate unless the cone is full-dimensional.
inline PolyhedralCone vrep_to_hrep(const PolyhedralCone& C, double tol = 1e-9) {
  const Eigen::Index n = C.dim;
  std::vector<Vec> gens = detail::normalized_unique(C.generators, n, "vrep_to_hrep");
  if (static_cast<Eigen::Index>(gens.size()) < n || numerical_rank(rows_of(gens, n), 1e-10) < n)
    throw Error(ErrorCode::Degenerate, "vrep_to_hrep: generators do not span the ambient space");
  std::vector<Vec> facets = extreme_rays(rows_of(gens, n), tol);
  if (facets.empty()) throw Error(ErrorCode::Degenerate, "vrep_to_hrep: cone is the whole space");
  std::vector<Vec> extreme = detail::keep_extreme(gens, facets, n, 1e-8);
  return {n, std::move(extreme), std::move(facets)};
}

/// Generators from facet normals; redundant halfspaces are dropped.
/// Degenerate unless the cone is pointed and full-dimensional.
inline PolyhedralCone hrep_to_vrep(const PolyhedralCone& C, double tol = 1e-9) {
  const Eigen::Index n = C.dim;
  std::vector<Vec> hs = detail::normalized_unique(C.halfspaces, n, "hrep_to_vrep");
  if (static_cast<Eigen::Index>(hs.size()) < n || numerical_rank(rows_of(hs, n), 1e-10) < n)
    throw Error(ErrorCode::Degenerate, "hrep_to_vrep: cone contains a line");
  if (!least_distance(rows_of(hs, n), Vec::Ones(static_cast<Eigen::Index>(hs.size()))))
    throw Error(ErrorCode::Degenerate, "hrep_to_vrep: cone has empty interior");
  std::vector<Vec> gens = extreme_rays(rows_of(hs, n), tol);
  std::vector<Vec> facets = detail::keep_extreme(hs, gens, n, 1e-8);
  return {n, std::move(gens), std::move(facets)};
}

inline PolyhedralCone polyhedral_from_generators(const std::vector<Vec>& generators) {
  if (generators.empty()) throw Error(ErrorCode::Degenerate, "no generators");
  return vrep_to_hrep(PolyhedralCone{generators.front().size(), generators, {}});
}

inline PolyhedralCone polyhedral_from_halfspaces(const std::vector<Vec>& halfspaces) {
  if (halfspaces.empty()) throw Error(ErrorCode::Degenerate, "no halfspaces");
  return hrep_to_vrep(PolyhedralCone{halfspaces.front().size(), {}, halfspaces});
}

/// Closed cone over an ellipsoid in the hyperplane {u . x = 1}:
/// x in C  <=>  t := u.x >= 0  and  |R B^T (x - t c)| <= t,  where form = R^T R.
class EllipsoidalCone {
 public:
  EllipsoidalCone(Vec u, Vec center, Mat basis, Mat form) {
    const Eigen::Index n = u.size();
    if (n < 2) throw Error(ErrorCode::BadParams, "ellipsoidal cone needs dimension >= 2");
    require_dim(center, n, "ellipsoidal center");
    if (basis.rows() != n || basis.cols() != n - 1 || form.rows() != n - 1 || form.cols() != n - 1)
      throw Error(ErrorCode::DimensionMismatch, "ellipsoidal cone: basis/form shape");
    const double un = u.norm();
    if (std::abs(un - 1.0) > 1e-9) throw Error(ErrorCode::BadParams, "ellipsoidal cone: u must be unit");
    if (std::abs(u.dot(center) - 1.0) > 1e-9)
      throw Error(ErrorCode::BadParams, "ellipsoidal cone: u . center must be 1");
    if ((basis.transpose() * u).norm() > 1e-9 ||
        (basis.transpose() * basis - Mat::Identity(n - 1, n - 1)).norm() > 1e-9)
      throw Error(ErrorCode::BadParams, "ellipsoidal cone: basis must be an orthonormal basis of u^perp");
    Mat sym = 0.5 * (form + form.transpose());
    if ((sym - form).norm() > 1e-9 * std::max(1.0, form.norm()))
      throw Error(ErrorCode::BadParams, "ellipsoidal cone: form not symmetric");
    Eigen::LLT<Mat> llt(sym);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::BadParams, "ellipsoidal cone: form not positive definite");
    u_ = std::move(u);
    center_ = std::move(center);
    basis_ = std::move(basis);
    form_ = std::move(sym);
    root_ = llt.matrixU();
    inv_root_ = root_.triangularView<Eigen::Upper>().solve(Mat::Identity(n - 1, n - 1));
  }

  /// Cone {x : x^T M x <= 0} on the nappe containing `interior`, for a
  /// symmetric M with exactly one negative eigenvalue.
  static EllipsoidalCone from_quadric(const Mat& M, const Vec& interior) {
    Vec axis = -(M * interior);
    const double an = axis.norm();
    if (an <= 1e-300) throw Error(ErrorCode::Degenerate, "from_quadric: degenerate axis");
    axis /= an;
    LinearSubspace B = annihilator(LinearSubspace{axis});
    const Mat P = B.basis.transpose() * M * B.basis;
    const Vec q = B.basis.transpose() * (M * axis);
    const double s = axis.dot(M * axis);
    Eigen::LLT<Mat> llt(P);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::Degenerate, "from_quadric: section not elliptic");
    const Vec y0 = -llt.solve(q);
    const double rho = -q.dot(y0) - s;
    if (!(rho > 0.0)) throw Error(ErrorCode::Degenerate, "from_quadric: empty section");
    Vec center = axis + B.basis * y0;
    center /= axis.dot(center);
    return EllipsoidalCone(axis, center, B.basis, P / rho);
  }

  Eigen::Index dim() const { return u_.size(); }
  const Vec& u() const { return u_; }
  const Vec& center() const { return center_; }
  const Mat& basis() const { return basis_; }
  const Mat& form() const { return form_; }

  /// Homogeneous defect t - |R B^T (x - t c)|; nonnegative exactly on C.
  double margin(const Vec& x) const {
    const double t = u_.dot(x);
    const Vec z = basis_.transpose() * (x - t * center_);
    return t - (root_ * z).norm();
  }

  /// Symmetric M with C = {x^T M x <= 0, u . x >= 0}.
  Mat quadric() const {
    const Eigen::Index n = dim();
    const Mat W = basis_.transpose() * (Mat::Identity(n, n) - center_ * u_.transpose());
    Mat M = W.transpose() * form_ * W - u_ * u_.transpose();
    return 0.5 * (M + M.transpose());
  }

  /// center + B R^{-1} w; on the boundary of the base when |w| = 1.
  Vec base_point(const Vec& w) const { return center_ + basis_ * (inv_root_ * w); }

  Ellipsoid base() const { return {center_, basis_, form_}; }

 private:
  Vec u_;
  Vec center_;
  Mat basis_;
  Mat form_;
  Mat root_;
  Mat inv_root_;
};

struct Provenance {
  std::string kind = "manual";
  std::uint64_t seed = 0;
  double delta = 0.0;
};

struct ConeRep {
  std::variant<PolyhedralCone, EllipsoidalCone> shape;
  std::string id;
  Provenance provenance;

  Eigen::Index dim() const {
    return std::visit([](const auto& c) -> Eigen::Index {
      if constexpr (std::is_same_v<std::decay_t<decltype(c)>, PolyhedralCone>) return c.dim;
      else return c.dim();
    }, shape);
  }
  bool is_polyhedral() const { return std::holds_alternative<PolyhedralCone>(shape); }
  bool is_ellipsoidal() const { return std::holds_alternative<EllipsoidalCone>(shape); }
  const PolyhedralCone& polyhedral() const { return std::get<PolyhedralCone>(shape); }
  const EllipsoidalCone& ellipsoidal() const { return std::get<EllipsoidalCone>(shape); }
};

/// Signed membership margin normalized by |x|: >= 0 on C.
inline double membership_margin(const ConeRep& C, const Vec& x) {
  require_dim(x, C.dim(), "membership");
  const double nx = x.norm();
  if (nx == 0.0) return 0.0;
  if (C.is_ellipsoidal()) return C.ellipsoidal().margin(x) / nx;
  double worst = std::numeric_limits<double>::infinity();
  for (const Vec& h : C.polyhedral().halfspaces) worst = std::min(worst, h.dot(x));
  return worst / nx;
}

inline bool contains(const ConeRep& C, const Vec& x, double tol_mem = 1e-9) {
  return membership_margin(C, x) >= -tol_mem;
}

inline bool interior_contains(const ConeRep& C, const Vec& x, double tol_mem = 1e-9) {
  if (x.size() == C.dim() && x.norm() == 0.0) return false;
  return membership_margin(C, x) > tol_mem;
}

/// Membership in cone(generators), decided by nonnegative least squares.
inline bool contains_vrep(const PolyhedralCone& C, const Vec& x, double tol_mem = 1e-9) {
  require_dim(x, C.dim, "contains_vrep");
  const double nx = x.norm();
  if (nx == 0.0) return true;
  const NnlsResult r = nnls(C.generator_rows().transpose(), x);
  return r.residual <= tol_mem * nx;
}

/// Minimum-norm functional with phi . g >= 1 on every generator, if any.
inline std::optional<Vec> strictly_positive_functional(const PolyhedralCone& C) {
  return least_distance(C.generator_rows(), Vec::Ones(static_cast<Eigen::Index>(C.generators.size())));
}

inline bool is_pointed(const ConeRep& C) {
  if (C.is_ellipsoidal()) return true;
  return strictly_positive_functional(C.polyhedral()).has_value();
}

/// Cone over a bounded body whose affine hull misses the origin.
inline ConeRep cone_over(const ConvexBody& body, double tol_origin = 1e-10) {
  const Eigen::Index n = body.ambient_dim();
  if (body.is_polytope()) {
    const auto& verts = body.polytope().vertices;
    if (verts.empty()) throw Error(ErrorCode::EmptySection, "cone_over: empty polytope");
    const AffineSubspace hull = affine_span(verts);
    if (hull.base.norm() <= tol_origin) throw Error(ErrorCode::OriginInSpan, "cone_over: hull contains 0");
    return {polyhedral_from_generators(verts), "cone_over", {}};
  }
  const Ellipsoid& e = body.ellipsoid();
  if (e.basis.cols() != n - 1)
    throw Error(ErrorCode::Degenerate, "cone_over: ellipsoid must span a hyperplane");
  Vec u = annihilator(LinearSubspace{e.basis}).basis.col(0);
  double height = u.dot(e.center);
  if (std::abs(height) <= tol_origin) throw Error(ErrorCode::OriginInSpan, "cone_over: hyperplane contains 0");
  if (height < 0.0) {
    u = -u;
    height = -height;
  }
  return {EllipsoidalCone(u, e.center / height, e.basis, e.form * (height * height)), "cone_over", {}};
}

}  // namespace conelab
