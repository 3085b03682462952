#pragma once

#include "conelab/body.hpp"
#include "conelab/cone.hpp"
#include "conelab/duality.hpp"
#include "conelab/linalg.hpp"
#include "conelab/properties.hpp"
#include "conelab/random.hpp"
#include "conelab/sections.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conelab {

struct SectionExtension {
  ConvexBody input_section;
  ConvexBody extended_section;
  AffineSubspace line;  // the midpoint chord, in the orthogonal model of V / L
  Vec center;
  Vec functional;  // the extended section is S_functional(C)
};

namespace detail {

inline Vec rotate90(const Vec& v) { return make_vec({-v(1), v(0)}); }

inline double cross2(const Vec& a, const Vec& b) { return a(0) * b(1) - a(1) * b(0); }

/// Boundary rays of the projected 2-D cone E^T C, given s = E^T y in its interior.
inline std::pair<Vec, Vec> projected_boundary_rays(const ConeRep& C, const Mat& E, const Vec& s) {
  if (C.is_polyhedral()) {
    std::optional<Vec> hi_ray, lo_ray;
    double hi = -std::numbers::pi, lo = std::numbers::pi;
    for (const Vec& g : C.polyhedral().generators) {
      const Vec p = E.transpose() * g;
      if (p.norm() <= 1e-12 * g.norm())
        throw Error(ErrorCode::SectionUnbounded, "extend_codim2_section: a generator lies in the section's direction space");
      const double angle = std::atan2(cross2(s, p), s.dot(p));
      if (angle > hi) {
        hi = angle;
        hi_ray = p;
      }
      if (angle < lo) {
        lo = angle;
        lo_ray = p;
      }
    }
    if (hi - lo >= std::numbers::pi - 1e-12)
      throw Error(ErrorCode::QuotientNotPointed, "extend_codim2_section: projected cone contains a line");
    return {*hi_ray, *lo_ray};
  }
  // (E^T C)* = {zeta : E zeta in C*}: a 2-D slice of the dual quadric cone.
  const Mat N = dual(C).ellipsoidal().quadric();
  Mat N2 = E.transpose() * N * E;
  N2 = 0.5 * (N2 + N2.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(N2);
  const double l0 = eig.eigenvalues()(0);
  const double l1 = eig.eigenvalues()(1);
  if (!(l0 < 0.0 && l1 > 0.0))
    throw Error(ErrorCode::QuotientNotPointed, "extend_codim2_section: projected dual cone is degenerate");
  const Vec e0 = eig.eigenvectors().col(0);
  const Vec e1 = eig.eigenvectors().col(1);
  Vec z1 = std::sqrt(l1) * e0 + std::sqrt(-l0) * e1;
  Vec z2 = std::sqrt(l1) * e0 - std::sqrt(-l0) * e1;
  if (z1.dot(s) < 0.0) z1 = -z1;
  if (z2.dot(s) < 0.0) z2 = -z2;
  // E^T C = {eta : eta . z1 >= 0, eta . z2 >= 0}.
  Vec r1 = rotate90(z1);
  if (r1.dot(z2) < 0.0) r1 = -r1;
  Vec r2 = rotate90(z2);
  if (r2.dot(z1) < 0.0) r2 = -r2;
  return {r1, r2};
}

}  // namespace detail

/// Extends a bounded codimension-2 section S of C to a bounded hyperplane
/// section T containing it: project C along the directions of S to a 2-D cone,
/// take the chord through the image of S that it bisects, and lift back.
inline SectionExtension extend_codim2_section(const ConeRep& C, const ConvexBody& S) {
  const Eigen::Index n = C.dim();
  if (S.ambient_dim() != n) throw Error(ErrorCode::DimensionMismatch, "extend_codim2_section: ambient dimension");
  const AffineSubspace hull = body_hull(S);
  if (hull.codim() != 2) throw Error(ErrorCode::NotCodim2, "extend_codim2_section: section is not of codimension 2");
  const Vec y = body_centroid(S);
  if (!interior_contains(C, y)) throw Error(ErrorCode::PreconditionFailed, "extend_codim2_section: S misses int C");

  const Mat E = annihilator(hull.directions).basis;  // n x 2 model of V / L
  const Vec s = E.transpose() * y;
  const auto [r1, r2] = detail::projected_boundary_rays(C, E, s);
  Mat R(2, 2);
  R.col(0) = r1;
  R.col(1) = r2;
  const Vec t = R.colPivHouseholderQr().solve(2.0 * s);
  if (!(t(0) > 0.0 && t(1) > 0.0))
    throw Error(ErrorCode::PreconditionFailed, "extend_codim2_section: no chord has s as its midpoint");
  const Vec p1 = t(0) * r1;
  const Vec p2 = t(1) * r2;
  const Vec nu = detail::rotate90(p1 - p2);
  const Vec phi = E * nu / nu.dot(s);

  const Section T = section_by_functional(C, phi);
  if (!is_body(T)) throw Error(ErrorCode::SectionUnbounded, "extend_codim2_section: extended section is unbounded");
  SectionExtension out{S, body_of(T), make_affine(E * s, LinearSubspace{E * (p1 - p2).normalized()}), Vec(), phi};
  out.center = center_of_symmetry(out.extended_section).center;
  return out;
}

struct FbiBody {
  ConvexBody body;
  FlatnessVerdict flatness;
  SymmetryVerdict symmetry;
  bool fitted = false;        // body is the fitted ellipsoid rather than the sample hull
  double fit_residual = 0.0;  // RMS residual of the quadric fit (planar case only)
};

/// The body conv(dC meet d(2x - C)). When the samples are planar and lie on a
/// quadric to within tol_fit, the fitted ellipsoid is returned; otherwise the
/// hull of the samples.
inline FbiBody fbi_body(const ConeRep& C, const Vec& x, int n_dirs = 0, std::uint64_t seed = 0,
                        double tol_rank = 1e-7, double tol_fit = 1e-6) {
  require_dim(x, C.dim(), "fbi_body");
  if (!interior_contains(C, x)) throw Error(ErrorCode::NotInterior, "fbi_body: x is not interior");
  const Eigen::Index n = C.dim();
  const Eigen::Index m = n - 1;
  const Eigen::Index unknowns = m * (m + 1) / 2 + m;
  n_dirs = std::max<int>(n_dirs, static_cast<int>(std::max<Eigen::Index>(3 * unknowns, n + 8)));
  std::vector<Vec> gamma = boundary_intersection(C, 2.0 * x, n_dirs, seed);

  FbiBody out{make_polytope({}, make_affine(x, LinearSubspace::zero(n))), flatness(gamma, tol_rank), {}, false, 0.0};
  const FlatnessVerdict& f = out.flatness;
  if (f.affine_codim == 1 && m >= 1) {
    Vec mean = Vec::Zero(n);
    for (const Vec& p : gamma) mean += p;
    mean /= static_cast<double>(gamma.size());
    Mat X(static_cast<Eigen::Index>(gamma.size()), n);
    for (std::size_t i = 0; i < gamma.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = (gamma[i] - mean).transpose();
    Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullV);
    const Mat D = svd.matrixV().leftCols(m);
    // z^T A z + b^T z = 1 in plane coordinates about the sample mean.
    Mat rows(X.rows(), unknowns);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      const Vec z = D.transpose() * X.row(r).transpose();
      Eigen::Index c = 0;
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) rows(r, c++) = (i == j ? 1.0 : 2.0) * z(i) * z(j);
      for (Eigen::Index i = 0; i < m; ++i) rows(r, c++) = z(i);
    }
    const Vec rhs = Vec::Ones(rows.rows());
    const Vec q = rows.colPivHouseholderQr().solve(rhs);
    out.fit_residual = (rows * q - rhs).norm() / std::sqrt(static_cast<double>(rows.rows()));
    Mat A(m, m);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) A(i, j) = A(j, i) = q(c++);
    const Vec b = q.tail(m);
    Eigen::LLT<Mat> llt(A);
    if (out.fit_residual <= tol_fit && llt.info() == Eigen::Success) {
      const Vec z0 = -0.5 * llt.solve(b);
      const double kappa = 1.0 + z0.dot(A * z0);
      if (kappa > 0.0) {
        out.body = make_ellipsoid(mean + D * z0, D, A / kappa);
        out.fitted = true;
      }
    }
    if (!out.fitted) out.body = make_polytope(gamma, make_affine(mean, LinearSubspace{D}));
  } else {
    out.body = make_polytope(gamma, affine_span(gamma));
  }
  out.symmetry = center_of_symmetry(out.body);
  return out;
}

enum class ConeKind { Ellipsoidal, Simplicial, PolyhedralMGon, PerturbedEllipsoidal };

inline std::string_view to_string(ConeKind k) {
  switch (k) {
    case ConeKind::Ellipsoidal: return "ellipsoidal";
    case ConeKind::Simplicial: return "simplicial";
    case ConeKind::PolyhedralMGon: return "polyhedral_m_gon";
    case ConeKind::PerturbedEllipsoidal: return "perturbed_ellipsoidal";
  }
  return "?";
}

inline ConeKind parse_cone_kind(std::string_view s) {
  for (ConeKind k : {ConeKind::Ellipsoidal, ConeKind::Simplicial, ConeKind::PolyhedralMGon,
                     ConeKind::PerturbedEllipsoidal})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::BadParams, "unknown cone kind '" + std::string(s) + "'");
}

namespace detail {

inline Mat random_rotation(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(rng.normal_mat(n, n));
  Mat Q = qr.householderQ();
  // Fix column signs so the result depends only on the random matrix.
  for (Eigen::Index i = 0; i < n; ++i)
    if (qr.matrixQR()(i, i) < 0.0) Q.col(i) *= -1.0;
  return Q;
}

inline EllipsoidalCone random_ellipsoidal_cone(Rng& rng, Eigen::Index n) {
  const Vec u = rng.unit_vec(n);
  const Mat basis = annihilator(LinearSubspace{u}).basis;
  const Vec center = u + basis * (0.5 * rng.normal_vec(n - 1));
  const Mat A = rng.normal_mat(n - 1, n - 1);
  const Mat form = A.transpose() * A + 0.1 * Mat::Identity(n - 1, n - 1);
  return EllipsoidalCone(u, center, basis, form);
}

/// n generators around a random axis, pairwise at least 15 degrees apart with
/// positive pairwise dot products, and linearly independent.
inline std::vector<Vec> random_simplicial_generators(Rng& rng, Eigen::Index n) {
  const double max_cos = std::cos(15.0 * std::numbers::pi / 180.0);
  for (int restart = 0; restart < 1000; ++restart) {
    const Vec axis = rng.unit_vec(n);
    const Mat perp = annihilator(LinearSubspace{axis}).basis;
    std::vector<Vec> gens;
    int attempts = 0;
    while (static_cast<Eigen::Index>(gens.size()) < n && attempts++ < 10000) {
      const Vec g = (axis + 1.2 * perp * rng.ball_vec(n - 1)).normalized();
      bool ok = true;
      for (const Vec& h : gens) {
        const double c = g.dot(h);
        ok = ok && c > 0.05 && c < max_cos;
      }
      if (ok) gens.push_back(g);
    }
    if (static_cast<Eigen::Index>(gens.size()) < n) continue;
    if (numerical_rank(rows_of(gens, n), 1e-3) == n) return gens;
  }
  throw Error(ErrorCode::BadParams, "generate_cone: could not draw a simplicial cone");
}

}  // namespace detail

/// Random cone of the requested kind; identical (kind, n, seed, delta) give
/// identical cones.
inline ConeRep generate_cone(ConeKind kind, Eigen::Index n, std::uint64_t seed, double delta = 0.0) {
  if (n < 2) throw Error(ErrorCode::BadParams, "generate_cone: dimension must be at least 2");
  if (!(delta >= 0.0)) throw Error(ErrorCode::BadParams, "generate_cone: delta must be nonnegative");
  if ((kind == ConeKind::PolyhedralMGon || kind == ConeKind::PerturbedEllipsoidal) && n < 3)
    throw Error(ErrorCode::BadParams, "generate_cone: this kind needs dimension at least 3");
  Rng rng(seed);
  ConeRep out;
  out.provenance = {std::string(to_string(kind)), seed, kind == ConeKind::PerturbedEllipsoidal ? delta : 0.0};
  out.id = std::string(to_string(kind)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);

  switch (kind) {
    case ConeKind::Ellipsoidal:
      out.shape = detail::random_ellipsoidal_cone(rng, n);
      break;
    case ConeKind::Simplicial:
      out.shape = polyhedral_from_generators(detail::random_simplicial_generators(rng, n));
      break;
    case ConeKind::PolyhedralMGon: {
      // Regular m-gon times a centered (n-3)-simplex, at height 1, randomly rotated.
      constexpr int choices[] = {4, 5, 7, 9};
      const int m = choices[rng.below(4)];
      const Eigen::Index k = n - 3;
      std::vector<Vec> simplex(static_cast<std::size_t>(k + 1), Vec::Zero(k));
      for (Eigen::Index i = 0; i < k; ++i) simplex[static_cast<std::size_t>(i + 1)](i) = 1.0;
      Vec mid = Vec::Zero(k);
      for (const Vec& v : simplex) mid += v / static_cast<double>(k + 1);
      const Mat Q = detail::random_rotation(rng, n);
      std::vector<Vec> gens;
      for (int j = 0; j < m; ++j) {
        const double t = 2.0 * std::numbers::pi * j / m;
        for (const Vec& v : simplex) {
          Vec g(n);
          g(0) = std::cos(t);
          g(1) = std::sin(t);
          g.segment(2, k) = v - mid;
          g(n - 1) = 1.0;
          gens.push_back(Q * g);
        }
      }
      out.shape = polyhedral_from_generators(gens);
      break;
    }
    case ConeKind::PerturbedEllipsoidal: {
      const EllipsoidalCone E = detail::random_ellipsoidal_cone(rng, n);
      if (delta == 0.0) {
        out.shape = E;
        break;
      }
      // Base boundary resampled with radial factor 1 + delta s^2 cos(3 theta),
      // (s, theta) polar coordinates in a random 2-plane of the base.
      Rng bump = rng.substream(1);
      const Mat P = orthonormal_span(bump.normal_mat(n - 1, 2)).basis;
      std::vector<Vec> dirs;
      for (int j = 0; j < 24; ++j) {
        const double t = 2.0 * std::numbers::pi * j / 24.0;
        dirs.push_back(std::cos(t) * P.col(0) + std::sin(t) * P.col(1));
      }
      for (Eigen::Index j = 0; j < 4 * (n - 1); ++j) dirs.push_back(bump.unit_vec(n - 1));
      std::vector<Vec> gens;
      for (const Vec& w : dirs) {
        const double a = w.dot(P.col(0));
        const double b = w.dot(P.col(1));
        const double factor = 1.0 + delta * (a * a + b * b) * std::cos(3.0 * std::atan2(b, a));
        gens.push_back(E.base_point(factor * w));
      }
      out.shape = polyhedral_from_generators(gens);
      break;
    }
  }
  return out;
}

}  // namespace conelab
