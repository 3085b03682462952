#pragma once

#include "conelab/body.hpp"
#include "conelab/cone.hpp"
#include "conelab/duality.hpp"
#include "conelab/linalg.hpp"
#include "conelab/random.hpp"
#include "conelab/sections.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conelab {

enum class Property { CSS, FBI, ELLIPSOIDAL };
enum class Verdict { PASS, FAIL, INCONCLUSIVE };

inline std::string_view to_string(Property p) {
  switch (p) {
    case Property::CSS: return "CSS";
    case Property::FBI: return "FBI";
    case Property::ELLIPSOIDAL: return "ELLIPSOIDAL";
  }
  return "?";
}

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

struct Witness {
  std::string what;
  Vec point;
  double value = 0.0;
};

struct PropertyReport {
  std::string cone_id;
  Property property = Property::CSS;
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::vector<Witness> witnesses;
  std::int64_t runtime_ms = 0;
  std::map<std::string, double> measures;  // worst observed statistics, kept out of the report file
};

/// Affine-span fit of a sampled boundary intersection.
struct FlatnessVerdict {
  std::vector<Vec> points;
  std::vector<double> singular_values;  // descending, relative to the largest
  Eigen::Index affine_codim = 0;
  bool planar = false;
  Vec witness;  // farthest sample from the best-fit hyperplane
  double witness_distance = 0.0;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Generators of C lying on each facet.
inline std::vector<std::vector<Vec>> facet_generators(const PolyhedralCone& C, double tol = 1e-9) {
  std::vector<std::vector<Vec>> out;
  for (const Vec& h : C.halfspaces) {
    std::vector<Vec> on;
    for (const Vec& g : C.generators)
      if (std::abs(h.dot(g)) <= tol * g.norm()) on.push_back(g);
    out.push_back(std::move(on));
  }
  return out;
}

}  // namespace detail

/// Functional whose section of C is bounded and nonempty, if one exists.
inline std::optional<Vec> bounded_section_functional(const ConeRep& C) {
  if (C.is_ellipsoidal()) return C.ellipsoidal().u();
  return strictly_positive_functional(C.polyhedral());
}

/// Random point of int C.
inline Vec random_interior_point(const ConeRep& C, Rng& rng) {
  const Eigen::Index n = C.dim();
  if (C.is_ellipsoidal()) {
    const double t = rng.uniform(0.5, 2.0);
    return t * C.ellipsoidal().base_point(0.9 * rng.ball_vec(n - 1));
  }
  const auto& gens = C.polyhedral().generators;
  const Vec w = rng.dirichlet(static_cast<Eigen::Index>(gens.size()));
  Vec x = Vec::Zero(n);
  for (std::size_t i = 0; i < gens.size(); ++i) x += (w(static_cast<Eigen::Index>(i)) + 1e-3) * gens[i];
  return x;
}

/// Random point of int C*, given the dual cone.
inline Vec random_dual_interior_point(const ConeRep& dual_cone, Rng& rng) {
  return random_interior_point(dual_cone, rng);
}

/// Points of dC meeting d(a - C): for each sampled boundary direction d,
/// s(d) d with s(d) the largest s keeping a - s d in C.
inline std::vector<Vec> boundary_intersection(const ConeRep& C, const Vec& a, int n_dirs, std::uint64_t seed) {
  require_dim(a, C.dim(), "boundary_intersection");
  if (!interior_contains(C, a)) throw Error(ErrorCode::NotInterior, "boundary_intersection: a is not interior");
  if (n_dirs < 1) throw Error(ErrorCode::BadParams, "boundary_intersection: n_dirs must be positive");
  Rng rng(seed);
  const Eigen::Index n = C.dim();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n_dirs));
  if (C.is_ellipsoidal()) {
    const EllipsoidalCone& E = C.ellipsoidal();
    const Mat M = E.quadric();
    const Vec Ma = M * a;
    const double aMa = a.dot(Ma);
    for (int i = 0; i < n_dirs; ++i) {
      const Vec d = E.base_point(rng.unit_vec(n - 1));
      // d^T M d = 0 on the boundary, so (a - s d)^T M (a - s d) is linear in s.
      const double aMd = Ma.dot(d);
      if (aMd >= 0.0) throw Error(ErrorCode::Degenerate, "boundary_intersection: direction does not exit");
      out.push_back((aMa / (2.0 * aMd)) * d);
    }
    return out;
  }
  const PolyhedralCone& P = C.polyhedral();
  const auto facets = detail::facet_generators(P);
  for (int i = 0; i < n_dirs; ++i) {
    const auto& on = facets[rng.below(facets.size())];
    const Vec w = rng.dirichlet(static_cast<Eigen::Index>(on.size()));
    Vec d = Vec::Zero(n);
    for (std::size_t j = 0; j < on.size(); ++j) d += w(static_cast<Eigen::Index>(j)) * on[j];
    double s = std::numeric_limits<double>::infinity();
    for (const Vec& h : P.halfspaces) {
      const double hd = h.dot(d);
      if (hd > 0.0) s = std::min(s, h.dot(a) / hd);
    }
    if (!std::isfinite(s)) throw Error(ErrorCode::Degenerate, "boundary_intersection: cone is not pointed");
    out.push_back(s * d);
  }
  return out;
}

/// Codimension of the affine span of `points`, with the two-threshold rule:
/// a singular ratio counts as zero below tol_rank.
inline FlatnessVerdict flatness(std::vector<Vec> points, double tol_rank = 1e-7) {
  FlatnessVerdict v;
  if (points.empty()) throw Error(ErrorCode::BadParams, "flatness: no points");
  const Eigen::Index n = points.front().size();
  Vec mean = Vec::Zero(n);
  for (const Vec& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Mat X(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = (points[i] - mean).transpose();
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  v.singular_values.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) v.singular_values[static_cast<std::size_t>(i)] = top > 0.0 ? sv(i) / top : 0.0;
  for (double r : v.singular_values) v.affine_codim += r < tol_rank ? 1 : 0;
  v.planar = v.affine_codim >= 1;
  const Vec normal = svd.matrixV().col(n - 1);
  v.witness = points.front();
  for (const Vec& p : points) {
    const double dist = std::abs(normal.dot(p - mean));
    if (dist >= v.witness_distance) {
      v.witness_distance = dist;
      v.witness = p;
    }
  }
  v.points = std::move(points);
  return v;
}

struct FbiReport {
  PropertyReport report;
  std::vector<FlatnessVerdict> flatness;
};

/// For sampled interior points a, tests whether dC meets d(a - C) inside a
/// hyperplane. PASS needs every fit to have codimension exactly 1: smallest
/// singular ratio below tol_rank and the next one above 10 tol_rank.
inline FbiReport check_fbi(const ConeRep& C, int n_apex_samples = 8, int n_dirs = 0, double tol_rank = 1e-7,
                           std::uint64_t seed = 0) {
  detail::Stopwatch clock;
  const Eigen::Index n = C.dim();
  if (!bounded_section_functional(C)) throw Error(ErrorCode::NoBoundedSection, "check_fbi: no bounded section");
  if (n_dirs <= 0) n_dirs = static_cast<int>(24 + 8 * n);
  if (n_dirs < n + 1) throw Error(ErrorCode::BadParams, "check_fbi: need at least n + 1 directions");

  FbiReport out;
  PropertyReport& r = out.report;
  r.cone_id = C.id;
  r.property = Property::FBI;
  r.seed = seed;
  r.tolerances = {{"tol_rank", tol_rank}, {"n_dirs", static_cast<double>(n_dirs)}};
  const Rng root(seed);
  bool inconclusive = false;
  for (int i = 0; i < n_apex_samples; ++i) {
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    const Vec a = random_interior_point(C, rng);
    FlatnessVerdict f = flatness(boundary_intersection(C, a, n_dirs, rng.substream(1).seed()), tol_rank);
    ++r.samples;
    const double smallest = f.singular_values.back();
    const double second = n >= 2 ? f.singular_values[f.singular_values.size() - 2] : 1.0;
    if (smallest >= 10.0 * tol_rank) {
      r.verdict = Verdict::FAIL;
      r.witnesses.push_back({"apex", a, smallest});
      r.witnesses.push_back({"farthest", f.witness, f.witness_distance});
      for (std::size_t j = 0; j < f.points.size() && j < 12; ++j) r.witnesses.push_back({"gamma", f.points[j], 0.0});
      out.flatness.push_back(std::move(f));
      r.runtime_ms = clock.ms();
      return out;
    }
    if (smallest >= tol_rank || second <= 10.0 * tol_rank) {
      inconclusive = true;
      r.witnesses.push_back({"ambiguous-apex", a, smallest});
    }
    out.flatness.push_back(std::move(f));
  }
  r.verdict = inconclusive ? Verdict::INCONCLUSIVE : Verdict::PASS;
  r.runtime_ms = clock.ms();
  return out;
}

struct CssReport {
  PropertyReport report;
  std::vector<ConvexBody> sections;
};

/// Samples bounded sections of C (hyperplane sections by functionals drawn
/// from int C*, and for codim k >= 2 random (n-k)-flats inside such
/// hyperplanes through interior points) and tests each for a center of symmetry.
inline CssReport check_css(const ConeRep& C, int n_sections = 200, double tol_sym = 1e-8, std::uint64_t seed = 0,
                           std::pair<int, int> codim_range = {1, 2}) {
  detail::Stopwatch clock;
  const Eigen::Index n = C.dim();
  if (!bounded_section_functional(C)) throw Error(ErrorCode::NoBoundedSection, "check_css: no bounded section");
  if (codim_range.first < 1 || codim_range.second < codim_range.first)
    throw Error(ErrorCode::BadParams, "check_css: bad codimension range");
  const int lo = codim_range.first;
  const int hi = std::min<int>(codim_range.second, static_cast<int>(n) - 1);

  CssReport out;
  PropertyReport& r = out.report;
  r.cone_id = C.id;
  r.property = Property::CSS;
  r.seed = seed;
  r.tolerances = {{"tol_sym", tol_sym}, {"codim_lo", lo}, {"codim_hi", std::max(lo, hi)}};
  const ConeRep D = dual(C);
  const Rng root(seed);
  bool inconclusive = false;
  for (int i = 0; i < n_sections; ++i) {
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    const int k = hi >= lo ? lo + i % (hi - lo + 1) : 1;
    Vec phi = random_dual_interior_point(D, rng);
    if (!strictly_positive(C, phi)) {
      inconclusive = true;
      continue;
    }
    Section s = section_by_functional(C, phi);
    AffineSubspace flat = hyperplane(phi);
    if (k >= 2 && is_body(s)) {
      const ConvexBody& base = body_of(s);
      Vec y;
      if (base.is_ellipsoid()) {
        const Ellipsoid& e = base.ellipsoid();
        y = e.center + e.basis * (inverse_sqrt(e.form) * (0.5 * rng.ball_vec(e.form.rows())));
      } else {
        const auto& verts = base.polytope().vertices;
        const Vec w = rng.dirichlet(static_cast<Eigen::Index>(verts.size()));
        y = Vec::Zero(n);
        for (std::size_t j = 0; j < verts.size(); ++j) y += w(static_cast<Eigen::Index>(j)) * verts[j];
      }
      const Mat K = annihilator(LinearSubspace{phi.normalized()}).basis;
      const LinearSubspace sub = orthonormal_span(K * rng.normal_mat(n - 1, n - k));
      flat = make_affine(y, sub);
      s = section_by_affine(C, flat);
    }
    if (!is_body(s)) {
      inconclusive = true;
      continue;
    }
    ++r.samples;
    const SymmetryVerdict v = center_of_symmetry(body_of(s), tol_sym);
    out.sections.push_back(body_of(s));
    if (!v.symmetric) {
      r.verdict = Verdict::FAIL;
      r.witnesses.push_back({k == 1 ? "phi" : "flat-base", k == 1 ? phi : flat.base, v.defect});
      r.witnesses.push_back({"unpaired-vertex", v.witness, v.defect});
      r.witnesses.push_back({"candidate-center", v.center, v.defect});
      r.runtime_ms = clock.ms();
      return out;
    }
  }
  r.verdict = inconclusive || r.samples == 0 ? Verdict::INCONCLUSIVE : Verdict::PASS;
  r.runtime_ms = clock.ms();
  return out;
}

namespace detail {

/// Minkowski gauge of a centrally symmetric body about its center, in
/// orthonormal coordinates of the body's affine hull.
class CenteredGauge {
 public:
  CenteredGauge(const ConvexBody& body, const Vec& center, const AffineSubspace& hull) : hull_(hull) {
    const Eigen::Index k = hull.dim();
    if (body.is_ellipsoid()) {
      const Ellipsoid& e = body.ellipsoid();
      const Mat T = e.basis.transpose() * hull.directions.basis;  // hull coords -> ellipsoid coords
      form_ = T.transpose() * e.form * T;
      return;
    }
    // Facets of the polytope about its center, via the cone over the lifted vertices.
    std::vector<Vec> lifted;
    for (const Vec& v : body.polytope().vertices) {
      Vec w(k + 1);
      w.head(k) = hull.directions.basis.transpose() * (v - center);
      w(k) = 1.0;
      lifted.push_back(std::move(w));
    }
    const PolyhedralCone P = polyhedral_from_generators(lifted);
    for (const Vec& h : P.halfspaces) {
      const double beta = h(k);
      if (beta <= 1e-12 * h.norm()) throw Error(ErrorCode::Degenerate, "gauge: center on the boundary");
      facets_.push_back(-h.head(k) / beta);
    }
  }

  Eigen::Index dim() const { return hull_.dim(); }

  double operator()(const Vec& y) const {
    if (form_.size() > 0) return std::sqrt(std::max(0.0, y.dot(form_ * y)));
    double g = 0.0;
    for (const Vec& a : facets_) g = std::max(g, a.dot(y));
    return g;
  }

 private:
  AffineSubspace hull_;
  Mat form_;
  std::vector<Vec> facets_;
};

/// Least-squares fit of a quadratic form Q with b^T Q b = 1 on the samples;
/// returns the RMS residual.
inline double quadratic_form_fit(const std::vector<Vec>& samples) {
  const Eigen::Index k = samples.front().size();
  const Eigen::Index unknowns = k * (k + 1) / 2;
  Mat A(static_cast<Eigen::Index>(samples.size()), unknowns);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const Vec& b = samples[r];
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i; j < k; ++j) A(static_cast<Eigen::Index>(r), c++) = (i == j ? 1.0 : 2.0) * b(i) * b(j);
  }
  const Vec rhs = Vec::Ones(A.rows());
  const Vec q = A.colPivHouseholderQr().solve(rhs);
  return (A * q - rhs).norm() / std::sqrt(static_cast<double>(A.rows()));
}

}  // namespace detail

/// Decides whether a bounded body is an ellipsoid: central symmetry, the
/// parallelogram law for its gauge, a global quadratic-form fit of boundary
/// samples, and the same fit on random 2-D central sections.
inline PropertyReport certify_ellipsoid(const ConvexBody& body, int n_pairs = 64, double tol_fit = 1e-6,
                                        std::uint64_t seed = 0, double tol_sym = 1e-8) {
  detail::Stopwatch clock;
  PropertyReport r;
  r.property = Property::ELLIPSOIDAL;
  r.seed = seed;
  r.tolerances = {{"tol_fit", tol_fit}, {"tol_sym", tol_sym}};
  const AffineSubspace hull = body_hull(body);
  const Eigen::Index k = hull.dim();
  if (k <= 1) {
    // Points and segments are balls of their own span.
    r.verdict = Verdict::PASS;
    r.runtime_ms = clock.ms();
    return r;
  }
  const SymmetryVerdict sym = center_of_symmetry(body, tol_sym);
  if (!sym.symmetric) {
    r.verdict = Verdict::FAIL;
    r.witnesses.push_back({"asymmetric-vertex", sym.witness, sym.defect});
    r.runtime_ms = clock.ms();
    return r;
  }
  const detail::CenteredGauge gauge(body, sym.center, hull);
  Rng rng(seed);
  auto embed = [&](const Vec& y) -> Vec { return sym.center + hull.directions.basis * y; };

  double worst_pair = 0.0;
  Vec worst_x;
  for (int i = 0; i < n_pairs; ++i) {
    const Vec x = rng.normal_vec(k);
    const Vec y = rng.normal_vec(k);
    const double gx = gauge(x);
    const double gy = gauge(y);
    const double gs = gauge(x + y);
    const double gd = gauge(x - y);
    const double defect = std::abs(gs * gs + gd * gd - 2.0 * gx * gx - 2.0 * gy * gy) / (gx * gx + gy * gy);
    if (defect > worst_pair) {
      worst_pair = defect;
      worst_x = x / gx;
    }
  }
  r.samples += static_cast<std::size_t>(n_pairs);

  const int n_fit = static_cast<int>(std::max<Eigen::Index>(40, 4 * k * (k + 1) / 2));
  std::vector<Vec> boundary;
  for (int i = 0; i < n_fit; ++i) {
    const Vec w = rng.normal_vec(k);
    boundary.push_back(w / gauge(w));
  }
  const double global_fit = detail::quadratic_form_fit(boundary);
  r.samples += boundary.size();

  const int n_planes = std::max(3, n_pairs / 8);
  double worst_plane = 0.0;
  Vec worst_plane_point;
  for (int p = 0; p < n_planes; ++p) {
    const Mat E = orthonormal_span(rng.normal_mat(k, 2)).basis;
    std::vector<Vec> ring;
    for (int j = 0; j < 24; ++j) {
      const double t = rng.uniform(0.0, 6.283185307179586);
      Vec w(2);
      w << std::cos(t), std::sin(t);
      ring.push_back(w / gauge(E * w));
    }
    const double fit = detail::quadratic_form_fit(ring);
    if (fit > worst_plane) {
      worst_plane = fit;
      worst_plane_point = E * ring.front();
    }
  }
  r.samples += static_cast<std::size_t>(n_planes) * 24;

  if (worst_pair > tol_fit) r.witnesses.push_back({"parallelogram", embed(worst_x), worst_pair});
  if (global_fit > tol_fit) r.witnesses.push_back({"quadric-fit", embed(boundary.front()), global_fit});
  if (worst_plane > tol_fit) r.witnesses.push_back({"planar-fit", embed(worst_plane_point), worst_plane});
  r.measures = {{"parallelogram_defect", worst_pair}, {"fit_residual", global_fit}, {"planar_fit_residual", worst_plane}};
  r.verdict = r.witnesses.empty() ? Verdict::PASS : Verdict::FAIL;
  r.runtime_ms = clock.ms();
  return r;
}

}  // namespace conelab
