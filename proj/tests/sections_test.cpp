#include "conelab/duality.hpp"
#include "conelab/sections.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace conelab;
using conelab::testing::ice_cream;
using conelab::testing::orthant;
using conelab::testing::random_ellipsoidal;
using conelab::testing::random_polyhedral;
using conelab::testing::square_cone;

bool has_vertex(const std::vector<Vec>& verts, const Vec& v, double tol = 1e-12) {
  for (const Vec& w : verts)
    if ((w - v).norm() <= tol) return true;
  return false;
}

TEST(SectionByFunctional, OrthantTriangle) {
  const Section s = section_by_functional(orthant(3), make_vec({1, 1, 1}));
  ASSERT_TRUE(is_body(s));
  const auto& verts = body_of(s).polytope().vertices;
  ASSERT_EQ(verts.size(), 3U);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(has_vertex(verts, Vec::Unit(3, i)));
}

TEST(SectionByFunctional, IceCreamDisk) {
  const Section s = section_by_functional(ice_cream(), make_vec({0, 0, 1}));
  ASSERT_TRUE(is_body(s));
  const Ellipsoid& e = body_of(s).ellipsoid();
  EXPECT_NEAR((e.center - make_vec({0, 0, 1})).norm(), 0.0, 1e-14);
  EXPECT_NEAR((e.form - Mat::Identity(2, 2)).norm(), 0.0, 1e-12);
}

TEST(SectionByFunctional, IceCreamSlantEllipse) {
  // Substituting z = 1 - x/2 into z^2 = x^2 + y^2 and completing the square:
  // (x + 2/3)^2 / (16/9) + y^2 / (4/3) = 1, centered at (-2/3, 0, 4/3).
  const Section s = section_by_functional(ice_cream(), make_vec({0.5, 0, 1}));
  ASSERT_TRUE(is_body(s));
  const Ellipsoid& e = body_of(s).ellipsoid();
  EXPECT_NEAR((e.center - make_vec({-2.0 / 3.0, 0, 4.0 / 3.0})).norm(), 0.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> eig(e.form);
  // In-plane semi-axes: (4/3) * sqrt(1 + 1/4) along the tilted x direction, sqrt(4/3) along y.
  EXPECT_NEAR(eig.eigenvalues()(0), 1.0 / (16.0 / 9.0 * 1.25), 1e-12);
  EXPECT_NEAR(eig.eigenvalues()(1), 0.75, 1e-12);
}

TEST(SectionByFunctional, UnboundedAndEmpty) {
  EXPECT_TRUE(is_unbounded(section_by_functional(orthant(2), make_vec({1, 0}))));
  EXPECT_TRUE(is_empty(section_by_functional(orthant(2), make_vec({-1, -1}))));
  EXPECT_TRUE(is_unbounded(section_by_functional(ice_cream(), make_vec({1, 0, 1}))));
  EXPECT_TRUE(is_empty(section_by_functional(ice_cream(), make_vec({0, 0, -1}))));
}

TEST(SectionByAffine, IceCreamChord) {
  const AffineSubspace A = make_affine(make_vec({0, 0, 1}), LinearSubspace{Vec::Unit(3, 1)});
  const Section s = section_by_affine(ice_cream(), A);
  ASSERT_TRUE(is_body(s));
  const Ellipsoid& e = body_of(s).ellipsoid();
  EXPECT_NEAR((e.center - make_vec({0, 0, 1})).norm(), 0.0, 1e-14);
  ASSERT_EQ(e.form.rows(), 1);
  EXPECT_NEAR(e.form(0, 0), 1.0, 1e-12);
}

TEST(SectionByAffine, OrthantSegment) {
  // x1 + x2 + x3 = 1 and x1 = x2 over the triangle: (0,0,1) to (1/2,1/2,0).
  const std::vector<Vec> pts{make_vec({0, 0, 1}), make_vec({0.5, 0.5, 0})};
  const Section s = section_by_affine(orthant(3), affine_span(pts));
  ASSERT_TRUE(is_body(s));
  const auto& verts = body_of(s).polytope().vertices;
  ASSERT_EQ(verts.size(), 2U);
  EXPECT_TRUE(has_vertex(verts, pts[0], 1e-10));
  EXPECT_TRUE(has_vertex(verts, pts[1], 1e-10));
}

TEST(SectionByAffine, HyperbolicSliceIsUnbounded) {
  const AffineSubspace A = make_affine(make_vec({2, 0, 0}), LinearSubspace{Mat::Identity(3, 3).rightCols(2)});
  EXPECT_TRUE(is_unbounded(section_by_affine(ice_cream(), A)));
  EXPECT_TRUE(is_unbounded(section_by_affine(orthant(3), A)));
}

TEST(SectionByAffine, MissesCone) {
  const AffineSubspace A = make_affine(make_vec({0, 0, -1}), LinearSubspace{Mat::Identity(3, 2)});
  EXPECT_TRUE(is_empty(section_by_affine(ice_cream(), A)));
  EXPECT_TRUE(is_empty(section_by_affine(orthant(3), A)));
}

TEST(CenterOfSymmetry, Square) {
  std::vector<Vec> sq{make_vec({1, 1, 1}), make_vec({1, -1, 1}), make_vec({-1, 1, 1}), make_vec({-1, -1, 1})};
  const SymmetryVerdict v = center_of_symmetry(make_polytope(sq, affine_span(sq)));
  EXPECT_TRUE(v.symmetric);
  EXPECT_NEAR((v.center - make_vec({0, 0, 1})).norm(), 0.0, 1e-15);
  EXPECT_NEAR(v.defect, 0.0, 1e-15);
}

TEST(CenterOfSymmetry, TriangleIsAsymmetricForEveryCandidate) {
  std::vector<Vec> tri{Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)};
  const ConvexBody body = make_polytope(tri, affine_span(tri));
  const SymmetryVerdict v = center_of_symmetry(body);
  EXPECT_FALSE(v.symmetric);
  EXPECT_GT(v.defect, 0.3);
  EXPECT_TRUE(has_vertex(tri, v.witness));
  // Brute force: pairwise midpoints and the centroid all fail to pair the vertices.
  std::vector<Vec> candidates{(tri[0] + tri[1] + tri[2]) / 3.0};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) candidates.push_back(0.5 * (tri[i] + tri[j]));
  for (const Vec& c : candidates) EXPECT_GT(symmetry_defect(body, c).first, 0.3);
}

TEST(CenterOfSymmetry, SlantEllipse) {
  const Section s = section_by_functional(ice_cream(), make_vec({0.5, 0, 1}));
  const SymmetryVerdict v = center_of_symmetry(body_of(s));
  EXPECT_TRUE(v.symmetric);
  EXPECT_EQ(v.defect, 0.0);
  EXPECT_NEAR((v.center - make_vec({-2.0 / 3.0, 0, 4.0 / 3.0})).norm(), 0.0, 1e-12);
}

TEST(SymmetryDuality, IceCream) {
  const SymmetryVerdict v = check_symmetry_duality(ice_cream(), make_vec({0, 0, 1}), make_vec({0, 0, 1}));
  EXPECT_TRUE(v.symmetric);
  EXPECT_NEAR((v.center - make_vec({0, 0, 1})).norm(), 0.0, 1e-12);
}

TEST(SymmetryDuality, SquareConeGivesDiamond) {
  const SymmetryVerdict v = check_symmetry_duality(square_cone(), make_vec({0, 0, 1}), make_vec({0, 0, 1}));
  EXPECT_TRUE(v.symmetric);
  EXPECT_LE(v.defect, 1e-12);
  EXPECT_NEAR((v.center - make_vec({0, 0, 1})).norm(), 0.0, 1e-12);
}

TEST(SymmetryDuality, OrthantFailsPrecondition) {
  try {
    check_symmetry_duality(orthant(3), make_vec({1, 1, 1}), Vec::Constant(3, 1.0 / 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionFailed);
  }
}

TEST(SectionProperties, EllipsoidalSectionsAreCentered) {
  Rng rng(31);
  for (Eigen::Index n = 3; n <= 7; ++n) {
    const ConeRep C = random_ellipsoidal(rng, n);
    int checked = 0;
    while (checked < 20) {
      const Vec phi = C.ellipsoidal().u() + 0.3 * rng.normal_vec(n);
      if (!strictly_positive(C, phi)) continue;
      const Section s = section_by_functional(C, phi);
      ASSERT_TRUE(is_body(s));
      ASSERT_TRUE(body_of(s).is_ellipsoid());
      EXPECT_LE(center_of_symmetry(body_of(s)).defect, 1e-9);
      // Boundary points of the section lie on the cone's boundary.
      const Ellipsoid& e = body_of(s).ellipsoid();
      const Vec w = rng.unit_vec(n - 1);
      const Vec p = e.center + e.basis * (inverse_sqrt(e.form) * w);
      EXPECT_NEAR(C.ellipsoidal().margin(p) / p.norm(), 0.0, 1e-9);
      EXPECT_NEAR(phi.dot(p), 1.0, 1e-9);
      ++checked;
    }
  }
}

TEST(SectionProperties, FunctionalAndAffineSlicesAgree) {
  Rng rng(32);
  for (Eigen::Index n = 3; n <= 6; ++n) {
    const ConeRep P = random_polyhedral(rng, n, static_cast<int>(n + 2));
    const Vec phi = Vec::Unit(n, n - 1);
    const Section a = section_by_functional(P, phi);
    const Section b = section_by_affine(P, hyperplane(phi));
    ASSERT_TRUE(is_body(a));
    ASSERT_TRUE(is_body(b));
    const auto& va = body_of(a).polytope().vertices;
    const auto& vb = body_of(b).polytope().vertices;
    EXPECT_EQ(va.size(), vb.size());
    for (const Vec& v : va) EXPECT_TRUE(has_vertex(vb, v, 1e-9));

    const ConeRep E = random_ellipsoidal(rng, n);
    const Vec psi = E.ellipsoidal().u();
    const Section ea = section_by_functional(E, psi);
    const Section eb = section_by_affine(E, hyperplane(psi));
    const Ellipsoid& x = body_of(ea).ellipsoid();
    const Ellipsoid& y = body_of(eb).ellipsoid();
    EXPECT_NEAR((x.center - y.center).norm(), 0.0, 1e-10);
    const Mat fx = x.basis * x.form * x.basis.transpose();
    const Mat fy = y.basis * y.form * y.basis.transpose();
    EXPECT_NEAR((fx - fy).norm(), 0.0, 1e-9 * fx.norm());
  }
}

TEST(SectionProperties, CenterIsUnique) {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.below(3));
    std::vector<Vec> verts;
    const Vec c = rng.normal_vec(n);
    for (int i = 0; i < 4; ++i) {
      const Vec d = rng.normal_vec(n);
      verts.push_back(c + d);
      verts.push_back(c - d);
    }
    const ConvexBody body = make_polytope(verts, affine_span(verts));
    const SymmetryVerdict v = center_of_symmetry(body);
    ASSERT_TRUE(v.symmetric);
    const Vec shifted = v.center + 0.01 * diameter(body) * rng.unit_vec(n);
    EXPECT_GT(symmetry_defect(body, shifted).first, 1e-8);
  }
}

}  // namespace
