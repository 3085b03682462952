#include "conelab/cone.hpp"
#include "conelab/random.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace conelab;
using conelab::testing::ice_cream;
using conelab::testing::orthant;

bool same_direction_set(const std::vector<Vec>& a, const std::vector<Vec>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Vec& x : a) {
    bool found = false;
    for (const Vec& y : b) found = found || (x.normalized() - y.normalized()).norm() <= tol;
    if (!found) return false;
  }
  return true;
}

std::vector<Vec> random_cap_generators(Rng& rng, Eigen::Index n, int count) {
  std::vector<Vec> gens;
  for (int i = 0; i < count; ++i) {
    Vec g = rng.normal_vec(n) * 0.6;
    g(n - 1) = 1.0;
    gens.push_back(g.normalized());
  }
  return gens;
}

TEST(Contains, IceCream) {
  const ConeRep C = ice_cream();
  EXPECT_TRUE(contains(C, make_vec({0, 0, 1})));
  EXPECT_FALSE(contains(C, make_vec({1, 0, 0})));
  EXPECT_TRUE(interior_contains(C, make_vec({0.1, 0, 1})));
  EXPECT_TRUE(contains(C, make_vec({1, 0, 1})));
  EXPECT_FALSE(interior_contains(C, make_vec({1, 0, 1})));
}

TEST(Contains, Orthant) {
  const ConeRep C = orthant(3);
  EXPECT_TRUE(contains(C, make_vec({1, 2, 0})));
  EXPECT_TRUE(interior_contains(C, make_vec({1, 1, 1})));
  EXPECT_FALSE(interior_contains(C, make_vec({1, 0, 1})));
  EXPECT_FALSE(contains(C, make_vec({1, -0.1, 1})));
}

TEST(Contains, DimensionMismatch) {
  try {
    contains(orthant(3), make_vec({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(IsPointed, Examples) {
  EXPECT_TRUE(is_pointed(orthant(3)));
  // Half-plane {x1 >= 0}: generators +-e2 and e1, contains the x2-axis.
  PolyhedralCone half{2, {make_vec({0, 1}), make_vec({0, -1}), make_vec({1, 0})}, {make_vec({1, 0})}};
  EXPECT_FALSE(is_pointed(ConeRep{half, "half", {}}));
  EXPECT_TRUE(is_pointed(ice_cream()));
}

TEST(EllipsoidalCone, RejectsBadParameters) {
  Mat basis(3, 2);
  basis << 1, 0, 0, 1, 0, 0;
  EXPECT_THROW(EllipsoidalCone(make_vec({0, 0, 1}), make_vec({0, 0, 2}), basis, Mat::Identity(2, 2)), Error);
  EXPECT_THROW(EllipsoidalCone(make_vec({0, 0, 1}), make_vec({0, 0, 1}), basis, -Mat::Identity(2, 2)), Error);
}

TEST(ConeOver, UnitDiskGivesIceCream) {
  Mat basis(3, 2);
  basis << 1, 0, 0, 1, 0, 0;
  const ConeRep C = cone_over(make_ellipsoid(make_vec({0, 0, 1}), basis, Mat::Identity(2, 2)));
  ASSERT_TRUE(C.is_ellipsoidal());
  const ConeRep ref = ice_cream();
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const Vec x = rng.normal_vec(3);
    EXPECT_EQ(contains(C, x), contains(ref, x));
  }
}

TEST(ConeOver, TriangleGivesOrthant) {
  std::vector<Vec> tri{Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)};
  const ConeRep C = cone_over(make_polytope(tri, affine_span(tri)));
  ASSERT_TRUE(C.is_polyhedral());
  EXPECT_TRUE(same_direction_set(C.polyhedral().generators, tri, 1e-12));
  EXPECT_TRUE(same_direction_set(C.polyhedral().halfspaces, tri, 1e-12));
}

TEST(ConeOver, Segment) {
  std::vector<Vec> seg{make_vec({1, -1}), make_vec({1, 1})};
  const ConeRep C = cone_over(make_polytope(seg, affine_span(seg)));
  EXPECT_TRUE(same_direction_set(C.polyhedral().generators, seg, 1e-12));
}

TEST(ConeOver, OriginInSpan) {
  std::vector<Vec> seg{make_vec({1, -1}), make_vec({-1, 1})};
  try {
    cone_over(make_polytope(seg, affine_span(seg)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OriginInSpan);
  }
}

TEST(DoubleDescription, OrthantSelfDescription) {
  const PolyhedralCone C = vrep_to_hrep(PolyhedralCone{3, {Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)}, {}});
  EXPECT_TRUE(same_direction_set(C.halfspaces, {Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)}, 1e-12));
}

TEST(DoubleDescription, TwoDimensionalWedge) {
  const double s = 1.0 / std::sqrt(2.0);
  const PolyhedralCone C = vrep_to_hrep(PolyhedralCone{2, {make_vec({s, s}), make_vec({s, -s})}, {}});
  // Inward normals of the rays (1,1) and (1,-1): (1,-1)/sqrt2 and (1,1)/sqrt2.
  EXPECT_TRUE(same_direction_set(C.halfspaces, {make_vec({s, s}), make_vec({s, -s})}, 1e-12));
}

TEST(DoubleDescription, RejectsLowerDimensionalCone) {
  try {
    vrep_to_hrep(PolyhedralCone{3, {Vec::Unit(3, 0), Vec::Unit(3, 1)}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Degenerate);
  }
}

TEST(DoubleDescription, DropsInteriorGenerators) {
  std::vector<Vec> gens{Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2), make_vec({1, 1, 1})};
  const PolyhedralCone C = polyhedral_from_generators(gens);
  EXPECT_EQ(C.generators.size(), 3U);
  EXPECT_EQ(C.halfspaces.size(), 3U);
}

TEST(DoubleDescription, RoundTripRandomCones) {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Vec> gens = random_cap_generators(rng, 4, 6);
    const PolyhedralCone C = polyhedral_from_generators(gens);
    const PolyhedralCone back = polyhedral_from_halfspaces(C.halfspaces);
    EXPECT_TRUE(same_direction_set(C.generators, back.generators, 1e-9));
    // Containment both ways, decided by NNLS membership in the generator cone.
    const PolyhedralCone raw{4, gens, {}};
    for (const Vec& g : back.generators) EXPECT_TRUE(contains_vrep(raw, g, 1e-9));
    for (const Vec& g : gens) EXPECT_TRUE(contains_vrep(back, g, 1e-9));
  }
}

TEST(ConeProperties, HrepAgreesWithVrepMembership) {
  Rng rng(7);
  for (Eigen::Index n = 3; n <= 6; ++n) {
    const std::vector<Vec> gens = random_cap_generators(rng, n, static_cast<int>(n + 3));
    const ConeRep C{polyhedral_from_generators(gens), "random", {}};
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = rng.normal_vec(n) + 1.5 * Vec::Unit(n, n - 1);
      if (contains(C, x, 1e-9) != contains_vrep(C.polyhedral(), x, 1e-9)) ++disagreements;
    }
    EXPECT_EQ(disagreements, 0) << "n=" << n;
  }
}

TEST(ConeProperties, GeneratorsSatisfyHalfspaces) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyhedralCone C = polyhedral_from_generators(random_cap_generators(rng, 5, 9));
    for (const Vec& g : C.generators)
      for (const Vec& h : C.halfspaces) EXPECT_GE(h.dot(g), -1e-9);
  }
}

}  // namespace
