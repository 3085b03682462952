#include "conelab/duality.hpp"
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

// Brute-force dual membership: psi . x >= 0 for every sampled x in C.
bool sampled_dual_contains(const std::vector<Vec>& cone_samples, const Vec& psi, double tol) {
  for (const Vec& x : cone_samples)
    if (psi.dot(x) < -tol * psi.norm() * x.norm()) return false;
  return true;
}

Vec random_dual_interior(Rng& rng, const ConeRep& C) {
  const Eigen::Index n = C.dim();
  if (C.is_ellipsoidal()) {
    const ConeRep D = dual(C);
    const EllipsoidalCone& E = D.ellipsoidal();
    return E.base_point(0.9 * rng.ball_vec(n - 1));
  }
  Vec phi = Vec::Zero(n);
  const Vec w = rng.dirichlet(C.polyhedral().halfspaces.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phi += w(i) * C.polyhedral().halfspaces[static_cast<std::size_t>(i)];
  return phi;
}

TEST(Dual, OrthantIsSelfDual) {
  const ConeRep D = dual(orthant(3));
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vec x = rng.normal_vec(3);
    EXPECT_EQ(contains(D, x), (x.array() >= 0.0).all());
  }
}

TEST(Dual, WedgeGeneratorsAreInwardNormals) {
  // C = cone{(1,0), (1,1)}: C* is generated by (0,1) and (1,-1)/sqrt2.
  const ConeRep C{polyhedral_from_generators({make_vec({1, 0}), make_vec({1, 1})}), "wedge", {}};
  const ConeRep D = dual(C);
  const auto& g = D.polyhedral().generators;
  ASSERT_EQ(g.size(), 2U);
  auto has = [&](const Vec& v) {
    for (const Vec& w : g)
      if ((w.normalized() - v.normalized()).norm() < 1e-12) return true;
    return false;
  };
  EXPECT_TRUE(has(make_vec({0, 1})));
  EXPECT_TRUE(has(make_vec({1, -1})));
}

TEST(Dual, IceCreamIsSelfDualBySampling) {
  Rng rng(2);
  const ConeRep C = ice_cream();
  std::vector<Vec> samples;
  for (int i = 0; i < 2000; ++i) {
    const Vec w = rng.unit_vec(2);
    samples.push_back(make_vec({w(0), w(1), 1.0}));
  }
  const ConeRep D = dual(C);
  int disagreements = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec psi = rng.normal_vec(3);
    const double margin = std::abs(std::hypot(psi(0), psi(1)) - psi(2)) / psi.norm();
    if (margin < 1e-3) continue;  // the sampled oracle only resolves points off the boundary
    if (contains(D, psi) != sampled_dual_contains(samples, psi, 1e-12)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Dual, EllipsoidalDualAgreesWithSampledBoundary) {
  Rng rng(3);
  for (Eigen::Index n = 3; n <= 6; ++n) {
    const ConeRep C = random_ellipsoidal(rng, n);
    const EllipsoidalCone& E = C.ellipsoidal();
    std::vector<Vec> samples;
    for (int i = 0; i < 4000; ++i) samples.push_back(E.base_point(rng.unit_vec(n - 1)));
    const ConeRep D = dual(C);
    int disagreements = 0;
    for (int i = 0; i < 2000; ++i) {
      const Vec psi = rng.normal_vec(n);
      double lo = std::numeric_limits<double>::infinity();
      for (const Vec& x : samples) lo = std::min(lo, psi.dot(x) / x.norm());
      if (std::abs(lo) < 0.05 * psi.norm()) continue;
      if (contains(D, psi) != (lo >= 0.0)) ++disagreements;
    }
    EXPECT_EQ(disagreements, 0) << "n=" << n;
  }
}

TEST(StrictlyPositive, Examples) {
  EXPECT_TRUE(strictly_positive(orthant(2), make_vec({1, 1})));
  EXPECT_FALSE(strictly_positive(orthant(2), make_vec({1, 0})));
  EXPECT_TRUE(strictly_positive(ice_cream(), make_vec({0, 0, 1})));
  EXPECT_FALSE(strictly_positive(ice_cream(), make_vec({1, 0, 1})));
  EXPECT_FALSE(strictly_positive(ice_cream(), make_vec({0, 0, -1})));
}

TEST(DualFromSection, Examples) {
  const DualMembership m = dual_from_section(orthant(3), make_vec({1, 1, 1}));
  EXPECT_TRUE(m.contains(make_vec({1, 0, 2})));
  EXPECT_FALSE(m.contains(make_vec({1, -0.5, 2})));
  EXPECT_THROW(dual_from_section(orthant(3), make_vec({1, 1, 0})), Error);
  try {
    dual_from_section(ice_cream(), make_vec({1, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundedSection);
  }
}

TEST(Certificate, PositiveQuadrant) {
  const DualityCertificate c = boundedness_certificate(orthant(2), make_vec({1, 1}));
  EXPECT_NEAR(c.r_star, 1.0, 1e-12);
  EXPECT_NEAR(c.eps_star, 1.0, 1e-12);
  EXPECT_NEAR(c.product_defect, 0.0, 1e-12);
}

TEST(Certificate, IceCream) {
  const DualityCertificate c = boundedness_certificate(ice_cream(), make_vec({0, 0, 1}));
  EXPECT_NEAR(c.r_star, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(c.eps_star, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_LE(c.product_defect, 1e-7);
}

TEST(Certificate, BoundaryFunctionalHasNoCertificate) {
  const DualityCertificate c = boundedness_certificate(orthant(2), make_vec({1, 0}));
  EXPECT_TRUE(std::isinf(c.r_star));
  EXPECT_EQ(c.eps_star, 0.0);
}

TEST(PerpSection, PointGivesHyperplaneSection) {
  const std::vector<Vec> pts{make_vec({1, 1, 1})};
  const PerpSection p = perp_section(orthant(3), pts);
  EXPECT_EQ(p.affine.dim(), 2);
  ASSERT_TRUE(p.body.is_polytope());
  EXPECT_EQ(p.body.polytope().vertices.size(), 3U);
}

TEST(PerpSection, SegmentGivesSegment) {
  // (1,1,1) and (2,0,1) both equal 1 exactly on {x1 = x2 = (1 - x3) / 2},
  // which meets the orthant in the segment from (0,0,1) to (1/2,1/2,0).
  const std::vector<Vec> pts{make_vec({1, 1, 1}), make_vec({2, 0, 1})};
  const PerpSection p = perp_section(orthant(3), pts);
  EXPECT_EQ(p.affine.dim(), 1);
  const auto& v = p.body.polytope().vertices;
  ASSERT_EQ(v.size(), 2U);
  const Vec a = make_vec({0, 0, 1});
  const Vec b = make_vec({0.5, 0.5, 0});
  for (const Vec& x : v) EXPECT_LE(std::min((x - a).norm(), (x - b).norm()), 1e-12);
}

TEST(PerpSection, UnboundedDualSectionRejected) {
  const std::vector<Vec> pts{make_vec({1, 1, 1}), make_vec({1, 1, 2})};
  try {
    perp_section(orthant(3), pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundedInput);
  }
}

TEST(PerpSection, RejectsBoundaryOnlyInput) {
  const std::vector<Vec> pts{make_vec({1, 0, 0}), make_vec({0, 1, 0})};
  try {
    perp_section(orthant(3), pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionFailed);
  }
}

TEST(DualityProperties, BidualityMembership) {
  Rng rng(41);
  for (Eigen::Index n = 3; n <= 6; ++n) {
    for (const ConeRep& C : {random_ellipsoidal(rng, n), random_polyhedral(rng, n, static_cast<int>(n + 3))}) {
      const ConeRep DD = dual(dual(C));
      int disagreements = 0;
      for (int i = 0; i < 1000; ++i) {
        const Vec x = rng.normal_vec(n) + 1.2 * Vec::Unit(n, n - 1);
        if (contains(C, x, 1e-9) != contains(DD, x, 1e-9)) ++disagreements;
      }
      EXPECT_EQ(disagreements, 0) << "n=" << n;
    }
  }
}

TEST(DualityProperties, ProductLaw) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.below(4));
    const ConeRep C = trial % 2 == 0 ? random_ellipsoidal(rng, n) : random_polyhedral(rng, n, static_cast<int>(n + 2));
    const Vec phi = random_dual_interior(rng, C);
    const DualityCertificate c = boundedness_certificate(C, phi);
    EXPECT_LE(c.product_defect, 1e-7) << "trial " << trial;
  }
}

TEST(DualityProperties, StrictPositivityMatchesPositiveEps) {
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const ConeRep C = trial % 2 == 0 ? random_ellipsoidal(rng, 4) : random_polyhedral(rng, 4, 6);
    const Vec phi = rng.normal_vec(4) + 0.8 * Vec::Unit(4, 3);
    const DualityCertificate c = boundedness_certificate(C, phi);
    EXPECT_EQ(strictly_positive(C, phi), c.eps_star > 1e-9) << "trial " << trial;
  }
}

TEST(DualityProperties, DualFromSectionAgreesWithDual) {
  Rng rng(44);
  for (Eigen::Index n = 3; n <= 5; ++n) {
    for (const ConeRep& C : {random_ellipsoidal(rng, n), random_polyhedral(rng, n, static_cast<int>(n + 3))}) {
      const Vec phi = random_dual_interior(rng, C);
      const DualMembership m = dual_from_section(C, phi);
      const ConeRep D = dual(C);
      int disagreements = 0;
      for (int i = 0; i < 500; ++i) {
        const Vec psi = rng.normal_vec(n) + phi;
        if (m.contains(psi) != contains(D, psi)) ++disagreements;
      }
      EXPECT_EQ(disagreements, 0);
    }
  }
}

TEST(DualityProperties, PerpSectionCodimension) {
  Rng rng(45);
  for (Eigen::Index n = 3; n <= 6; ++n) {
    const ConeRep C = random_ellipsoidal(rng, n);
    for (Eigen::Index k = 1; k < n; ++k) {
      std::vector<Vec> pts;
      for (Eigen::Index i = 0; i < k; ++i) pts.push_back(random_dual_interior(rng, C));
      const PerpSection p = perp_section(C, pts);
      EXPECT_EQ(p.affine.dim(), n - k);
      // Every dual point evaluates to 1 on the perpendicular subspace.
      for (const Vec& psi : pts) EXPECT_NEAR(psi.dot(p.affine.base), 1.0, 1e-9);
    }
  }
}

TEST(DualityProperties, SymmetricSectionsHaveSymmetricDualSections) {
  Rng rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const ConeRep C = random_ellipsoidal(rng, 3 + static_cast<Eigen::Index>(rng.below(4)));
    const Vec phi = random_dual_interior(rng, C);
    const Section s = section_by_functional(C, phi);
    const Vec x = body_of(s).ellipsoid().center;
    EXPECT_LE(check_symmetry_duality(C, phi, x).defect, 1e-7);
  }
}

}  // namespace
