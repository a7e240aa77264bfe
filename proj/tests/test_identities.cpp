#include <gtest/gtest.h>

#include "oracles.hpp"
#include "q41/identities.hpp"
#include "random_charts.hpp"

using namespace q41;

namespace {

std::vector<SurfaceChart> all_charts() {
  std::vector<SurfaceChart> out;
  for (const auto& name : catalog_names()) out.push_back(catalog_lookup(name, {}));
  for (std::uint64_t s = 0; s < 8; ++s) out.push_back(random_charts::chart(s));
  return out;
}

}  // namespace

TEST(Identities, StructureAndIntegrabilityEverywhere) {
  for (const SurfaceChart& c : all_charts()) {
    const Domain d = c.domain();
    for (auto [u, v] : oracle::random_points(6, d.u0, d.u1, d.v0, d.v1, 3)) {
      const FramePoint f = frame_at(c, u, v, kIntegrabilityOrder);
      const InvariantSet inv = invariants_from_frame(f);
      EXPECT_LT(structure_residual(f, inv), 1e-8) << c.name();
      EXPECT_LT(integrability_residual(f, inv), 1e-8) << c.name();
    }
  }
}

TEST(Identities, MinimalOrdersSuffice) {
  const SurfaceChart c = catalog_homogeneous_torus(2.0);
  const FramePoint f4 = frame_at(c, 0.3, 0.4, kStructureOrder);
  EXPECT_LT(structure_residual(f4, invariants_from_frame(f4)), 1e-12);
  EXPECT_THROW(integrability_residual(f4, invariants_from_frame(f4)), Error);
}

TEST(Identities, CorruptedFrameIsDetected) {
  // control: the residuals must see a 1% error in one frame vector
  const SurfaceChart c = catalog_homogeneous_torus(2.0);
  FramePoint f = frame_at(c, 0.3, 0.4, kIntegrabilityOrder);
  const InvariantSet inv = invariants_from_frame(f);
  for (auto& x : f.L.c) x = x * 1.01;
  EXPECT_GT(structure_residual(f, inv), 1e-3);
}

TEST(Identities, PerturbedInvariantsAreDetected) {
  const SurfaceChart c = catalog_lookup("enneper", {});
  const FramePoint f = frame_at(c, 0.3, -0.2, kIntegrabilityOrder);
  InvariantSet inv = invariants_from_frame(f);
  inv.gamma1 = inv.gamma1 + Complex(0.01);
  EXPECT_GT(integrability_residual(f, inv), 1e-3);
}

TEST(Willmore, CatalogSurfacesAreWillmore) {
  for (const auto& name : catalog_names()) {
    const SurfaceChart c = catalog_lookup(name, {});
    const Domain d = c.domain();
    for (auto [u, v] : oracle::random_points(6, d.u0, d.u1, d.v0, d.v1, 4)) {
      EXPECT_LT(willmore_pointwise(invariants_at(c, u, v, kWillmoreOrder)), 1e-9) << name;
    }
  }
}

TEST(Willmore, ProductTorusIsNot) {
  const SurfaceChart c = dsl_chart(dsl_parse("s41[a*cos(u/a), a*sin(u/a), b*cos(v/b), b*sin(v/b), 0]"),
                                   {{"a", 0.6}, {"b", 0.8}});
  EXPECT_GT(willmore_pointwise(invariants_at(c, 0.2, 0.3, kWillmoreOrder)), 1e-3);
  // the symmetric Clifford torus is minimal in S^3, hence Willmore
  const double r = std::sqrt(0.5);
  const SurfaceChart cl = dsl_chart(dsl_parse("s41[a*cos(u/a), a*sin(u/a), a*cos(v/a), a*sin(v/a), 0]"),
                                    {{"a", r}});
  EXPECT_LT(willmore_pointwise(invariants_at(cl, 0.2, 0.3, kWillmoreOrder)), 1e-12);
}

TEST(SWillmore, TorusDeviationIsSqrtTheta) {
  for (double t : {2.0, 1.5}) {
    const oracle::Torus o{t};
    const InvariantSet inv = invariants_at(catalog_homogeneous_torus(t), 0.7, 0.1, kSWillmoreOrder);
    EXPECT_NEAR(swillmore_pointwise(inv), std::sqrt(std::abs(o.theta())), 1e-12);
  }
  const InvariantSet cat = invariants_at(catalog_lookup("catenoid", {}), 0.2, 0.1, kSWillmoreOrder);
  EXPECT_LT(swillmore_pointwise(cat), 1e-12);
}

TEST(Willmore, ResidualDoesNotDependOnGaugeReference) {
  const SurfaceChart c = dsl_chart(dsl_parse("s41[a*cos(u/a), a*sin(u/a), b*cos(v/b), b*sin(v/b), 0]"),
                                   {{"a", 0.6}, {"b", 0.8}});
  const double base = willmore_pointwise(invariants_at(c, 0.2, 0.3, kWillmoreOrder));
  int tried = 0;
  for (int ref = 0; ref < 6; ++ref) {
    FrameTolerances tol;
    tol.forced_reference = ref;
    try {
      EXPECT_NEAR(willmore_pointwise(invariants_at(c, 0.2, 0.3, kWillmoreOrder, tol)), base, 1e-12 * base) << ref;
      ++tried;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::GaugeReferenceDegenerate);
    }
  }
  EXPECT_GE(tried, 2);
}
