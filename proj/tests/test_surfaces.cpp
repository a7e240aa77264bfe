#include <gtest/gtest.h>

#include "oracles.hpp"
#include "q41/surfaces.hpp"

using namespace q41;

namespace {

void expect_null_and_conformal(const SurfaceChart& c, int order = 4) {
  const Domain d = c.domain();
  for (auto [u, v] : oracle::random_points(10, d.u0, d.u1, d.v0, d.v1, 7)) {
    const JetVec6 y = c.eval(u, v, order);
    const double scale = euclidean_norm(value(y));
    // <Y,Y> vanishes identically, so does every Taylor coefficient
    const CJet yy = inner(y, y);
    for (auto coeff : yy.coeffs()) EXPECT_LT(std::abs(coeff), 1e-12 * scale * scale) << c.name();
    const JetVec6 yz = dz(y);
    EXPECT_LT(std::abs(inner(yz, yz).value()), 1e-12 * scale * scale) << c.name();
    EXPECT_GT(inner(yz, conj(yz)).value().real(), 0.0) << c.name();
  }
}

}  // namespace

TEST(Catalog, EveryChartIsANullConformalSpacelikeLift) {
  for (const auto& name : catalog_names()) expect_null_and_conformal(catalog_lookup(name, {}));
  expect_null_and_conformal(catalog_homogeneous_torus(1.25));
}

TEST(Catalog, TorusMatchesClosedFormLift) {
  const oracle::Torus t{2.0};
  const SurfaceChart c = catalog_homogeneous_torus(2.0);
  for (auto [u, v] : oracle::random_points(20, 0, 10, 0, 6, 3)) {
    const Vec6 y = real_value(c.eval(u, v, 0)), want = t.Y(u, v);
    for (std::size_t i = 0; i < kDim; ++i) EXPECT_NEAR(y[i], want[i], 1e-14);
  }
}

TEST(Catalog, RationalTorusIsClosed) {
  const SurfaceChart c = catalog_lookup("torus", {{"t", 1.5}});
  EXPECT_TRUE(c.periodic_u());
  EXPECT_EQ(c.params().at("p"), 3.0);
  EXPECT_EQ(c.params().at("q"), 2.0);
  const Domain d = c.domain();
  const Vec6 a = real_value(c.eval(0.3, 0.2, 0)), b = real_value(c.eval(0.3 + d.width(), 0.2 + d.height(), 0));
  for (std::size_t i = 0; i < kDim; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_FALSE(catalog_homogeneous_torus(std::sqrt(2.0)).periodic_u());
}

TEST(Catalog, TorusParameterRange) {
  try {
    catalog_homogeneous_torus(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParameterOutOfRange);
  }
  try {
    catalog_lookup("klein-bottle", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownIdentifier);
  }
}

TEST(Rational, ContinuedFractions) {
  auto r = as_rational(1.25);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->p, 5);
  EXPECT_EQ(r->q, 4);
  EXPECT_FALSE(as_rational(std::numbers::pi));
}

TEST(Embeddings, QuadricsAreChecked) {
  auto [u, v] = seed_point<Complex>(0.1, 0.2, 2);
  const CJet zero(2, 0.0), one(2, 1.0);
  EXPECT_NO_THROW(embed_desitter({one, zero, zero, zero, zero}));
  EXPECT_NO_THROW(embed_antidesitter({zero, zero, zero, one, zero}));
  try {
    embed_desitter({u, v, zero, zero, zero});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOnQuadric);
  }
  EXPECT_THROW(embed_antidesitter({one, zero, zero, zero, zero}), Error);
}

TEST(Embeddings, FlatAndEuclideanLiftsAreNull) {
  auto [u, v] = seed_point<Complex>(0.3, -0.4, 3);
  const JetVec6 a = embed_flat({u, v, u * v, v * 0.5});
  const JetVec6 b = lift_euclidean3({u, v, u * u});
  const JetVec6 c = lift_minkowski3({u, v, v * v * 0.1});
  for (const auto* y : {&a, &b, &c}) {
    const CJet yy = inner(*y, *y);
    for (auto coeff : yy.coeffs()) EXPECT_LT(std::abs(coeff), 1e-14);
  }
}

TEST(Charts, MotionAndReparametrization) {
  const SurfaceChart c = catalog_lookup("catenoid", {});
  const Motion m = Motion::plane(0, 4, 0.3) * Motion::plane(1, 2, 1.1);
  const SurfaceChart mc = apply_motion(m, c);
  const Vec6 y = real_value(c.eval(0.2, 0.5, 0));
  const Vec6 my = real_value(mc.eval(0.2, 0.5, 0)), want = m.apply(y);
  for (std::size_t i = 0; i < kDim; ++i) EXPECT_NEAR(my[i], want[i], 1e-14);

  const SurfaceChart rc = reparametrize(c, 2.0);
  EXPECT_DOUBLE_EQ(rc.domain().u1, 0.5);
  const JetVec6 a = c.eval(0.4, 1.0, 2), b = rc.eval(0.2, 0.5, 2);
  for (std::size_t i = 0; i < kDim; ++i) {
    EXPECT_NEAR(std::abs(b[i].value() - a[i].value()), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b[i].derivative(1, 0) - 2.0 * a[i].derivative(1, 0)), 0.0, 1e-13);
  }
  EXPECT_THROW(reparametrize(c, 0.0), Error);
}
