#include <gtest/gtest.h>

#include <numbers>

#include "q41/pseudo_euclidean.hpp"

using namespace q41;

namespace {

Vec6 vec(std::initializer_list<double> xs) {
  Vec6 v;
  std::size_t i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Metric, SignatureFourTwo) {
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t j = 0; j < kDim; ++j) {
      EXPECT_EQ(inner(basis(i), basis(j)), i == j ? (i < 4 ? 1.0 : -1.0) : 0.0);
    }
  }
}

TEST(Metric, ComplexExtensionIsBilinearNotHermitian) {
  CVec6 x;
  for (std::size_t i = 0; i < kDim; ++i) x[i] = Complex(1.0 + i, 0.5 - i);
  const Complex ix = inner(Complex(0, 1) * x, x);
  EXPECT_NEAR(std::abs(ix - Complex(0, 1) * inner(x, x)), 0.0, 1e-12);
  // the hermitian form would be real; the bilinear one is not
  EXPECT_GT(std::abs(inner(x, x).imag()), 1.0);
}

TEST(Gram, TwoVectorWedgeMatchesExpansion) {
  const Vec6 a = vec({1, 2, 0, -1, 0.5, 3}), b = vec({0, 1, 1, 2, -1, 0.25});
  const Vec6 c = vec({2, -1, 0.5, 0, 1, 1}), d = vec({1, 1, 1, 1, 1, -2});
  const double expect = inner(a, c) * inner(b, d) - inner(a, d) * inner(b, c);
  EXPECT_NEAR(gram_wedge_inner<double>({a, b}, {c, d}), expect, 1e-12);
}

TEST(Gram, FullWedgeOfBasisIsMetricDeterminant) {
  std::vector<Vec6> e;
  for (std::size_t i = 0; i < kDim; ++i) e.push_back(basis(i));
  EXPECT_DOUBLE_EQ(gram_wedge_inner<double>(std::span<const Vec6>(e), std::span<const Vec6>(e)), 1.0);
  const std::array<Vec6, 4> lor{basis(0), basis(1), basis(2), basis(4)};
  EXPECT_DOUBLE_EQ(gram_wedge_inner<double>(std::span<const Vec6>(lor), std::span<const Vec6>(lor)), -1.0);
}

TEST(Gram, LengthMismatchIsArityError) {
  const std::array<Vec6, 2> a{basis(0), basis(1)};
  const std::array<Vec6, 1> b{basis(0)};
  try {
    gram_wedge_inner<double>(std::span<const Vec6>(a), std::span<const Vec6>(b));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArityMismatch);
  }
}

TEST(Orientation, StandardBasisIsPositive) {
  std::array<Vec6, kDim> e;
  for (std::size_t i = 0; i < kDim; ++i) e[i] = basis(i);
  EXPECT_DOUBLE_EQ(orientation_det(e), 1.0);
  std::swap(e[4], e[5]);
  EXPECT_DOUBLE_EQ(orientation_det(e), -1.0);
}

TEST(Motion, RotationsAndBoostsPreserveTheForm) {
  const Motion m = Motion::plane(0, 3, 0.7) * Motion::plane(1, 4, 1.3) * Motion::plane(4, 5, -0.4) *
                   Motion::plane(2, 5, 0.2);
  EXPECT_LT(m.orthogonality_defect(), 1e-12);
  const Vec6 a = vec({1, 2, 0, -1, 0.5, 3}), b = vec({0, 1, 1, 2, -1, 0.25});
  EXPECT_NEAR(inner(m.apply(a), m.apply(b)), inner(a, b), 1e-12);
}

TEST(Motion, NonIsometryRejected) {
  std::array<std::array<double, kDim>, kDim> t{};
  for (std::size_t i = 0; i < kDim; ++i) t[i][i] = 1.0;
  t[0][0] = 1.01;
  try {
    Motion m(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MotionNotOrthogonal);
  }
  EXPECT_THROW(Motion::plane(2, 2, 0.1), Error);
}

TEST(Projective, DistanceIgnoresScaleAndSign) {
  const Vec6 p = vec({1, 2, 0, -1, 0.5, 3});
  EXPECT_NEAR(projective_distance(p, -3.5 * p), 0.0, 1e-15);
  EXPECT_NEAR(max_plucker_minor(p, 2.0 * p), 0.0, 1e-15);
  EXPECT_GT(projective_distance(p, basis(0)), 0.1);
  EXPECT_THROW(ProjectivePoint(Vec6{}), Error);
}

TEST(Projective, LightCone) {
  EXPECT_TRUE(ProjectivePoint(vec({1, 0, 0, 0, 1, 0})).on_light_cone());
  EXPECT_FALSE(ProjectivePoint(vec({1, 0, 0, 0, 0, 0})).on_light_cone());
}

TEST(Span, ResidualOfCombinationVanishes) {
  const std::array<Vec6, 2> b{vec({1, 2, 0, -1, 0.5, 3}), vec({0, 1, 1, 2, -1, 0.25})};
  EXPECT_LT(span_residual(2.0 * b[0] - 0.3 * b[1], b), 1e-14);
  EXPECT_GT(span_residual(basis(5), b), 0.1);
}
