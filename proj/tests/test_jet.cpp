#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "q41/jet.hpp"

using namespace q41;

namespace {

constexpr int kOrder = 6;

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

// d^{j+k}/du^j dv^k of f at the expansion point, checked for every j + k <= kOrder.
template <typename F>
void expect_derivatives(const RJet& jet, F analytic, double tol) {
  for (int n = 0; n <= kOrder; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double want = analytic(n - k, k);
      EXPECT_NEAR(jet.derivative(n - k, k), want, tol * std::max(1.0, std::abs(want)))
          << "d_u^" << n - k << " d_v^" << k;
    }
  }
}

}  // namespace

TEST(JetAnalytic, ExpOfLinear) {
  const double u0 = 0.3, v0 = -0.7, a = 1.3, b = -0.6;
  const RJet u = RJet::variable(kOrder, u0, 0), v = RJet::variable(kOrder, v0, 1);
  const RJet f = exp(u * a + v * b);
  expect_derivatives(f, [&](int j, int k) { return std::pow(a, j) * std::pow(b, k) * std::exp(a * u0 + b * v0); },
                     1e-13);
}

TEST(JetAnalytic, SinTimesCosh) {
  const double u0 = 0.9, v0 = 0.4;
  const RJet u = RJet::variable(kOrder, u0, 0), v = RJet::variable(kOrder, v0, 1);
  const RJet f = sin(u) * cosh(v);
  expect_derivatives(
      f,
      [&](int j, int k) {
        const double du = std::sin(u0 + j * std::numbers::pi / 2.0);
        const double dv = k % 2 == 0 ? std::cosh(v0) : std::sinh(v0);
        return du * dv;
      },
      1e-13);
}

TEST(JetAnalytic, CosAndSinhOfSum) {
  const double u0 = -0.2, v0 = 1.1;
  const RJet u = RJet::variable(kOrder, u0, 0), v = RJet::variable(kOrder, v0, 1);
  const RJet f = cos(u + v * 2.0) + sinh(u - v);
  expect_derivatives(
      f,
      [&](int j, int k) {
        const int n = j + k;
        const double c = std::pow(2.0, k) * std::cos(u0 + 2.0 * v0 + n * std::numbers::pi / 2.0);
        const double s = (k % 2 ? -1.0 : 1.0) * (n % 2 ? std::cosh(u0 - v0) : std::sinh(u0 - v0));
        return c + s;
      },
      1e-13);
}

TEST(JetAnalytic, PowersAndReciprocal) {
  const double u0 = 0.5, v0 = 0.25;
  const RJet u = RJet::variable(kOrder, u0, 0), v = RJet::variable(kOrder, v0, 1);
  const RJet x = u * 2.0 + v + 1.0;  // 2u + v + 1
  const double x0 = 2.0 * u0 + v0 + 1.0;
  // d^n x^p = p (p-1) ... (p-n+1) x^{p-n} (dx)^n, with dx/du = 2, dx/dv = 1
  auto falling = [](double p, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= p - i;
    return r;
  };
  expect_derivatives(sqrt(x), [&](int j, int k) { return falling(0.5, j + k) * std::pow(x0, 0.5 - j - k) * std::pow(2.0, j); },
                     1e-13);
  expect_derivatives(pow(x, 2.5), [&](int j, int k) { return falling(2.5, j + k) * std::pow(x0, 2.5 - j - k) * std::pow(2.0, j); },
                     1e-13);
  expect_derivatives(reciprocal(x), [&](int j, int k) { return falling(-1.0, j + k) * std::pow(x0, -1.0 - j - k) * std::pow(2.0, j); },
                     1e-13);
  expect_derivatives(pow(x, -3), [&](int j, int k) { return falling(-3.0, j + k) * std::pow(x0, -3.0 - j - k) * std::pow(2.0, j); },
                     1e-13);
  expect_derivatives(log(x), [&](int j, int k) {
    const int n = j + k;
    const double d = n == 0 ? std::log(x0) : std::pow(-1.0, n - 1) * fact(n - 1) / std::pow(x0, n);
    return d * std::pow(2.0, j);
  }, 1e-13);
}

TEST(JetAnalytic, QuotientOfProducts) {
  const double u0 = 0.3, v0 = 0.6;
  const RJet u = RJet::variable(kOrder, u0, 0), v = RJet::variable(kOrder, v0, 1);
  // u v / exp(u) = u e^{-u} v
  const RJet f = (u * v) / exp(u);
  expect_derivatives(
      f,
      [&](int j, int k) {
        // d^j (u e^{-u}) = (-1)^j (u - j) e^{-u}
        const double du = std::pow(-1.0, j) * (u0 - j) * std::exp(-u0);
        const double dv = k == 0 ? v0 : (k == 1 ? 1.0 : 0.0);
        return du * dv;
      },
      1e-13);
}

TEST(JetWirtinger, HolomorphicPolynomial) {
  const double u0 = 0.4, v0 = -0.3;
  auto [u, v] = seed_point<Complex>(u0, v0, kOrder);
  const CJet z = u + v * Complex(0, 1);
  const CJet f = z * z * z;
  const Complex z0(u0, v0);
  EXPECT_NEAR(std::abs(wirtinger_z(f).value() - 3.0 * z0 * z0), 0.0, 1e-14);
  const CJet fbar = wirtinger_zbar(f);
  for (auto c : fbar.coeffs()) EXPECT_NEAR(std::abs(c), 0.0, 1e-14);
  // |z|^2 has f_z = zbar, f_{z zbar} = 1
  const CJet m = z * conj(z);
  EXPECT_NEAR(std::abs(wirtinger_z(m).value() - std::conj(z0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(wirtinger_zbar(wirtinger_z(m)).value() - 1.0), 0.0, 1e-14);
  EXPECT_EQ(wirtinger_z(f).order(), kOrder - 1);
}

TEST(JetOrder, ExhaustionAndTruncation) {
  const RJet u = RJet::variable(2, 1.0, 0);
  const RJet f = u * u;
  EXPECT_EQ(f.truncated(1).order(), 1);
  EXPECT_DOUBLE_EQ(f.truncated(1).derivative(1, 0), 2.0);
  const CJet c(0, Complex(1.0));
  try {
    wirtinger_z(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderExhausted);
  }
}

TEST(JetOrder, BranchErrors) {
  const RJet u = RJet::variable(3, 0.0, 0);
  EXPECT_THROW(reciprocal(u), Error);
  EXPECT_THROW(sqrt(u - 1.0), Error);
  EXPECT_THROW(log(u), Error);
}

TEST(JetRescale, ChainRule) {
  const double c = 1.7;
  auto [u, v] = seed_point<Complex>(0.2 * c, 0.1 * c, 4);
  const CJet f = exp(u) * sin(v);
  const CJet g = rescale_coordinates(f, c);
  // g(u,v) = f(c u, c v): d_u^j d_v^k g = c^{j+k} d_u^j d_v^k f
  for (int j = 0; j <= 2; ++j) {
    for (int k = 0; k <= 2; ++k) {
      EXPECT_NEAR(std::abs(g.derivative(j, k) - std::pow(c, j + k) * f.derivative(j, k)), 0.0, 1e-13);
    }
  }
}
