#ifndef Q41_ANALYSIS_HPP
#define Q41_ANALYSIS_HPP

// Grid sweeps of the pointwise identities, the holomorphic forms Theta and Omega,
// and quadrature of the Willmore functional.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "q41/error.hpp"
#include "q41/frame.hpp"
#include "q41/grid.hpp"
#include "q41/identities.hpp"
#include "q41/transforms.hpp"

namespace q41 {

struct ResidualReport {
  std::string identity;
  std::string surface;
  GridSpec grid;
  int order = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  /// Row-major over the grid (index i * nv + j); 1 marks a degenerate point.
  std::vector<std::uint8_t> mask;
  std::size_t degenerate = 0;
  /// Companion statistics, e.g. the range of Theta or the absolute holomorphy residual.
  std::map<std::string, double> extras;

  std::size_t evaluated() const { return mask.size() - degenerate; }
};

struct AnalysisOptions {
  FrameTolerances frame;
  /// Bound on the Willmore (resp. S-Willmore) residual required by theta_holomorphy,
  /// harmonicity_check and omega_value.
  double willmore_bound = 1e-6;
  double swillmore_bound = 1e-6;
  int threads = 0;
};

/// One evaluated grid point: the main residual plus named companion values.
struct PointSample {
  bool degenerate = false;
  double value = 0.0;
  std::vector<std::pair<const char*, double>> extras;
};

namespace detail {

inline bool is_pointwise_degeneracy(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotSpacelike:
    case ErrorCode::NormalPlaneDegenerate:
    case ErrorCode::GaugeReferenceDegenerate:
    case ErrorCode::DegenerateTransform:
    case ErrorCode::DomainError:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Evaluates `point(u, v)` on every grid point. Pointwise degeneracies are masked;
/// extras are aggregated as max over the grid (names ending in "_min" as min).
template <typename F>
ResidualReport sweep(std::string identity, const SurfaceChart& chart, const GridSpec& grid, int order,
                     F point, const AnalysisOptions& opt = {}) {
  const auto samples = parallel_map(
      grid.size(),
      [&](std::size_t k) {
        const auto [u, v] = grid.point(k);
        try {
          return point(u, v);
        } catch (const Error& e) {
          if (!detail::is_pointwise_degeneracy(e.code())) throw;
          PointSample s;
          s.degenerate = true;
          return s;
        }
      },
      opt.threads);
  ResidualReport r;
  r.identity = std::move(identity);
  r.surface = chart.name();
  r.grid = grid;
  r.order = order;
  r.mask.assign(grid.size(), 0);
  double sum = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const PointSample& s = samples[k];
    if (s.degenerate) {
      r.mask[k] = 1;
      ++r.degenerate;
      continue;
    }
    const double a = std::abs(s.value);
    r.max_abs = std::max(r.max_abs, a);
    sum += a;
    for (const auto& [name, x] : s.extras) {
      const std::string key(name);
      const bool is_min = key.size() > 4 && key.compare(key.size() - 4, 4, "_min") == 0;
      auto it = r.extras.find(key);
      if (it == r.extras.end()) {
        r.extras.emplace(key, x);
      } else {
        it->second = is_min ? std::min(it->second, x) : std::max(it->second, x);
      }
    }
  }
  if (r.evaluated() > 0) r.mean_abs = sum / static_cast<double>(r.evaluated());
  r.mean_abs = std::min(r.mean_abs, r.max_abs);
  return r;
}

inline ResidualReport check_structure(const SurfaceChart& chart, const GridSpec& grid,
                                      const AnalysisOptions& opt = {}) {
  return sweep("structure", chart, grid, kStructureOrder, [&](double u, double v) {
    const FramePoint f = frame_at(chart, u, v, kStructureOrder, opt.frame);
    return PointSample{false, structure_residual(f, invariants_from_frame(f, opt.frame)), {}};
  }, opt);
}

inline ResidualReport check_integrability(const SurfaceChart& chart, const GridSpec& grid,
                                          const AnalysisOptions& opt = {}) {
  return sweep("integrability", chart, grid, kIntegrabilityOrder, [&](double u, double v) {
    const FramePoint f = frame_at(chart, u, v, kIntegrabilityOrder, opt.frame);
    return PointSample{false, integrability_residual(f, invariants_from_frame(f, opt.frame)), {}};
  }, opt);
}

inline ResidualReport willmore_residual(const SurfaceChart& chart, const GridSpec& grid,
                                        const AnalysisOptions& opt = {}) {
  return sweep("willmore", chart, grid, kWillmoreOrder, [&](double u, double v) {
    const InvariantSet inv = invariants_at(chart, u, v, kWillmoreOrder, opt.frame);
    return PointSample{false, willmore_pointwise(inv), {}};
  }, opt);
}

/// |lambda1 gamma2 - lambda2 gamma1| = |Theta|^(1/2), with the range of Theta.
inline ResidualReport swillmore_residual(const SurfaceChart& chart, const GridSpec& grid,
                                         const AnalysisOptions& opt = {}) {
  return sweep("swillmore", chart, grid, kSWillmoreOrder, [&](double u, double v) {
    const InvariantSet inv = invariants_at(chart, u, v, kSWillmoreOrder, opt.frame);
    const Complex th = inv.theta.value();
    return PointSample{false,
                       swillmore_pointwise(inv),
                       {{"theta_re_min", th.real()},
                        {"theta_re_max", th.real()},
                        {"theta_im_min", th.imag()},
                        {"theta_im_max", th.imag()}}};
  }, opt);
}

namespace detail {

inline void require_bound(const ResidualReport& r, double bound, ErrorCode code, const char* what) {
  if (!(r.max_abs <= bound) || r.evaluated() == 0) {
    std::ostringstream os;
    os << "surface '" << r.surface << "' is not " << what << ": residual " << r.max_abs << " > " << bound;
    throw Error(code, os.str());
  }
}

}  // namespace detail

/// |d_zbar Theta| / (|Theta| + 1e-12); the absolute residual is in extras.
inline ResidualReport theta_holomorphy(const SurfaceChart& chart, const GridSpec& grid,
                                       const AnalysisOptions& opt = {}) {
  detail::require_bound(willmore_residual(chart, interior_grid(chart, 6, 6), opt), opt.willmore_bound,
                        ErrorCode::NotWillmore, "Willmore");
  return sweep("theta_holomorphy", chart, grid, 5, [&](double u, double v) {
    const InvariantSet inv = invariants_at(chart, u, v, 5, opt.frame);
    const double a = std::abs(wirtinger_zbar(inv.theta).value());
    return PointSample{false, a / (std::abs(inv.theta.value()) + 1e-12), {{"absolute_max", a}}};
  }, opt);
}

/// Omega = 4 (rho lambda1 lambda2)^2. The main residual is |d_zbar(rho lambda1 lambda2)|
/// (scale-normalized); extras carry Omega, the relative residual of Omega and the
/// cross-check <Y^_zz, Y^_zz> = -2 rho^2 lambda1 lambda2.
inline ResidualReport omega_value(const SurfaceChart& chart, const GridSpec& grid,
                                  const AnalysisOptions& opt = {}) {
  detail::require_bound(swillmore_residual(chart, interior_grid(chart, 6, 6), opt), opt.swillmore_bound,
                        ErrorCode::NotSWillmore, "S-Willmore");
  constexpr int K = 6;
  return sweep("omega", chart, grid, K, [&](double u, double v) {
    const FramePoint f = frame_at(chart, u, v, K, opt.frame);
    const InvariantSet inv = invariants_from_frame(f, opt.frame);
    if (!inv.mu_left || !inv.mu_right || !inv.rho) {
      throw Error(ErrorCode::DegenerateTransform, "omega needs both lambdas nondegenerate");
    }
    const CJet p = *inv.rho * inv.lambda1 * inv.lambda2;
    const CJet omega = 4.0 * p * p;
    const double hol = std::abs(wirtinger_zbar(p).value());
    const double hol_omega = std::abs(wirtinger_zbar(omega).value());
    const JetVec6 yh = detail::adjoint_from(f, *inv.mu_left);
    const JetVec6 yhzz = dz(dz(yh));
    const Complex lhs = inner(value(yhzz), value(yhzz));
    const Complex rhs = -2.0 * inv.rho->value() * inv.rho->value() * inv.lambda1.value() * inv.lambda2.value();
    return PointSample{false,
                       hol / inv.scale(),
                       {{"omega_abs_max", std::abs(omega.value())},
                        {"omega_relative_holomorphy_max", hol_omega / (std::abs(omega.value()) + 1e-12)},
                        {"crosscheck_max", std::abs(lhs - rhs) / (1.0 + std::abs(rhs))}}};
  }, opt);
}

/// |quarter_dG2 - <kappa, kappa-bar>|; the deviation of <G,G> from 1 is in extras.
inline ResidualReport gauss_metric_check(const SurfaceChart& chart, const GridSpec& grid,
                                         const AnalysisOptions& opt = {}) {
  return sweep("gauss_metric", chart, grid, 5, [&](double u, double v) {
    const ConformalGaussData g = conformal_gauss_data(chart, u, v, 5, opt.frame);
    return PointSample{false,
                       g.quarter_dG2 - g.kappa_pair,
                       {{"gram_deviation_max", std::abs(g.gram - 1.0)},
                        {"anisotropy_max", g.anisotropy}}};
  }, opt);
}

/// Tension of Y ^ Y^ as a map into the Grassmannian: the component of (Y ^ Y^)_{z zbar}
/// in V ^ V^perp, V = span{Y, Y^}, relative to the largest component of Y ^ Y^.
/// extras["literal_max"] is |(Y ^ Y^)_{z zbar} - Re(rho) Y ^ Y^|, which also contains
/// the Lambda^2 V^perp terms and vanishes only where rho = sigma = 0.
inline ResidualReport harmonicity_check(const SurfaceChart& chart, const GridSpec& grid,
                                        const AnalysisOptions& opt = {}) {
  detail::require_bound(willmore_residual(chart, interior_grid(chart, 6, 6), opt), opt.willmore_bound,
                        ErrorCode::NotWillmore, "Willmore");
  constexpr int K = 6;
  return sweep("harmonicity", chart, grid, K, [&](double u, double v) {
    const FramePoint f = frame_at(chart, u, v, K, opt.frame);
    const InvariantSet inv = invariants_from_frame(f, opt.frame);
    if (!inv.mu_left || !inv.rho) throw Error(ErrorCode::DegenerateTransform, "left adjoint degenerates");
    const JetVec6 yh = detail::adjoint_from(f, *inv.mu_left);
    const JetVec6 y = truncated(f.Y, order_of(yh));
    const double c = inv.rho->value().real();
    std::array<std::array<Complex, kDim>, kDim> m{}, b0{};
    double scale = 0.0, literal = 0.0;
    for (std::size_t i = 0; i < kDim; ++i) {
      for (std::size_t j = i + 1; j < kDim; ++j) {
        const CJet b = y[i] * yh[j] - y[j] * yh[i];
        m[i][j] = wirtinger_zbar(wirtinger_z(b)).value();
        m[j][i] = -m[i][j];
        b0[i][j] = b.value();
        scale = std::max(scale, std::abs(b.value()));
        literal = std::max(literal, std::abs(m[i][j] - c * b.value()));
      }
    }
    // pi_V x = -<x,Y^> Y - <x,Y> Y^, valid since <Y,Y^> = -1 and both are null
    const Vec6 y0 = real_value(y), h0 = real_value(yh);
    std::array<std::array<double, kDim>, kDim> pv{}, pp{};
    for (std::size_t i = 0; i < kDim; ++i) {
      for (std::size_t j = 0; j < kDim; ++j) {
        pv[i][j] = -y0[i] * h0[j] * metric_sign(j) - h0[i] * y0[j] * metric_sign(j);
        pp[i][j] = (i == j ? 1.0 : 0.0) - pv[i][j];
      }
    }
    auto sandwich = [&](const auto& a, const auto& bm) {
      std::array<std::array<Complex, kDim>, kDim> out{};
      for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) {
          Complex acc = 0.0;
          for (std::size_t k = 0; k < kDim; ++k)
            for (std::size_t l = 0; l < kDim; ++l) acc += a[i][k] * m[k][l] * bm[j][l];
          out[i][j] = acc;
        }
      return out;
    };
    const auto t1 = sandwich(pv, pp), t2 = sandwich(pp, pv);
    double tension = 0.0;
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) tension = std::max(tension, std::abs(t1[i][j] + t2[i][j]));
    return PointSample{false, tension / scale, {{"literal_max", literal / scale}}};
  }, opt);
}

/// rho_zbar - mubar rho + 2 lambda2bar sigma and sigma_zbar - (-alphabar + mubar/2) sigma.
inline ResidualReport rho_sigma_check(const SurfaceChart& chart, const GridSpec& grid,
                                      const AnalysisOptions& opt = {}) {
  detail::require_bound(willmore_residual(chart, interior_grid(chart, 6, 6), opt), opt.willmore_bound,
                        ErrorCode::NotWillmore, "Willmore");
  constexpr int K = 6;
  return sweep("rho_sigma", chart, grid, K, [&](double u, double v) {
    const InvariantSet inv = invariants_at(chart, u, v, K, opt.frame);
    if (!inv.mu_left || !inv.rho) throw Error(ErrorCode::DegenerateTransform, "left adjoint degenerates");
    const Complex mub = std::conj(inv.mu_left->value());
    const Complex rho = inv.rho->value(), sigma = inv.sigma->value();
    const Complex e1 = wirtinger_zbar(*inv.rho).value() - mub * rho +
                       2.0 * std::conj(inv.lambda2.value()) * sigma;
    const Complex e2 = wirtinger_zbar(*inv.sigma).value() -
                       (-std::conj(inv.alpha.value()) + mub / 2.0) * sigma;
    return PointSample{false, std::max(std::abs(e1), std::abs(e2)) / inv.scale(), {}};
  }, opt);
}

/// Distance of the left and right adjoint transforms from the central sphere.
inline ResidualReport central_sphere_check(const SurfaceChart& chart, const GridSpec& grid,
                                           const AnalysisOptions& opt = {}) {
  constexpr int K = 4;
  return sweep("central_sphere", chart, grid, K, [&](double u, double v) {
    const FramePoint f = frame_at(chart, u, v, K, opt.frame);
    const InvariantSet inv = invariants_from_frame(f, opt.frame);
    if (!inv.mu_left || !inv.mu_right) throw Error(ErrorCode::DegenerateTransform, "adjoint degenerates");
    const CVec6 yz = value(f.Yz);
    const std::array<Vec6, 4> sphere{real_value(f.Y), real_part(yz), imag_part(yz), real_value(f.N)};
    return PointSample{false,
                       std::max(span_residual(real_value(detail::adjoint_from(f, *inv.mu_left)), sphere),
                                span_residual(real_value(detail::adjoint_from(f, *inv.mu_right)), sphere)),
                       {}};
  }, opt);
}

// Quadrature.

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Nodes and weights on [a, b): trapezoid for periodic directions, Gauss-Legendre otherwise.
inline std::pair<std::vector<double>, std::vector<double>> quadrature_rule(double a, double b, int n,
                                                                           bool periodic) {
  std::vector<double> x(n), w(n);
  if (periodic) {
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      x[i] = a + i * h;
      w[i] = h;
    }
    return {x, w};
  }
  auto [gx, gw] = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
    w[i] = 0.5 * (b - a) * gw[i];
  }
  return {x, w};
}

/// <kappa, kappa-bar> = <Y_zz, Y_zbarzbar> for the canonical lift (Y_zz is kappa plus a
/// multiple of Y, which pairs to zero with both).
inline double kappa_pair_at(const SurfaceChart& chart, double u, double v, const FrameTolerances& tol = {}) {
  const JetVec6 y = canonical_lift(chart.eval(u, v, 3), tol.spacelike);
  const CVec6 yzz = value(dz(dz(y)));
  return inner(yzz, conj(yzz)).real();
}

struct EnergyOptions {
  /// Finest grid; the convergence estimate compares it with the grid of half the size.
  int nu = 128;
  int nv = 128;
  bool abs_integrand = false;
  double singular_bound = 1e8;
  FrameTolerances frame;
  int threads = 0;
};

struct EnergyRefinement {
  int nu = 0;
  int nv = 0;
  double value = 0.0;
};

struct EnergyResult {
  std::string surface;
  double value = 0.0;
  double estimate = 0.0;
  std::vector<EnergyRefinement> refinements;
};

inline double integrate_energy(const SurfaceChart& chart, int nu, int nv, const EnergyOptions& opt) {
  const Domain d = chart.domain();
  const auto [xu, wu] = quadrature_rule(d.u0, d.u1, nu, chart.periodic_u());
  const auto [xv, wv] = quadrature_rule(d.v0, d.v1, nv, chart.periodic_v());
  const auto vals = parallel_map(
      static_cast<std::size_t>(nu) * nv,
      [&](std::size_t k) {
        const std::size_t i = k / nv, j = k % nv;
        double f = kappa_pair_at(chart, xu[i], xv[j], opt.frame);
        if (!std::isfinite(f) || std::abs(f) > opt.singular_bound) {
          std::ostringstream os;
          os << "integrand " << f << " at (" << xu[i] << ", " << xv[j] << ") exceeds bound "
             << opt.singular_bound;
          throw Error(ErrorCode::IntegrandSingular, os.str());
        }
        if (opt.abs_integrand) f = std::abs(f);
        return wu[i] * wv[j] * f;
      },
      opt.threads);
  // fixed summation order keeps the result independent of the thread count
  double s = 0.0;
  for (double x : vals) s += x;
  return s;
}

/// Willmore functional as the integral of <kappa, kappa-bar> du dv over the chart domain.
inline EnergyResult willmore_energy(const SurfaceChart& chart, const EnergyOptions& opt = {}) {
  if (opt.nu < 2 || opt.nv < 2) throw Error(ErrorCode::InvalidConfig, "energy grid must be at least 2x2");
  EnergyResult r;
  r.surface = chart.name();
  const int cu = std::max(1, opt.nu / 2), cv = std::max(1, opt.nv / 2);
  const double coarse = integrate_energy(chart, cu, cv, opt);
  const double fine = integrate_energy(chart, opt.nu, opt.nv, opt);
  r.refinements = {{cu, cv, coarse}, {opt.nu, opt.nv, fine}};
  r.value = fine;
  r.estimate = std::abs(fine - coarse);
  return r;
}

}  // namespace q41

#endif  // Q41_ANALYSIS_HPP
