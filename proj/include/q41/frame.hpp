#ifndef Q41_FRAME_HPP
#define Q41_FRAME_HPP

// Canonical lift, the adapted frame {Y, Y_z, Y_zbar, N, L, R} and the pointwise
// invariants (Hopf differential components, Schwarzian, normal connection, ...).
// Everything stays in jet arithmetic, so invariants can be differentiated again.
//
// Order ledger, for a raw lift evaluated at order K:
//   Y                     K-1   (the normalizing scale costs one order)
//   Y_z                   K-2
//   N, L, R, Y_zz, lambda K-3
//   alpha, gamma, mu      K-4
//   rho, gamma_zbar       K-5

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "q41/error.hpp"
#include "q41/jet.hpp"
#include "q41/pseudo_euclidean.hpp"
#include "q41/surfaces.hpp"

namespace q41 {

struct FrameTolerances {
  /// A lambda component counts as zero below umbilic * (1 + |s|).
  double umbilic = 1e-8;
  /// <raw_z, raw_zbar> relative to |raw|_E^2 must exceed this.
  double spacelike = 1e-14;
  /// Smallest |<L,W>| accepted for a gauge reference W.
  double gauge_pairing = 1e-8;
  /// The reference W = e4 is kept while |<W',W'>| of its normal projection is at
  /// least this fraction of the best basis vector's.
  double gauge_conditioning = 0.25;
  /// Forces a basis index as gauge reference when in [0, 6).
  int forced_reference = -1;
};

struct FramePoint {
  JetVec6 Y, Yz, Yzbar, N, L, R;
  /// det(Y, Y_u, Y_v, N, L, R) at the point, in the standard basis orientation.
  double orientation_det = 0.0;
  /// Basis index of the gauge reference vector that was used.
  int gauge_reference = 4;
};

/// Y = raw / sqrt(2 <raw_z, raw_zbar>), carrying the derivatives of the scale.
inline JetVec6 canonical_lift(const JetVec6& raw, double spacelike_tol = 1e-14) {
  const JetVec6 rz = dz(raw);
  const CJet g = real_part(inner(rz, conj(rz)));
  double n2 = 0.0;
  for (const auto& c : raw.c) n2 += std::norm(c.value());
  if (!(g.value().real() > spacelike_tol * n2)) {
    throw Error(ErrorCode::NotSpacelike, "lift is not spacelike: <Y_z, Y_zbar> <= 0");
  }
  const CJet scale = reciprocal(sqrt(g * 2.0));
  JetVec6 y = truncated(raw, scale.order());
  for (auto& c : y.c) c = c * scale;
  return real_part(y);
}

namespace detail {

inline Vec6 du_value(const JetVec6& yz) { return 2.0 * real_part(value(yz)); }
inline Vec6 dv_value(const JetVec6& yz) { return -2.0 * imag_part(value(yz)); }

/// Projection of a real vector onto the normal plane V^perp.
template <typename W>
JetVec6 normal_projection(const W& w, const JetVec6& y, const JetVec6& yz, const JetVec6& yzbar,
                          const JetVec6& n) {
  const CJet wn = inner(n, w), wy = inner(y, w), wyzb = inner(yzbar, w), wyz = inner(yz, w);
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) {
    r[i] = wn * y[i] + wy * n[i] - 2.0 * (wyzb * yz[i]) - 2.0 * (wyz * yzbar[i]);
    if constexpr (std::is_same_v<W, Vec6>) {
      r[i] += w[i];
    } else {
      r[i] += w[i];
    }
  }
  return r;
}

inline Vec6 normal_projection_value(const Vec6& w, const Vec6& y, const CVec6& yz, const Vec6& n) {
  const Complex wyz = inner(yz, w);
  Vec6 r = w + inner(n, w) * y + inner(y, w) * n;
  const CVec6 t = (-2.0 * std::conj(wyz)) * yz + (-2.0 * wyz) * conj(yz);
  return r + real_part(t);
}

inline double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace detail

/// Applies the normal-plane projector of the frame to a jet vector.
inline JetVec6 project_normal(const FramePoint& f, const JetVec6& x) {
  return detail::normal_projection(x, f.Y, f.Yz, f.Yzbar, f.N);
}

/// The frame of a raw light-cone lift given as a jet.
inline FramePoint frame_from_lift(const JetVec6& raw, const FrameTolerances& tol = {}) {
  if (order_of(raw) < 3) throw Error(ErrorCode::OrderExhausted, "frame needs a lift of order >= 3");
  FramePoint f;
  f.Y = canonical_lift(raw, tol.spacelike);
  f.Yz = dz(f.Y);
  f.Yzbar = conj(f.Yz);
  const JetVec6 yzzb = real_part(dzbar(f.Yz));
  const CJet c = real_part(inner(yzzb, yzzb));
  f.N = real_part(2.0 * yzzb + (2.0 * c) * truncated(f.Y, c.order()));

  const Vec6 y0 = real_value(f.Y), n0 = real_value(f.N);
  const CVec6 yz0 = value(f.Yz);

  // Gauge reference: e4 unless badly conditioned, then e3, then the best basis vector.
  std::array<double, kDim> q{};
  double best = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    const Vec6 w = detail::normal_projection_value(basis(i), y0, yz0, n0);
    q[i] = inner(w, w);
    best = std::max(best, std::abs(q[i]));
  }
  int ref = -1;
  if (tol.forced_reference >= 0 && tol.forced_reference < static_cast<int>(kDim)) {
    if (std::sqrt(std::abs(q[tol.forced_reference]) / 2.0) < tol.gauge_pairing) {
      throw Error(ErrorCode::GaugeReferenceDegenerate, "forced gauge reference is degenerate");
    }
    ref = tol.forced_reference;
  }
  for (int cand : {4, 3, 0, 1, 2, 5}) {
    if (ref >= 0) break;
    const double a = std::abs(q[cand]);
    if (a >= tol.gauge_conditioning * best && std::sqrt(a / 2.0) >= tol.gauge_pairing) {
      ref = cand;
      break;
    }
  }
  if (ref < 0) {
    throw Error(ErrorCode::GaugeReferenceDegenerate, "no basis vector pairs with the normal plane");
  }
  f.gauge_reference = ref;

  const JetVec6 w = real_part(detail::normal_projection(basis(ref), f.Y, f.Yz, f.Yzbar, f.N));
  const CJet qw = real_part(inner(w, w));
  const double eps = detail::sign_of(qw.value().real());
  const CJet inv_len = reciprocal(sqrt(qw * eps));
  JetVec6 e = w;
  for (auto& x : e.c) x = x * inv_len;

  // Complementary direction inside the normal plane.
  const Vec6 e0 = real_value(e);
  int second = -1;
  double best_f = 0.0;
  for (std::size_t j = 0; j < kDim; ++j) {
    Vec6 fp = detail::normal_projection_value(basis(j), y0, yz0, n0);
    fp = fp - (eps * inner(fp, e0)) * e0;
    const double nf = std::abs(inner(fp, fp));
    if (nf > best_f) {
      best_f = nf;
      second = static_cast<int>(j);
    }
  }
  if (second < 0 || best_f < 1e-20) {
    throw Error(ErrorCode::NormalPlaneDegenerate, "normal plane is degenerate");
  }
  JetVec6 fp = real_part(detail::normal_projection(basis(second), f.Y, f.Yz, f.Yzbar, f.N));
  {
    const CJet pe = inner(fp, e) * eps;
    for (std::size_t i = 0; i < kDim; ++i) fp[i] = fp[i] - pe * e[i];
  }
  const CJet qf = real_part(inner(fp, fp));
  if (detail::sign_of(qf.value().real()) == eps) {
    throw Error(ErrorCode::NormalPlaneDegenerate, "normal plane is not Lorentzian");
  }
  const CJet inv_f = reciprocal(sqrt(qf * (-eps)));
  for (auto& x : fp.c) x = x * inv_f;

  const Vec6 yu = detail::du_value(f.Yz), yv = detail::dv_value(f.Yz);
  const double d = orientation_det({y0, yu, yv, n0, real_value(e), real_value(fp)});
  const double sd = -detail::sign_of(d);
  const double r2 = 1.0 / std::sqrt(2.0);
  f.L = JetVec6{};
  f.R = JetVec6{};
  for (std::size_t i = 0; i < kDim; ++i) {
    if (eps < 0.0) {
      // e timelike: L = (e + s f)/sqrt2, R = (e - s f)/sqrt2
      f.L[i] = (e[i] + fp[i] * sd) * r2;
      f.R[i] = (e[i] - fp[i] * sd) * r2;
    } else {
      // e spacelike: L = (s f - e)/sqrt2, R = (s f + e)/sqrt2
      f.L[i] = (fp[i] * sd - e[i]) * r2;
      f.R[i] = (fp[i] * sd + e[i]) * r2;
    }
  }
  f.orientation_det = orientation_det({y0, yu, yv, n0, real_value(f.L), real_value(f.R)});
  return f;
}

inline FramePoint frame_at(const SurfaceChart& chart, double u, double v, int order,
                           const FrameTolerances& tol = {}) {
  return frame_from_lift(chart.eval(u, v, order), tol);
}

/// Hopf differential components, Schwarzian, normal connection and the derived
/// gauge-invariant combinations, all as jets.
struct InvariantSet {
  CJet lambda1, lambda2, s, alpha, beta, gamma1, gamma2;
  CJet kappa_pair;  ///< <kappa, kappa-bar> = -beta
  CJet kappa_iso;   ///< <kappa, kappa> = -2 lambda1 lambda2
  CJet theta;       ///< (lambda1 gamma2 - lambda2 gamma1)^2
  std::optional<CJet> mu_left, mu_right;
  std::optional<CJet> rho;    ///< mubar_z + 2 beta (left mu); needs two more orders
  std::optional<CJet> sigma;  ///< 2 gamma1 + lambda1 mubar
  bool left_degenerate = false;   ///< lambda2 ~ 0: [L] degenerates
  bool right_degenerate = false;  ///< lambda1 ~ 0: [R] degenerates
  double umbilic_threshold = 0.0;

  /// (|lambda|+|gamma|+|s|+1) at the point; divides residuals to make them scale-free.
  double scale() const {
    return std::abs(lambda1.value()) + std::abs(lambda2.value()) + std::abs(gamma1.value()) +
           std::abs(gamma2.value()) + std::abs(s.value()) + 1.0;
  }
};

inline InvariantSet invariants_from_frame(const FramePoint& f, const FrameTolerances& tol = {}) {
  InvariantSet inv;
  const JetVec6 yzz = dz(f.Yz);
  inv.lambda1 = -inner(yzz, f.R);
  inv.lambda2 = -inner(yzz, f.L);
  inv.s = 2.0 * inner(yzz, f.N);
  if (f.L[0].order() < 1) {
    throw Error(ErrorCode::OrderExhausted, "invariants need a lift of order >= 4");
  }
  inv.alpha = -inner(dz(f.L), f.R);
  const CJet abar = conj(inv.alpha);
  inv.beta = real_part(inv.lambda1 * conj(inv.lambda2) + inv.lambda2 * conj(inv.lambda1));
  inv.gamma1 = wirtinger_zbar(inv.lambda1) + inv.lambda1 * abar;
  inv.gamma2 = wirtinger_zbar(inv.lambda2) - inv.lambda2 * abar;
  inv.kappa_pair = -inv.beta;
  inv.kappa_iso = -2.0 * (inv.lambda1 * inv.lambda2);
  const CJet skew = inv.lambda1 * inv.gamma2 - inv.lambda2 * inv.gamma1;
  inv.theta = skew * skew;

  inv.umbilic_threshold = tol.umbilic * (1.0 + std::abs(inv.s.value()));
  inv.left_degenerate = std::abs(inv.lambda2.value()) < inv.umbilic_threshold;
  inv.right_degenerate = std::abs(inv.lambda1.value()) < inv.umbilic_threshold;
  if (!inv.left_degenerate) {
    inv.mu_left = -2.0 * conj(inv.gamma2 / inv.lambda2);
    const CJet mubar = conj(*inv.mu_left);
    inv.sigma = 2.0 * inv.gamma1 + inv.lambda1 * mubar;
    if (mubar.order() >= 1) inv.rho = wirtinger_z(mubar) + 2.0 * inv.beta;
  }
  if (!inv.right_degenerate) inv.mu_right = -2.0 * conj(inv.gamma1 / inv.lambda1);
  return inv;
}

inline InvariantSet invariants_at(const SurfaceChart& chart, double u, double v, int order,
                                  const FrameTolerances& tol = {}) {
  return invariants_from_frame(frame_at(chart, u, v, order, tol), tol);
}

enum class PointClass { Umbilic, NullUmbilic, Generic };

inline const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::Umbilic: return "umbilic";
    case PointClass::NullUmbilic: return "null_umbilic";
    case PointClass::Generic: return "generic";
  }
  return "generic";
}

inline PointClass classify_point(const InvariantSet& inv) {
  if (inv.left_degenerate && inv.right_degenerate) return PointClass::Umbilic;
  if (inv.left_degenerate || inv.right_degenerate) return PointClass::NullUmbilic;
  return PointClass::Generic;
}

struct ConformalGaussData {
  double gram = 0.0;          ///< <G,G> in the unit-positive normalization of Lambda_{3,1}
  double quarter_dG2 = 0.0;   ///< conformal factor of (1/4)<dG,dG> in the z chart
  double anisotropy = 0.0;    ///< |<G_u,G_u> - <G_v,G_v>| + 2|<G_u,G_v>|, zero for conformal G
  double kappa_pair = 0.0;
};

namespace detail {

/// Inner product on 4-vectors of a Lorentzian 4-space, normalized so that unit
/// Lorentzian 4-planes have <G,G> = +1 (minus the Gram determinant).
inline double lorentz_quad_inner(const std::array<Vec6, 4>& a, const std::array<Vec6, 4>& b) {
  return -gram_wedge_inner<double>(std::span<const Vec6>(a), std::span<const Vec6>(b));
}

}  // namespace detail

/// G = Y ^ Y_u ^ Y_v ^ N and the metric it induces, computed by Gram determinants.
inline ConformalGaussData conformal_gauss_data(const SurfaceChart& chart, double u, double v,
                                               int order = 5, const FrameTolerances& tol = {}) {
  const FramePoint f = frame_at(chart, u, v, order, tol);
  const InvariantSet inv = invariants_from_frame(f, tol);
  const JetVec6 yu = real_part(du(f.Y)), yv = real_part(dv(f.Y));
  const std::array<Vec6, 4> g{real_value(f.Y), real_value(yu), real_value(yv), real_value(f.N)};
  const std::array<Vec6, 4> gu{real_value(yu), real_value(du(yu)), real_value(dv(yu)),
                               real_value(du(f.N))};
  const std::array<Vec6, 4> gv{real_value(yv), real_value(du(yv)), real_value(dv(yv)),
                               real_value(dv(f.N))};
  auto derivative_inner = [&](const std::array<Vec6, 4>& da, const std::array<Vec6, 4>& db) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        std::array<Vec6, 4> a = g, b = g;
        a[i] = da[i];
        b[j] = db[j];
        acc += detail::lorentz_quad_inner(a, b);
      }
    }
    return acc;
  };
  ConformalGaussData out;
  out.gram = detail::lorentz_quad_inner(g, g);
  const double guu = derivative_inner(gu, gu), gvv = derivative_inner(gv, gv),
               guv = derivative_inner(gu, gv);
  out.quarter_dG2 = (guu + gvv) / 8.0;
  out.anisotropy = std::abs(guu - gvv) / 4.0 + std::abs(guv) / 2.0;
  out.kappa_pair = inv.kappa_pair.value().real();
  return out;
}

/// Real basis {Y, Re Y_z, Im Y_z, N} of the central sphere's 4-space at the point.
inline std::array<Vec6, 4> central_sphere_at(const SurfaceChart& chart, double u, double v,
                                             int order = 3, const FrameTolerances& tol = {}) {
  const FramePoint f = frame_at(chart, u, v, order, tol);
  const CVec6 yz = value(f.Yz);
  return {real_value(f.Y), real_part(yz), imag_part(yz), real_value(f.N)};
}

}  // namespace q41

#endif  // Q41_FRAME_HPP
