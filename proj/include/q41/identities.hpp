#ifndef Q41_IDENTITIES_HPP
#define Q41_IDENTITIES_HPP

// Pointwise residuals of the structure, integrability, Willmore and S-Willmore
// equations. Each takes a frame and the invariants read off from it.

#include <algorithm>
#include <cmath>

#include "q41/frame.hpp"
#include "q41/jet.hpp"

namespace q41 {

namespace detail {

inline double max_abs(const CVec6& x) {
  double m = 0.0;
  for (const auto& c : x.c) m = std::max(m, std::abs(c));
  return m;
}

inline double max_abs(const Vec6& x) {
  double m = 0.0;
  for (double c : x.c) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace detail

/// Minimal raw order for each pointwise residual.
inline constexpr int kStructureOrder = 4;
inline constexpr int kIntegrabilityOrder = 5;
inline constexpr int kWillmoreOrder = 5;
inline constexpr int kSWillmoreOrder = 4;

/// Largest componentwise residual over the five structure equations, scale-normalized.
inline double structure_residual(const FramePoint& f, const InvariantSet& inv) {
  const Complex s = inv.s.value(), l1 = inv.lambda1.value(), l2 = inv.lambda2.value(),
                a = inv.alpha.value(), b = inv.beta.value(), g1 = inv.gamma1.value(),
                g2 = inv.gamma2.value();
  const CVec6 Y = value(f.Y), Yz = value(f.Yz), Yzb = value(f.Yzbar), N = value(f.N),
              L = value(f.L), R = value(f.R);
  const CVec6 yzz = value(dz(f.Yz)), yzzb = value(dzbar(f.Yz)), nz = value(dz(f.N)),
              lz = value(dz(f.L)), rz = value(dz(f.R));
  double m = 0.0;
  m = std::max(m, detail::max_abs(yzz + (s / 2.0) * Y - l1 * L - l2 * R));
  m = std::max(m, detail::max_abs(yzzb - b * Y - 0.5 * N));
  m = std::max(m, detail::max_abs(nz - (2.0 * b) * Yz + s * Yzb - (2.0 * g1) * L - (2.0 * g2) * R));
  m = std::max(m, detail::max_abs(lz - a * L + (2.0 * g2) * Y - (2.0 * l2) * Yzb));
  m = std::max(m, detail::max_abs(rz + a * R + (2.0 * g1) * Y - (2.0 * l1) * Yzb));
  return m / inv.scale();
}

/// Gauss-Codazzi-Ricci residuals: the scalar lines and their vector forms through
/// the normal connection D = P_perp d.
inline double integrability_residual(const FramePoint& f, const InvariantSet& inv) {
  const CJet& s = inv.s;
  const CJet& l1 = inv.lambda1;
  const CJet& l2 = inv.lambda2;
  const CJet abar = conj(inv.alpha);
  double m = 0.0;

  const Complex codazzi = wirtinger_zbar(s).value() + 2.0 * wirtinger_z(inv.beta).value() +
                          4.0 * l1.value() * std::conj(inv.gamma2.value()) +
                          4.0 * l2.value() * std::conj(inv.gamma1.value());
  m = std::max(m, std::abs(codazzi));

  const Complex sb = std::conj(s.value());
  const Complex e1 = wirtinger_zbar(inv.gamma1).value() + (inv.gamma1 * abar).value() +
                     (sb / 2.0) * l1.value();
  const Complex e2 = wirtinger_zbar(inv.gamma2).value() - (inv.gamma2 * abar).value() +
                     (sb / 2.0) * l2.value();
  m = std::max(m, std::abs(e1.imag()));
  m = std::max(m, std::abs(e2.imag()));

  const Complex curvature = 2.0 * (l2.value() * std::conj(l1.value()) -
                                   std::conj(l2.value()) * l1.value());
  const Complex ricci = wirtinger_zbar(inv.alpha).value() - wirtinger_z(abar).value();
  m = std::max(m, std::abs(ricci - curvature));

  // Vector forms: curvature of D on L and R, and Im(D_zbar D_zbar kappa + (sbar/2) kappa).
  auto D_z = [&f](const JetVec6& x) { return project_normal(f, dz(x)); };
  auto D_zb = [&f](const JetVec6& x) { return project_normal(f, dzbar(x)); };
  const CVec6 rl = value(D_zb(D_z(f.L))) - value(D_z(D_zb(f.L)));
  m = std::max(m, detail::max_abs(rl - curvature * value(f.L)));
  const CVec6 rr = value(D_zb(D_z(f.R))) - value(D_z(D_zb(f.R)));
  m = std::max(m, detail::max_abs(rr + curvature * value(f.R)));

  JetVec6 kappa;
  for (std::size_t i = 0; i < kDim; ++i) kappa[i] = l1 * f.L[i] + l2 * f.R[i];
  const CVec6 w = value(D_zb(D_zb(kappa))) + (sb / 2.0) * value(kappa);
  // the real part is the Willmore condition, not an identity
  const CVec6 w_expected = e1.real() * value(f.L) + e2.real() * value(f.R);
  m = std::max(m, detail::max_abs(w - w_expected));
  return m / inv.scale();
}

/// The two components of D_zbar D_zbar kappa + (sbar/2) kappa in the L, R frame.
inline std::pair<Complex, Complex> willmore_components(const InvariantSet& inv) {
  const CJet abar = conj(inv.alpha);
  const Complex sb = std::conj(inv.s.value());
  const Complex w1 = wirtinger_zbar(inv.gamma1).value() + (inv.gamma1 * abar).value() +
                     (sb / 2.0) * inv.lambda1.value();
  const Complex w2 = wirtinger_zbar(inv.gamma2).value() - (inv.gamma2 * abar).value() +
                     (sb / 2.0) * inv.lambda2.value();
  return {w1, w2};
}

/// Measured in the balanced gauge |lambda1| = |lambda2|, so the value does not depend on
/// which reference vector fixed L and R. Falls back to the raw components where a lambda vanishes.
inline double willmore_pointwise(const InvariantSet& inv) {
  const auto [w1, w2] = willmore_components(inv);
  const double a1 = std::abs(inv.lambda1.value()), a2 = std::abs(inv.lambda2.value());
  if (std::min(a1, a2) <= 1e-12 * std::max(a1, a2) || std::max(a1, a2) == 0.0) {
    return std::max(std::abs(w1), std::abs(w2)) / inv.scale();
  }
  const double c = std::sqrt(a1 / a2);
  const double scale = 2.0 * std::sqrt(a1 * a2) + std::abs(inv.s.value()) + 1.0;
  return std::max(std::abs(w1) / c, std::abs(w2) * c) / scale;
}

/// |lambda1 gamma2 - lambda2 gamma1| = |Theta|^(1/2); invariant under L -> cL, R -> R/c.
inline double swillmore_pointwise(const InvariantSet& inv) {
  return std::abs(inv.lambda1.value() * inv.gamma2.value() -
                  inv.lambda2.value() * inv.gamma1.value());
}

}  // namespace q41

#endif  // Q41_IDENTITIES_HPP
