#ifndef Q41_TRANSFORMS_HPP
#define Q41_TRANSFORMS_HPP

// Polar surfaces [L], [R], the adjoint transforms and chains of them. Every
// transform is again a SurfaceChart whose lift is computed from the base frame
// at each evaluation, so it can be fed back into the frame and analysis code.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "q41/error.hpp"
#include "q41/frame.hpp"
#include "q41/grid.hpp"
#include "q41/identities.hpp"
#include "q41/surfaces.hpp"

namespace q41 {

enum class TransformTag { PolarLeft, PolarRight, AdjointLeft, AdjointRight, Envelope };

inline const char* tag_name(TransformTag t) {
  switch (t) {
    case TransformTag::PolarLeft: return "L";
    case TransformTag::PolarRight: return "R";
    case TransformTag::AdjointLeft: return "adjL";
    case TransformTag::AdjointRight: return "adjR";
    case TransformTag::Envelope: return "env";
  }
  return "?";
}

/// Jet orders consumed: N, L, R lose three, mu four, the envelope term five.
inline int order_cost(TransformTag t) {
  switch (t) {
    case TransformTag::PolarLeft:
    case TransformTag::PolarRight: return 3;
    case TransformTag::AdjointLeft:
    case TransformTag::AdjointRight: return 4;
    case TransformTag::Envelope: return 5;
  }
  return 0;
}

inline TransformTag parse_tag(const std::string& s) {
  if (s == "L" || s == "polar_left") return TransformTag::PolarLeft;
  if (s == "R" || s == "polar_right") return TransformTag::PolarRight;
  if (s == "adjL" || s == "adjoint_left") return TransformTag::AdjointLeft;
  if (s == "adjR" || s == "adjoint_right") return TransformTag::AdjointRight;
  if (s == "env" || s == "full_second_envelope") return TransformTag::Envelope;
  throw Error(ErrorCode::InvalidConfig, "unknown transform tag '" + s + "'");
}

/// "L,R,adjL" -> tags; whitespace around tags is ignored.
inline std::vector<TransformTag> parse_chain(const std::string& spec) {
  std::vector<TransformTag> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::InvalidConfig, "empty tag in chain '" + spec + "'");
    out.push_back(parse_tag(item.substr(b, e - b + 1)));
  }
  return out;
}

struct TransformOptions {
  FrameTolerances frame;
  /// Largest Willmore residual accepted before an adjoint transform is built.
  double willmore_bound = 1e-6;
  /// Side of the interior grid used for that check.
  int check_grid = 6;
};

// Pointwise constructions on a base chart.

inline JetVec6 polar_point(const SurfaceChart& base, TransformTag side, double u, double v, int order,
                           const FrameTolerances& tol = {}) {
  const FramePoint f = frame_at(base, u, v, order + 3, tol);
  const JetVec6 yzz = dz(f.Yz);
  const double s = std::abs(2.0 * inner(value(yzz), value(f.N)));
  const double thr = tol.umbilic * (1.0 + s);
  if (side == TransformTag::PolarLeft) {
    if (std::abs(inner(value(yzz), value(f.L))) < thr) {
      throw Error(ErrorCode::DegenerateTransform, "left polar degenerates: lambda2 = 0");
    }
    return truncated(f.L, order);
  }
  if (std::abs(inner(value(yzz), value(f.R))) < thr) {
    throw Error(ErrorCode::DegenerateTransform, "right polar degenerates: lambda1 = 0");
  }
  return truncated(f.R, order);
}

namespace detail {

inline JetVec6 adjoint_from(const FramePoint& f, const CJet& mu) {
  const int k = mu.order();
  const CJet mub = conj(mu);
  const CJet m2 = mu * mub * 0.5;
  JetVec6 y;
  for (std::size_t i = 0; i < kDim; ++i) {
    y[i] = m2 * f.Y[i].truncated(k) + mub * f.Yz[i].truncated(k) + mu * f.Yzbar[i].truncated(k) +
           f.N[i].truncated(k);
  }
  return real_part(y);
}

}  // namespace detail

/// Y^ = (|mu|^2/2) Y + mubar Y_z + mu Y_zbar + N with the left or right mu.
inline JetVec6 adjoint_point(const SurfaceChart& base, TransformTag side, double u, double v, int order,
                             const FrameTolerances& tol = {}) {
  const FramePoint f = frame_at(base, u, v, order + 4, tol);
  const InvariantSet inv = invariants_from_frame(f, tol);
  const auto& mu = side == TransformTag::AdjointLeft ? inv.mu_left : inv.mu_right;
  if (!mu) {
    throw Error(ErrorCode::DegenerateTransform, side == TransformTag::AdjointLeft
                                                    ? "left adjoint degenerates: lambda2 = 0"
                                                    : "right adjoint degenerates: lambda1 = 0");
  }
  return detail::adjoint_from(f, *mu);
}

/// The left adjoint plus the correction along L that makes it the second envelope
/// of [L] without assuming the Willmore equation.
inline JetVec6 envelope_point(const SurfaceChart& base, double u, double v, int order,
                              const FrameTolerances& tol = {}) {
  const FramePoint f = frame_at(base, u, v, order + 5, tol);
  const InvariantSet inv = invariants_from_frame(f, tol);
  if (!inv.mu_left) throw Error(ErrorCode::DegenerateTransform, "envelope degenerates: lambda2 = 0");
  const CJet abar = conj(inv.alpha);
  const CJet w2 = wirtinger_zbar(inv.gamma2) - inv.gamma2 * abar +
                  conj(inv.s).truncated(order) * inv.lambda2.truncated(order) * 0.5;
  const CJet c = w2 / (inv.lambda2 * conj(inv.lambda2)).truncated(order);
  const JetVec6 y = detail::adjoint_from(f, inv.mu_left->truncated(order));
  JetVec6 out;
  for (std::size_t i = 0; i < kDim; ++i) out[i] = y[i] + c * f.L[i].truncated(order);
  return real_part(out);
}

/// Largest pointwise Willmore residual on a small interior grid, skipping degenerate points.
inline double willmore_probe(const SurfaceChart& chart, int n, const FrameTolerances& tol = {}) {
  const GridSpec g = interior_grid(chart, n, n);
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto [u, v] = g.point(k);
    try {
      m = std::max(m, willmore_pointwise(invariants_at(chart, u, v, kWillmoreOrder, tol)));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OrderExhausted) throw;
    }
  }
  return m;
}

inline void require_willmore(const SurfaceChart& chart, const TransformOptions& opt) {
  const double w = willmore_probe(chart, opt.check_grid, opt.frame);
  if (!(w <= opt.willmore_bound)) {
    std::ostringstream os;
    os << "surface '" << chart.name() << "' is not Willmore: residual " << w << " > "
       << opt.willmore_bound;
    throw Error(ErrorCode::NotWillmore, os.str());
  }
}

/// A base chart followed by a sequence of transforms.
class TransformedSurface {
 public:
  explicit TransformedSurface(SurfaceChart base) : base_(base), chart_(std::move(base)) {}

  const SurfaceChart& base() const { return base_; }
  const SurfaceChart& chart() const { return chart_; }
  const std::vector<TransformTag>& steps() const { return steps_; }

  int order_cost() const {
    int c = 0;
    for (auto t : steps_) c += q41::order_cost(t);
    return c;
  }

  JetVec6 eval(double u, double v, int order) const { return chart_.eval(u, v, order); }

  /// Appends one step; adjoint steps first verify the current chart is Willmore.
  TransformedSurface then(TransformTag tag, const TransformOptions& opt = {}) const {
    if (tag == TransformTag::AdjointLeft || tag == TransformTag::AdjointRight) require_willmore(chart_, opt);
    TransformedSurface out = *this;
    out.steps_.push_back(tag);
    const SurfaceChart inner = chart_;
    const FrameTolerances tol = opt.frame;
    PointEvaluator ev;
    switch (tag) {
      case TransformTag::PolarLeft:
      case TransformTag::PolarRight:
        ev = [inner, tag, tol](double u, double v, int order) {
          return polar_point(inner, tag, u, v, order, tol);
        };
        break;
      case TransformTag::AdjointLeft:
      case TransformTag::AdjointRight:
        ev = [inner, tag, tol](double u, double v, int order) {
          return adjoint_point(inner, tag, u, v, order, tol);
        };
        break;
      case TransformTag::Envelope:
        ev = [inner, tol](double u, double v, int order) {
          return envelope_point(inner, u, v, order, tol);
        };
        break;
    }
    out.chart_ = SurfaceChart(chart_.name() + "|" + tag_name(tag), chart_.params(), chart_.domain(),
                              chart_.periodic_u(), chart_.periodic_v(), std::move(ev));
    return out;
  }

 private:
  SurfaceChart base_;
  SurfaceChart chart_;
  std::vector<TransformTag> steps_;
};

inline TransformedSurface polar_left(const SurfaceChart& c) {
  return TransformedSurface(c).then(TransformTag::PolarLeft);
}
inline TransformedSurface polar_right(const SurfaceChart& c) {
  return TransformedSurface(c).then(TransformTag::PolarRight);
}
inline TransformedSurface adjoint_left(const SurfaceChart& c, const TransformOptions& opt = {}) {
  return TransformedSurface(c).then(TransformTag::AdjointLeft, opt);
}
inline TransformedSurface adjoint_right(const SurfaceChart& c, const TransformOptions& opt = {}) {
  return TransformedSurface(c).then(TransformTag::AdjointRight, opt);
}
inline TransformedSurface full_second_envelope(const SurfaceChart& c) {
  return TransformedSurface(c).then(TransformTag::Envelope);
}

inline TransformedSurface apply_chain(const SurfaceChart& c, const std::vector<TransformTag>& tags,
                                      const TransformOptions& opt = {}) {
  TransformedSurface t(c);
  for (auto tag : tags) t = t.then(tag, opt);
  return t;
}

struct InverseCheck {
  double sup_distance = 0.0;
  std::size_t evaluated = 0;
  std::size_t degenerate = 0;
};

/// sup of the projective distance from [Y] to the chains L,R and R,L of it.
inline InverseCheck inverse_check(const SurfaceChart& chart, const GridSpec& grid,
                                  const TransformOptions& opt = {}) {
  const auto lr = apply_chain(chart, {TransformTag::PolarLeft, TransformTag::PolarRight}, opt);
  const auto rl = apply_chain(chart, {TransformTag::PolarRight, TransformTag::PolarLeft}, opt);
  const auto d = parallel_map(grid.size(), [&](std::size_t k) -> double {
    const auto [u, v] = grid.point(k);
    try {
      const Vec6 y = real_value(chart.eval(u, v, 0));
      return std::max(projective_distance(y, real_value(lr.eval(u, v, 0))),
                      projective_distance(y, real_value(rl.eval(u, v, 0))));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateTransform) throw;
      return -1.0;
    }
  });
  InverseCheck out;
  for (double x : d) {
    if (x < 0.0) {
      ++out.degenerate;
    } else {
      ++out.evaluated;
      out.sup_distance = std::max(out.sup_distance, x);
    }
  }
  return out;
}

struct DualityReport {
  double swillmore_dev = 0.0;
  double adjoint_coincidence = 0.0;
  double sigma_residual = 0.0;
  double central_sphere_residual = 0.0;
  std::size_t evaluated = 0;
  std::size_t degenerate = 0;
};

/// The four diagnostics that vanish together exactly on S-Willmore surfaces.
inline DualityReport duality_report(const SurfaceChart& chart, const GridSpec& grid,
                                    const TransformOptions& opt = {}) {
  require_willmore(chart, opt);
  struct Row {
    bool ok = false;
    double sw = 0, coincide = 0, sigma = 0, sphere = 0;
  };
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    const auto [u, v] = grid.point(k);
    Row r;
    const FramePoint f = frame_at(chart, u, v, 5, opt.frame);
    const InvariantSet inv = invariants_from_frame(f, opt.frame);
    if (!inv.mu_left || !inv.mu_right) return r;
    r.ok = true;
    r.sw = swillmore_pointwise(inv);
    const Vec6 yl = real_value(detail::adjoint_from(f, *inv.mu_left));
    const Vec6 yr = real_value(detail::adjoint_from(f, *inv.mu_right));
    r.coincide = projective_distance(yl, yr);
    r.sigma = std::abs(inv.sigma->value()) / inv.scale();
    const CVec6 yz = value(f.Yz);
    const std::array<Vec6, 4> sphere{real_value(f.Y), real_part(yz), imag_part(yz), real_value(f.N)};
    r.sphere = std::max(span_residual(yl, sphere), span_residual(yr, sphere));
    return r;
  });
  DualityReport out;
  for (const Row& r : rows) {
    if (!r.ok) {
      ++out.degenerate;
      continue;
    }
    ++out.evaluated;
    out.swillmore_dev = std::max(out.swillmore_dev, r.sw);
    out.adjoint_coincidence = std::max(out.adjoint_coincidence, r.coincide);
    out.sigma_residual = std::max(out.sigma_residual, r.sigma);
    out.central_sphere_residual = std::max(out.central_sphere_residual, r.sphere);
  }
  return out;
}

}  // namespace q41

#endif  // Q41_TRANSFORMS_HPP
