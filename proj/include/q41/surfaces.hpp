#ifndef Q41_SURFACES_HPP
#define Q41_SURFACES_HPP

// Surface charts: maps (u,v) -> light-cone lift in jet arithmetic, the embeddings of
// the three Lorentzian space forms into Q^4_1, and a catalog of example surfaces.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "q41/error.hpp"
#include "q41/jet.hpp"
#include "q41/pseudo_euclidean.hpp"

namespace q41 {

struct Domain {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;

  double width() const { return u1 - u0; }
  double height() const { return v1 - v0; }
};

/// Builds the lift from coordinate jets; used by every catalog and DSL chart.
using LiftFunction = std::function<JetVec6(const CJet& u, const CJet& v)>;
/// Jet of the lift of order `order` at (u, v).
using PointEvaluator = std::function<JetVec6(double u, double v, int order)>;

/// An evaluable conformal chart into the light cone, plus its parameter domain.
class SurfaceChart {
 public:
  SurfaceChart() = default;
  SurfaceChart(std::string name, std::map<std::string, double> params, Domain domain,
               bool periodic_u, bool periodic_v, PointEvaluator evaluator)
      : name_(std::move(name)),
        params_(std::move(params)),
        domain_(domain),
        periodic_u_(periodic_u),
        periodic_v_(periodic_v),
        evaluator_(std::move(evaluator)) {}

  static SurfaceChart from_lift(std::string name, std::map<std::string, double> params,
                                Domain domain, bool periodic_u, bool periodic_v,
                                LiftFunction lift) {
    return SurfaceChart(std::move(name), std::move(params), domain, periodic_u, periodic_v,
                        [lift = std::move(lift)](double u, double v, int order) {
                          auto [ju, jv] = seed_point<Complex>(u, v, order);
                          return lift(ju, jv);
                        });
  }

  JetVec6 eval(double u, double v, int order) const { return evaluator_(u, v, order); }

  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }
  const Domain& domain() const { return domain_; }
  bool periodic_u() const { return periodic_u_; }
  bool periodic_v() const { return periodic_v_; }

  SurfaceChart with_domain(Domain d, bool periodic_u, bool periodic_v) const {
    SurfaceChart c = *this;
    c.domain_ = d;
    c.periodic_u_ = periodic_u;
    c.periodic_v_ = periodic_v;
    return c;
  }

  SurfaceChart renamed(std::string name) const {
    SurfaceChart c = *this;
    c.name_ = std::move(name);
    return c;
  }

 private:
  std::string name_;
  std::map<std::string, double> params_;
  Domain domain_;
  bool periodic_u_ = false;
  bool periodic_v_ = false;
  PointEvaluator evaluator_;
};

/// The chart composed with an O(4,2) motion.
inline SurfaceChart apply_motion(const Motion& m, const SurfaceChart& chart) {
  return SurfaceChart(chart.name() + "*motion", chart.params(), chart.domain(), chart.periodic_u(),
                      chart.periodic_v(), [m, chart](double u, double v, int order) {
                        return m.apply(chart.eval(u, v, order));
                      });
}

/// Reparametrization z -> c z: the new chart at (u,v) is the old chart at (c u, c v).
inline SurfaceChart reparametrize(const SurfaceChart& chart, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "reparametrization factor must be positive");
  const Domain d = chart.domain();
  return SurfaceChart(chart.name() + "*scaled", chart.params(),
                      Domain{d.u0 / c, d.u1 / c, d.v0 / c, d.v1 / c}, chart.periodic_u(),
                      chart.periodic_v(), [chart, c](double u, double v, int order) {
                        return rescale_coordinates(chart.eval(c * u, c * v, order), c);
                      });
}

// Space-form embeddings. Layout everywhere: slots 0-3 positive, slots 4-5 negative.

/// phi_0(x) = ((-1+<x,x>)/2, x, (1+<x,x>)/2) for x in R^4_1 with signature (+,+,+,-).
inline JetVec6 embed_flat(const std::array<CJet, 4>& x) {
  const CJet q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - x[3] * x[3];
  JetVec6 y;
  y[0] = (q - 1.0) * 0.5;
  y[1] = x[0];
  y[2] = x[1];
  y[3] = x[2];
  y[4] = x[3];
  y[5] = (q + 1.0) * 0.5;
  return y;
}

inline constexpr double kQuadricTolerance = 1e-10;

/// phi_+(x) = (x, 1) for x in S^4_1 = {<x,x> = 1} of R^5_1, signature (+,+,+,+,-).
inline JetVec6 embed_desitter(const std::array<CJet, 5>& x) {
  const Complex q = x[0].value() * x[0].value() + x[1].value() * x[1].value() +
                    x[2].value() * x[2].value() + x[3].value() * x[3].value() -
                    x[4].value() * x[4].value();
  if (std::abs(q - 1.0) > kQuadricTolerance) {
    throw Error(ErrorCode::NotOnQuadric, "point is not on S^4_1 (<x,x> = 1)");
  }
  JetVec6 y;
  for (std::size_t i = 0; i < 5; ++i) y[i] = x[i];
  y[5] = CJet(x[0].order(), 1.0);
  return y;
}

/// phi_-(x) = (1, x) for x in H^4_1 = {<x,x> = -1} of R^5_2, signature (+,+,+,-,-).
inline JetVec6 embed_antidesitter(const std::array<CJet, 5>& x) {
  const Complex q = x[0].value() * x[0].value() + x[1].value() * x[1].value() +
                    x[2].value() * x[2].value() - x[3].value() * x[3].value() -
                    x[4].value() * x[4].value();
  if (std::abs(q + 1.0) > kQuadricTolerance) {
    throw Error(ErrorCode::NotOnQuadric, "point is not on H^4_1 (<x,x> = -1)");
  }
  JetVec6 y;
  y[0] = CJet(x[0].order(), 1.0);
  for (std::size_t i = 0; i < 5; ++i) y[i + 1] = x[i];
  return y;
}

/// (|u|^2/2 - 1, u, 1, |u|^2/2): a surface u in R^3 placed in R^4_1 as (u, 1).
inline JetVec6 lift_euclidean3(const std::array<CJet, 3>& u) {
  const CJet q = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
  JetVec6 y;
  y[0] = q * 0.5 - 1.0;
  y[1] = u[0];
  y[2] = u[1];
  y[3] = u[2];
  y[4] = CJet(q.order(), 1.0);
  y[5] = q * 0.5;
  return y;
}

/// (<u,u>/2, 1, u, <u,u>/2 + 1): a surface u in R^3_1 (signature +,+,-) placed as (1, u).
inline JetVec6 lift_minkowski3(const std::array<CJet, 3>& u) {
  const CJet q = u[0] * u[0] + u[1] * u[1] - u[2] * u[2];
  JetVec6 y;
  y[0] = q * 0.5;
  y[1] = CJet(q.order(), 1.0);
  y[2] = u[0];
  y[3] = u[1];
  y[4] = u[2];
  y[5] = q * 0.5 + 1.0;
  return y;
}

/// Laguerre lift (n, u.n, -u.n, 1) from the unit normal n and support function u.n.
inline JetVec6 lift_laguerre(const std::array<CJet, 3>& n, const CJet& support) {
  JetVec6 y;
  y[0] = n[0];
  y[1] = n[1];
  y[2] = n[2];
  y[3] = support;
  y[4] = -support;
  y[5] = CJet(support.order(), 1.0);
  return y;
}

// Catalog.

struct Rational {
  long p = 0;
  long q = 1;
};

/// Recovers p/q (q <= max_den) when t is that fraction to relative precision 1e-12.
inline std::optional<Rational> as_rational(double t, long max_den = 1000) {
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = t;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(x);
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - t) <= 1e-12 * std::abs(t)) {
      const long g = std::gcd(h1, k1);
      return Rational{h1 / g, k1 / g};
    }
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

namespace detail {

inline SurfaceChart homogeneous_torus(double t, std::optional<Rational> r) {
  if (!(t > 1.0 + 1e-6)) {
    throw Error(ErrorCode::ParameterOutOfRange, "homogeneous torus needs t > 1");
  }
  const double w = std::sqrt(t * t - 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  Domain d{0.0, two_pi * w, 0.0, two_pi};
  bool periodic = false;
  std::map<std::string, double> params{{"t", t}};
  if (r) {
    d.u1 = two_pi * static_cast<double>(r->q) * w;
    periodic = true;
    params["p"] = static_cast<double>(r->p);
    params["q"] = static_cast<double>(r->q);
  }
  return SurfaceChart::from_lift("torus", params, d, periodic, periodic,
                                 [t, w](const CJet& theta, const CJet& phi) {
                                   const CJet a = theta * (t / w);
                                   const CJet b = theta * (1.0 / w);
                                   const CJet ca = cos(a), sa = sin(a), cp = cos(phi), sp = sin(phi);
                                   JetVec6 y;
                                   y[0] = ca * cp;
                                   y[1] = ca * sp;
                                   y[2] = sa * cp;
                                   y[3] = sa * sp;
                                   y[4] = cos(b);
                                   y[5] = sin(b);
                                   return y;
                                 });
}

}  // namespace detail

/// Homogeneous Willmore torus Y_t(theta, phi), z = theta + i phi. For t = p/q the
/// domain is the closed fundamental rectangle [0, 2 pi q sqrt(t^2-1)) x [0, 2 pi).
inline SurfaceChart catalog_homogeneous_torus(double t) {
  return detail::homogeneous_torus(t, as_rational(t));
}

inline SurfaceChart catalog_homogeneous_torus(long p, long q) {
  if (p <= 0 || q <= 0) throw Error(ErrorCode::ParameterOutOfRange, "torus needs positive p, q");
  const long g = std::gcd(p, q);
  return detail::homogeneous_torus(static_cast<double>(p) / static_cast<double>(q),
                                   Rational{p / g, q / g});
}

enum class MinimalKind { Catenoid, Enneper };

/// Lift of a minimal surface of R^3 through (u,1) in R^4_1.
inline SurfaceChart catalog_minimal_lift(MinimalKind kind) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (kind == MinimalKind::Catenoid) {
    return SurfaceChart::from_lift("catenoid", {}, Domain{-1.0, 1.0, 0.0, two_pi}, false, true,
                                   [](const CJet& a, const CJet& b) {
                                     const CJet ch = cosh(a);
                                     return lift_euclidean3({ch * cos(b), ch * sin(b), a});
                                   });
  }
  return SurfaceChart::from_lift("enneper", {}, Domain{-1.0, 1.0, -1.0, 1.0}, false, false,
                                 [](const CJet& a, const CJet& b) {
                                   const CJet a2 = a * a, b2 = b * b;
                                   return lift_euclidean3({a - a * a2 * (1.0 / 3.0) + a * b2,
                                                           -b + b * b2 * (1.0 / 3.0) - a2 * b,
                                                           a2 - b2});
                                 });
}

/// Lift of the spacelike maximal catenoid (sinh a cos b, sinh a sin b, a) of R^3_1.
inline SurfaceChart catalog_maximal_lift() {
  const double two_pi = 2.0 * std::numbers::pi;
  return SurfaceChart::from_lift("maximal-catenoid", {}, Domain{0.5, 1.5, 0.0, two_pi}, false,
                                 true, [](const CJet& a, const CJet& b) {
                                   const CJet sh = sinh(a);
                                   return lift_minkowski3({sh * cos(b), sh * sin(b), a});
                                 });
}

/// Laguerre lift of the catenoid, a Laguerre minimal surface, through its Gauss map.
inline SurfaceChart catalog_laguerre_lift() {
  const double two_pi = 2.0 * std::numbers::pi;
  return SurfaceChart::from_lift("laguerre-catenoid", {}, Domain{0.2, 1.2, 0.0, two_pi}, false,
                                 true, [](const CJet& a, const CJet& b) {
                                   const CJet ich = reciprocal(cosh(a));
                                   const CJet th = sinh(a) * ich;
                                   std::array<CJet, 3> n{-(cos(b) * ich), -(sin(b) * ich), th};
                                   // u.n = -1 + a tanh a for u = (cosh a cos b, cosh a sin b, a)
                                   const CJet support = a * th - 1.0;
                                   return lift_laguerre(n, support);
                                 });
}

/// A spacelike plane of R^4_1 through phi_0: a round 2-sphere, umbilic everywhere.
inline SurfaceChart catalog_plane() {
  return SurfaceChart::from_lift("plane", {}, Domain{-1.0, 1.0, -1.0, 1.0}, false, false,
                                 [](const CJet& u, const CJet& v) {
                                   const CJet zero(u.order(), 0.0);
                                   return embed_flat({u, v, zero, zero});
                                 });
}

inline std::vector<std::string> catalog_names() {
  return {"torus", "catenoid", "enneper", "maximal-catenoid", "laguerre-catenoid", "plane"};
}

/// Looks a catalog chart up by name; `torus` reads `t` (or `p` and `q`) from params.
inline SurfaceChart catalog_lookup(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "torus") {
    if (params.count("p") && params.count("q")) {
      return catalog_homogeneous_torus(std::lround(params.at("p")), std::lround(params.at("q")));
    }
    auto it = params.find("t");
    return catalog_homogeneous_torus(it == params.end() ? 2.0 : it->second);
  }
  if (name == "catenoid") return catalog_minimal_lift(MinimalKind::Catenoid);
  if (name == "enneper") return catalog_minimal_lift(MinimalKind::Enneper);
  if (name == "maximal-catenoid") return catalog_maximal_lift();
  if (name == "laguerre-catenoid") return catalog_laguerre_lift();
  if (name == "plane") return catalog_plane();
  throw Error(ErrorCode::UnknownIdentifier, "unknown catalog surface '" + name + "'");
}

}  // namespace q41

#endif  // Q41_SURFACES_HPP
