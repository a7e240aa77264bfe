#ifndef Q41_JET_HPP
#define Q41_JET_HPP

// Truncated bivariate Taylor arithmetic.
//
// A Jet<T> of order K at a point (u,v) stores the coefficients a_{jk}, j+k <= K, of
//   f(u + du, v + dv) = sum a_{jk} du^j dv^k.
// Binary operations truncate to the smaller of the two orders, so the number of
// exact derivative orders left is tracked automatically.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "q41/error.hpp"
#include "q41/pseudo_euclidean.hpp"

namespace q41 {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Constant terms closer to zero than this make division, sqrt and log fail.
inline constexpr double kJetPivotTolerance = 1e-10;

template <typename T>
class Jet {
 public:
  using value_type = T;

  Jet() : order_(0), c_(1, T{}) {}

  explicit Jet(int order, T constant = T{}) : order_(order), c_(size_for(order), T{}) {
    if (order < 0) throw Error(ErrorCode::OrderExhausted, "jet order must be nonnegative");
    c_[0] = constant;
  }

  static constexpr std::size_t size_for(int order) {
    return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
  }
  static constexpr std::size_t index(int j, int k) {
    const int n = j + k;
    return static_cast<std::size_t>(n * (n + 1) / 2 + k);
  }

  /// Coordinate function u (which = 0) or v (which = 1) expanded at `at`.
  static Jet variable(int order, double at, int which) {
    Jet r(order, T(at));
    if (order >= 1) r.c_[which == 0 ? index(1, 0) : index(0, 1)] = T(1.0);
    return r;
  }

  int order() const { return order_; }
  T value() const { return c_[0]; }

  /// a_{jk}; zero beyond the stored order.
  T coeff(int j, int k) const {
    if (j < 0 || k < 0 || j + k > order_) return T{};
    return c_[index(j, k)];
  }
  T& at(int j, int k) { return c_[index(j, k)]; }

  std::span<const T> coeffs() const { return c_; }
  std::span<T> coeffs() { return c_; }

  /// Partial derivative d^{j+k} f / du^j dv^k at the expansion point.
  T derivative(int j, int k) const {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    for (int i = 2; i <= k; ++i) f *= i;
    return coeff(j, k) * f;
  }

  Jet truncated(int order) const {
    if (order >= order_) return *this;
    Jet r(std::max(order, 0));
    std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
    return r;
  }

  /// Value at the offset (du, dv) of the truncated polynomial.
  T evaluate(double du, double dv) const {
    T s{};
    for (int n = order_; n >= 0; --n) {
      for (int k = 0; k <= n; ++k) {
        s += c_[index(n - k, k)] * (std::pow(du, n - k) * std::pow(dv, k));
      }
    }
    return s;
  }

  Jet& operator+=(const Jet& o) {
    shrink_to(o.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    shrink_to(o.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  Jet& operator+=(const T& s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(const T& s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator/=(const T& s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int order = std::min(a.order_, b.order_);
    Jet r(order);
    for (int n1 = 0; n1 <= order; ++n1) {
      const std::size_t off1 = index(n1, 0);
      for (int k1 = 0; k1 <= n1; ++k1) {
        const T x = a.c_[off1 + k1];
        if (x == T{}) continue;
        for (int n2 = 0; n2 + n1 <= order; ++n2) {
          const std::size_t off2 = index(n2, 0);
          const std::size_t out = index(n1 + n2, 0) + k1;
          for (int k2 = 0; k2 <= n2; ++k2) r.c_[out + k2] += x * b.c_[off2 + k2];
        }
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(Jet a, const T& s) { return a += s; }
  friend Jet operator+(const T& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const T& s) { return a -= s; }
  friend Jet operator-(const T& s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const T& s) { return a /= s; }
  friend Jet operator/(const T& s, const Jet& a) { return reciprocal(a) *= s; }

  // Real scalars mix with complex jets.
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator*(Jet a, double s) {
    for (auto& x : a.c_) x *= s;
    return a;
  }
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator*(double s, Jet a) {
    for (auto& x : a.c_) x *= s;
    return a;
  }
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator/(Jet a, double s) {
    for (auto& x : a.c_) x /= s;
    return a;
  }
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator+(double s, Jet a) {
    a.c_[0] += s;
    return a;
  }
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  template <typename S = T, typename = std::enable_if_t<is_complex<S>::value>>
  friend Jet operator-(double s, const Jet& a) {
    Jet r = -a;
    r.c_[0] += s;
    return r;
  }

  /// sum_n taylor[n] (f - f(0))^n, the composition g(f) given g^{(n)}(f(0))/n!.
  Jet compose(std::span<const T> taylor) const {
    Jet tail = *this;
    tail.c_[0] = T{};
    Jet r(order_, taylor[static_cast<std::size_t>(order_)]);
    for (int n = order_ - 1; n >= 0; --n) {
      r = r * tail;
      r.c_[0] += taylor[static_cast<std::size_t>(n)];
    }
    return r;
  }

 private:
  void shrink_to(int order) {
    if (order < order_) {
      order_ = order;
      c_.resize(size_for(order));
    }
  }

  int order_;
  std::vector<T> c_;
};

using RJet = Jet<double>;
using CJet = Jet<Complex>;

namespace detail {

template <typename T>
bool near_zero(const T& x) {
  return std::abs(x) <= kJetPivotTolerance;
}

/// Require a constant term off the nonpositive real axis (principal branches of sqrt/log/pow).
template <typename T>
void require_positive_branch(const T& x, const char* what) {
  if (near_zero(x)) {
    throw Error(ErrorCode::DomainError, std::string(what) + " of a jet whose constant term vanishes");
  }
  if constexpr (is_complex<T>::value) {
    if (x.real() <= 0.0 && std::abs(x.imag()) <= 1e-12 * std::abs(x)) {
      throw Error(ErrorCode::DomainError, std::string(what) + " of a jet with negative constant term");
    }
  } else {
    if (x < 0.0) {
      throw Error(ErrorCode::DomainError, std::string(what) + " of a jet with negative constant term");
    }
  }
}

/// Taylor coefficients of x^p about x0: binom(p, n) x0^{p-n}.
template <typename T>
std::vector<T> power_series(const T& x0, double p, int order) {
  std::vector<T> t(static_cast<std::size_t>(order) + 1);
  T base = std::pow(x0, T(p));
  double binom = 1.0;
  T inv = T(1.0) / x0;
  for (int n = 0; n <= order; ++n) {
    t[n] = binom * base;
    binom *= (p - n) / (n + 1);
    base *= inv;
  }
  return t;
}

}  // namespace detail

template <typename T>
Jet<T> reciprocal(const Jet<T>& a) {
  const T x0 = a.value();
  if (detail::near_zero(x0)) {
    throw Error(ErrorCode::DomainError, "division by a jet whose constant term vanishes");
  }
  std::vector<T> t(static_cast<std::size_t>(a.order()) + 1);
  T p = T(1.0) / x0;
  for (int n = 0; n <= a.order(); ++n) {
    t[n] = (n % 2 == 0 ? T(1.0) : T(-1.0)) * p;
    p /= x0;
  }
  return a.compose(t);
}

template <typename T>
Jet<T> exp(const Jet<T>& a) {
  std::vector<T> t(static_cast<std::size_t>(a.order()) + 1);
  T e = std::exp(a.value());
  double fact = 1.0;
  for (int n = 0; n <= a.order(); ++n) {
    if (n > 0) fact *= n;
    t[n] = e / fact;
  }
  return a.compose(t);
}

namespace detail {

/// Series of a function whose derivatives cycle with period 4 (sign pattern included).
template <typename T>
Jet<T> cyclic_compose(const Jet<T>& a, const std::array<T, 4>& cycle) {
  std::vector<T> t(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (int n = 0; n <= a.order(); ++n) {
    if (n > 0) fact *= n;
    t[n] = cycle[n % 4] / fact;
  }
  return a.compose(t);
}

}  // namespace detail

template <typename T>
Jet<T> sin(const Jet<T>& a) {
  const T s = std::sin(a.value()), c = std::cos(a.value());
  return detail::cyclic_compose(a, {s, c, -s, -c});
}

template <typename T>
Jet<T> cos(const Jet<T>& a) {
  const T s = std::sin(a.value()), c = std::cos(a.value());
  return detail::cyclic_compose(a, {c, -s, -c, s});
}

template <typename T>
Jet<T> sinh(const Jet<T>& a) {
  const T s = std::sinh(a.value()), c = std::cosh(a.value());
  return detail::cyclic_compose(a, {s, c, s, c});
}

template <typename T>
Jet<T> cosh(const Jet<T>& a) {
  const T s = std::sinh(a.value()), c = std::cosh(a.value());
  return detail::cyclic_compose(a, {c, s, c, s});
}

template <typename T>
Jet<T> sqrt(const Jet<T>& a) {
  detail::require_positive_branch(a.value(), "sqrt");
  return a.compose(detail::power_series(a.value(), 0.5, a.order()));
}

template <typename T>
Jet<T> log(const Jet<T>& a) {
  const T x0 = a.value();
  detail::require_positive_branch(x0, "log");
  std::vector<T> t(static_cast<std::size_t>(a.order()) + 1);
  t[0] = std::log(x0);
  T p = T(1.0) / x0;
  for (int n = 1; n <= a.order(); ++n) {
    t[n] = ((n % 2 == 1) ? T(1.0) : T(-1.0)) * p / static_cast<double>(n);
    p /= x0;
  }
  return a.compose(t);
}

/// Integer powers by repeated squaring; negative exponents go through the reciprocal.
template <typename T>
Jet<T> pow(const Jet<T>& a, int n) {
  if (n < 0) return reciprocal(pow(a, -n));
  Jet<T> result(a.order(), T(1.0));
  Jet<T> base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

template <typename T>
Jet<T> pow(const Jet<T>& a, double p) {
  if (p == std::floor(p) && std::abs(p) <= 64.0) return pow(a, static_cast<int>(p));
  detail::require_positive_branch(a.value(), "pow");
  return a.compose(detail::power_series(a.value(), p, a.order()));
}

inline CJet to_complex(const RJet& a) {
  CJet r(a.order());
  auto src = a.coeffs();
  auto dst = r.coeffs();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return r;
}

/// Jet of the complex conjugate function (coordinates are real, so coefficients conjugate).
inline CJet conj(const CJet& a) {
  CJet r = a;
  for (auto& x : r.coeffs()) x = std::conj(x);
  return r;
}

inline CJet real_part(const CJet& a) {
  CJet r = a;
  for (auto& x : r.coeffs()) x = x.real();
  return r;
}

inline CJet imag_part(const CJet& a) {
  CJet r = a;
  for (auto& x : r.coeffs()) x = x.imag();
  return r;
}

/// d/du and d/dv; the result has one order less.
template <typename T>
Jet<T> partial_u(const Jet<T>& f) {
  if (f.order() < 1) throw Error(ErrorCode::OrderExhausted, "jet has no derivative orders left");
  Jet<T> r(f.order() - 1);
  for (int n = 0; n <= r.order(); ++n) {
    for (int k = 0; k <= n; ++k) r.at(n - k, k) = f.coeff(n - k + 1, k) * static_cast<double>(n - k + 1);
  }
  return r;
}

template <typename T>
Jet<T> partial_v(const Jet<T>& f) {
  if (f.order() < 1) throw Error(ErrorCode::OrderExhausted, "jet has no derivative orders left");
  Jet<T> r(f.order() - 1);
  for (int n = 0; n <= r.order(); ++n) {
    for (int k = 0; k <= n; ++k) r.at(n - k, k) = f.coeff(n - k, k + 1) * static_cast<double>(k + 1);
  }
  return r;
}

/// d/dz = (d/du - i d/dv)/2 for z = u + iv.
inline CJet wirtinger_z(const CJet& f) {
  if (f.order() < 1) throw Error(ErrorCode::OrderExhausted, "wirtinger_z needs order >= 1");
  CJet r(f.order() - 1);
  const Complex half(0.5, 0.0), ihalf(0.0, 0.5);
  for (int n = 0; n <= r.order(); ++n) {
    for (int k = 0; k <= n; ++k) {
      const int j = n - k;
      r.at(j, k) = half * (f.coeff(j + 1, k) * static_cast<double>(j + 1)) -
                   ihalf * (f.coeff(j, k + 1) * static_cast<double>(k + 1));
    }
  }
  return r;
}

/// d/dzbar = (d/du + i d/dv)/2.
inline CJet wirtinger_zbar(const CJet& f) {
  if (f.order() < 1) throw Error(ErrorCode::OrderExhausted, "wirtinger_zbar needs order >= 1");
  CJet r(f.order() - 1);
  const Complex half(0.5, 0.0), ihalf(0.0, 0.5);
  for (int n = 0; n <= r.order(); ++n) {
    for (int k = 0; k <= n; ++k) {
      const int j = n - k;
      r.at(j, k) = half * (f.coeff(j + 1, k) * static_cast<double>(j + 1)) +
                   ihalf * (f.coeff(j, k + 1) * static_cast<double>(k + 1));
    }
  }
  return r;
}

inline CJet wirtinger_z(const RJet& f) { return wirtinger_z(to_complex(f)); }
inline CJet wirtinger_zbar(const RJet& f) { return wirtinger_zbar(to_complex(f)); }

/// Jet of f(c u, c v) expanded at (u,v) from the jet of f at (c u, c v).
template <typename T>
Jet<T> rescale_coordinates(const Jet<T>& f, double c) {
  Jet<T> r = f;
  for (int n = 0; n <= f.order(); ++n) {
    const double cn = std::pow(c, n);
    for (int k = 0; k <= n; ++k) r.at(n - k, k) *= cn;
  }
  return r;
}

/// Coordinate jets (u, v) centred at the given point.
template <typename T = Complex>
std::pair<Jet<T>, Jet<T>> seed_point(double u, double v, int order) {
  if (order < 0) throw Error(ErrorCode::OrderExhausted, "seed order must be nonnegative");
  return {Jet<T>::variable(order, u, 0), Jet<T>::variable(order, v, 1)};
}

// Six-component jets: lifts and frame vectors.

using JetVec6 = BasicVec6<CJet>;

inline int order_of(const JetVec6& x) {
  int k = x[0].order();
  for (const auto& c : x.c) k = std::min(k, c.order());
  return k;
}

inline JetVec6 dz(const JetVec6& x) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = wirtinger_z(x[i]);
  return r;
}

inline JetVec6 dzbar(const JetVec6& x) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = wirtinger_zbar(x[i]);
  return r;
}

inline JetVec6 du(const JetVec6& x) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = partial_u(x[i]);
  return r;
}

inline JetVec6 dv(const JetVec6& x) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = partial_v(x[i]);
  return r;
}

inline JetVec6 conj(const JetVec6& x) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = conj(x[i]);
  return r;
}

inline JetVec6 real_part(const JetVec6& x) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = real_part(x[i]);
  return r;
}

inline JetVec6 truncated(const JetVec6& x, int order) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = x[i].truncated(order);
  return r;
}

inline JetVec6 rescale_coordinates(const JetVec6& x, double c) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = rescale_coordinates(x[i], c);
  return r;
}

inline CVec6 value(const JetVec6& x) {
  CVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = x[i].value();
  return r;
}

inline Vec6 real_value(const JetVec6& x) { return real_part(value(x)); }

inline JetVec6 constant_jet(const Vec6& x, int order) {
  JetVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = CJet(order, x[i]);
  return r;
}

}  // namespace q41

#endif  // Q41_JET_HPP
