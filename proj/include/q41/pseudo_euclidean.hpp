#ifndef Q41_PSEUDO_EUCLIDEAN_HPP
#define Q41_PSEUDO_EUCLIDEAN_HPP

// Linear algebra of R^6_2: the form diag(+,+,+,+,-,-), its complex-bilinear
// extension, Gram-determinant inner products of wedges, O(4,2) motions and
// points of the projectivized light cone.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "q41/error.hpp"

namespace q41 {

using Complex = std::complex<double>;

inline constexpr std::size_t kDim = 6;

/// Sign of the i-th diagonal entry of the form.
inline constexpr double metric_sign(std::size_t i) { return i < 4 ? 1.0 : -1.0; }

/// Six homogeneous coordinates. `T` is double, Complex, or a jet type.
template <typename T>
struct BasicVec6 {
  std::array<T, kDim> c{};

  T& operator[](std::size_t i) { return c[i]; }
  const T& operator[](std::size_t i) const { return c[i]; }

  BasicVec6& operator+=(const BasicVec6& o) {
    for (std::size_t i = 0; i < kDim; ++i) c[i] += o.c[i];
    return *this;
  }
  BasicVec6& operator-=(const BasicVec6& o) {
    for (std::size_t i = 0; i < kDim; ++i) c[i] -= o.c[i];
    return *this;
  }
  template <typename S>
  BasicVec6& operator*=(const S& s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend BasicVec6 operator+(BasicVec6 a, const BasicVec6& b) { return a += b; }
  friend BasicVec6 operator-(BasicVec6 a, const BasicVec6& b) { return a -= b; }
  friend BasicVec6 operator-(BasicVec6 a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
};

template <typename T, typename S>
BasicVec6<T> operator*(const S& s, BasicVec6<T> v) {
  for (auto& x : v.c) x = s * x;
  return v;
}
template <typename T, typename S>
BasicVec6<T> operator*(BasicVec6<T> v, const S& s) {
  for (auto& x : v.c) x = x * s;
  return v;
}
template <typename T, typename S>
BasicVec6<T> operator/(BasicVec6<T> v, const S& s) {
  for (auto& x : v.c) x = x / s;
  return v;
}

using Vec6 = BasicVec6<double>;
using CVec6 = BasicVec6<Complex>;

inline Vec6 basis(std::size_t i) {
  Vec6 e;
  e[i] = 1.0;
  return e;
}

/// Bilinear form of signature (4,2); never conjugates.
template <typename A, typename B>
auto inner(const BasicVec6<A>& x, const BasicVec6<B>& y) {
  auto acc = x[0] * y[0];
  for (std::size_t i = 1; i < kDim; ++i) {
    if (i < 4) {
      acc += x[i] * y[i];
    } else {
      acc -= x[i] * y[i];
    }
  }
  return acc;
}

inline double euclidean_norm(const Vec6& x) {
  double s = 0.0;
  for (double v : x.c) s += v * v;
  return std::sqrt(s);
}

inline double euclidean_norm(const CVec6& x) {
  double s = 0.0;
  for (const auto& v : x.c) s += std::norm(v);
  return std::sqrt(s);
}

inline Vec6 real_part(const CVec6& x) {
  Vec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = x[i].real();
  return r;
}

inline Vec6 imag_part(const CVec6& x) {
  Vec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = x[i].imag();
  return r;
}

inline CVec6 complexify(const Vec6& x) {
  CVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = x[i];
  return r;
}

inline CVec6 conj(const CVec6& x) {
  CVec6 r;
  for (std::size_t i = 0; i < kDim; ++i) r[i] = std::conj(x[i]);
  return r;
}

namespace detail {

/// Determinant by Gaussian elimination with partial pivoting; `a` is n*n row-major.
template <typename T>
T determinant(std::vector<T> a, std::size_t n) {
  T det = T(1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > best) {
        best = std::abs(a[r * n + col]);
        pivot = r;
      }
    }
    if (best == 0.0) return T(0.0);
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      det = -det;
    }
    const T p = a[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = a[r * n + col] / p;
      if (f == T(0.0)) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
    }
  }
  return det;
}

}  // namespace detail

/// <a1^...^ak, b1^...^bk> = det[<ai,bj>].
template <typename T>
T gram_wedge_inner(std::span<const BasicVec6<T>> a, std::span<const BasicVec6<T>> b) {
  if (a.size() != b.size() || a.empty() || a.size() > kDim) {
    throw Error(ErrorCode::ArityMismatch, "gram_wedge_inner needs two sequences of equal length 1..6");
  }
  const std::size_t k = a.size();
  std::vector<T> g(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) g[i * k + j] = inner(a[i], b[j]);
  }
  return detail::determinant(std::move(g), k);
}

template <typename T>
T gram_wedge_inner(std::initializer_list<BasicVec6<T>> a, std::initializer_list<BasicVec6<T>> b) {
  return gram_wedge_inner<T>(std::span<const BasicVec6<T>>(a.begin(), a.size()),
                             std::span<const BasicVec6<T>>(b.begin(), b.size()));
}

/// Euclidean-coordinate determinant of six vectors (columns); fixes the ambient orientation.
inline double orientation_det(const std::array<Vec6, kDim>& cols) {
  std::vector<double> m(kDim * kDim);
  for (std::size_t r = 0; r < kDim; ++r) {
    for (std::size_t c = 0; c < kDim; ++c) m[r * kDim + c] = cols[c][r];
  }
  return detail::determinant(std::move(m), kDim);
}

/// An element of O(4,2), acting on column vectors: x -> T x.
class Motion {
 public:
  static constexpr double kTolerance = 1e-12;

  Motion() {
    for (std::size_t i = 0; i < kDim; ++i) t_[i][i] = 1.0;
  }

  /// Throws MotionNotOrthogonal unless <T e_i, T e_j> = <e_i, e_j> within kTolerance
  /// (relative to the size of the entries).
  explicit Motion(const std::array<std::array<double, kDim>, kDim>& table) : t_(table) {
    const double dev = orthogonality_defect();
    double scale = 1.0;
    for (const auto& row : t_) {
      for (double x : row) scale = std::max(scale, x * x);
    }
    if (!(dev <= kTolerance * scale)) {
      throw Error(ErrorCode::MotionNotOrthogonal,
                  "table does not preserve the (4,2) form; defect " + std::to_string(dev));
    }
  }

  /// Rotation in a plane of equal signature, or a boost when the signatures differ.
  static Motion plane(std::size_t i, std::size_t j, double angle) {
    if (i == j || i >= kDim || j >= kDim) {
      throw Error(ErrorCode::ParameterOutOfRange, "motion plane needs two distinct axes");
    }
    std::array<std::array<double, kDim>, kDim> m{};
    for (std::size_t k = 0; k < kDim; ++k) m[k][k] = 1.0;
    if (metric_sign(i) == metric_sign(j)) {
      const double c = std::cos(angle), s = std::sin(angle);
      m[i][i] = c;
      m[i][j] = -s;
      m[j][i] = s;
      m[j][j] = c;
    } else {
      const double c = std::cosh(angle), s = std::sinh(angle);
      m[i][i] = c;
      m[i][j] = s;
      m[j][i] = s;
      m[j][j] = c;
    }
    return Motion(m);
  }

  const std::array<std::array<double, kDim>, kDim>& table() const { return t_; }

  double orthogonality_defect() const {
    double dev = 0.0;
    for (std::size_t a = 0; a < kDim; ++a) {
      for (std::size_t b = 0; b < kDim; ++b) {
        double g = 0.0;
        for (std::size_t k = 0; k < kDim; ++k) g += metric_sign(k) * t_[k][a] * t_[k][b];
        const double target = a == b ? metric_sign(a) : 0.0;
        dev = std::max(dev, std::abs(g - target));
      }
    }
    return dev;
  }

  template <typename T>
  BasicVec6<T> apply(const BasicVec6<T>& x) const {
    BasicVec6<T> y;
    for (std::size_t i = 0; i < kDim; ++i) {
      T acc = x[0] * t_[i][0];
      for (std::size_t j = 1; j < kDim; ++j) acc += x[j] * t_[i][j];
      y[i] = acc;
    }
    return y;
  }

  friend Motion operator*(const Motion& a, const Motion& b) {
    std::array<std::array<double, kDim>, kDim> m{};
    for (std::size_t i = 0; i < kDim; ++i) {
      for (std::size_t j = 0; j < kDim; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < kDim; ++k) s += a.t_[i][k] * b.t_[k][j];
        m[i][j] = s;
      }
    }
    Motion r;
    r.t_ = m;
    return r;
  }

 private:
  std::array<std::array<double, kDim>, kDim> t_{};
};

/// A point of RP^5 given by a nonzero representative.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(const Vec6& rep) : rep_(rep) {
    if (euclidean_norm(rep) == 0.0) {
      throw Error(ErrorCode::ZeroRepresentative, "projective point needs a nonzero representative");
    }
  }

  const Vec6& rep() const { return rep_; }

  /// |<x,x>| <= tol * |x|_E^2
  bool on_light_cone(double tol = 1e-10) const {
    const double n = euclidean_norm(rep_);
    return std::abs(inner(rep_, rep_)) <= tol * n * n;
  }

 private:
  Vec6 rep_;
};

template <typename T>
BasicVec6<T> apply_motion(const Motion& m, const BasicVec6<T>& x) {
  return m.apply(x);
}

inline ProjectivePoint apply_motion(const Motion& m, const ProjectivePoint& p) {
  return ProjectivePoint(m.apply(p.rep()));
}

/// min(|p^ - q^|, |p^ + q^|) after Euclidean normalization.
inline double projective_distance(const Vec6& p, const Vec6& q) {
  const double np = euclidean_norm(p), nq = euclidean_norm(q);
  if (np == 0.0 || nq == 0.0) {
    throw Error(ErrorCode::ZeroRepresentative, "projective distance of a zero vector");
  }
  double minus = 0.0, plus = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    const double a = p[i] / np, b = q[i] / nq;
    minus += (a - b) * (a - b);
    plus += (a + b) * (a + b);
  }
  return std::sqrt(std::min(minus, plus));
}

inline double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  return projective_distance(p.rep(), q.rep());
}

/// Largest |p_i q_j - p_j q_i| after Euclidean normalization.
inline double max_plucker_minor(const Vec6& p, const Vec6& q) {
  const double np = euclidean_norm(p), nq = euclidean_norm(q);
  double m = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t j = i + 1; j < kDim; ++j) {
      m = std::max(m, std::abs(p[i] * q[j] - p[j] * q[i]) / (np * nq));
    }
  }
  return m;
}

/// Euclidean distance from x to span(basis), relative to |x|_E.
inline double span_residual(const Vec6& x, std::span<const Vec6> basis) {
  // Modified Gram-Schmidt, twice for stability.
  std::vector<Vec6> q;
  for (const Vec6& b : basis) {
    Vec6 w = b;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec6& e : q) {
        double d = 0.0;
        for (std::size_t c = 0; c < kDim; ++c) d += e[c] * w[c];
        w -= d * e;
      }
    }
    const double n = euclidean_norm(w);
    if (n > 1e-14 * std::max(1.0, euclidean_norm(b))) q.push_back(w / n);
  }
  Vec6 r = x;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec6& e : q) {
      double d = 0.0;
      for (std::size_t c = 0; c < kDim; ++c) d += e[c] * r[c];
      r -= d * e;
    }
  }
  const double nx = euclidean_norm(x);
  return nx == 0.0 ? 0.0 : euclidean_norm(r) / nx;
}

}  // namespace q41

#endif  // Q41_PSEUDO_EUCLIDEAN_HPP
