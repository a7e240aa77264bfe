#ifndef Q41_GRID_HPP
#define Q41_GRID_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

#include "q41/surfaces.hpp"

namespace q41 {

/// nu x nv interior sample points: one step away from every edge of the domain.
struct GridSpec {
  int nu = 32;
  int nv = 32;
  Domain domain;

  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }

  std::pair<double, double> point(int i, int j) const {
    return {domain.u0 + (i + 1) * domain.width() / (nu + 1),
            domain.v0 + (j + 1) * domain.height() / (nv + 1)};
  }

  std::pair<double, double> point(std::size_t k) const {
    return point(static_cast<int>(k / static_cast<std::size_t>(nv)),
                 static_cast<int>(k % static_cast<std::size_t>(nv)));
  }
};

inline GridSpec interior_grid(const SurfaceChart& chart, int nu = 32, int nv = 32) {
  return GridSpec{nu, nv, chart.domain()};
}

/// Worker count; 0 or negative means hardware concurrency.
inline unsigned worker_count(int requested = 0) {
  if (requested > 0) return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[k] = f(k) for k < n. Indices are split into contiguous blocks, so the
/// result does not depend on the number of threads.
template <typename F>
auto parallel_map(std::size_t n, F f, int threads = 0) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  const std::size_t workers = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) out[k] = f(k);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w * block; k < std::min(n, (w + 1) * block); ++k) out[k] = f(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace q41

#endif  // Q41_GRID_HPP
