#include "mlg/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace mlg {

Grid::Grid(double u0_, double u1, int nu_, double v0_, double v1, int nv_)
    : nu(nu_), nv(nv_), u0(u0_), v0(v0_), du(nu_ > 1 ? (u1 - u0_) / (nu_ - 1) : 1.0),
      dv(nv_ > 1 ? (v1 - v0_) / (nv_ - 1) : 1.0) {
  if (nu_ < 1 || nv_ < 1) throw data_error("grid needs at least one point per axis");
}

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("MLS_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn) {
  unsigned nt = std::min<std::size_t>(thread_count(), n);
  if (nt <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t k = lo; k < hi; ++k) fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

namespace detail {

void first_stencil(int k, int n, int order, std::vector<int> &off, std::vector<double> &w) {
  if (order == 2) {
    if (k == 0) off = {0, 1, 2}, w = {-1.5, 2.0, -0.5};
    else if (k == n - 1) off = {0, -1, -2}, w = {1.5, -2.0, 0.5};
    else off = {-1, 1}, w = {-0.5, 0.5};
    return;
  }
  const double s = 1.0 / 12.0;
  if (k == 0) off = {0, 1, 2, 3, 4}, w = {-25 * s, 48 * s, -36 * s, 16 * s, -3 * s};
  else if (k == 1) off = {-1, 0, 1, 2, 3}, w = {-3 * s, -10 * s, 18 * s, -6 * s, 1 * s};
  else if (k == n - 1) off = {0, -1, -2, -3, -4}, w = {25 * s, -48 * s, 36 * s, -16 * s, 3 * s};
  else if (k == n - 2) off = {1, 0, -1, -2, -3}, w = {3 * s, 10 * s, -18 * s, 6 * s, -1 * s};
  else off = {-2, -1, 1, 2}, w = {1 * s, -8 * s, 8 * s, -1 * s};
}

void second_stencil(int k, int n, int order, std::vector<int> &off, std::vector<double> &w) {
  if (order == 2) {
    if (k == 0) off = {0, 1, 2, 3}, w = {2.0, -5.0, 4.0, -1.0};
    else if (k == n - 1) off = {0, -1, -2, -3}, w = {2.0, -5.0, 4.0, -1.0};
    else off = {-1, 0, 1}, w = {1.0, -2.0, 1.0};
    return;
  }
  const double s = 1.0 / 12.0;
  if (k == 0) off = {0, 1, 2, 3, 4, 5}, w = {45 * s, -154 * s, 214 * s, -156 * s, 61 * s, -10 * s};
  else if (k == 1) off = {-1, 0, 1, 2, 3, 4}, w = {10 * s, -15 * s, -4 * s, 14 * s, -6 * s, 1 * s};
  else if (k == n - 1) off = {0, -1, -2, -3, -4, -5}, w = {45 * s, -154 * s, 214 * s, -156 * s, 61 * s, -10 * s};
  else if (k == n - 2) off = {1, 0, -1, -2, -3, -4}, w = {10 * s, -15 * s, -4 * s, 14 * s, -6 * s, 1 * s};
  else off = {-2, -1, 0, 1, 2}, w = {-1 * s, 16 * s, -30 * s, 16 * s, -1 * s};
}

} // namespace detail

} // namespace mlg
