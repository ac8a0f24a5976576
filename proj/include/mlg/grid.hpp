#pragma once

#include "mlg/types.hpp"

#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

namespace mlg {

// Uniform (u,v) grid; storage is row-major in v then u (u varies fastest).
struct Grid {
  int nu = 0, nv = 0;
  double u0 = 0.0, v0 = 0.0, du = 1.0, dv = 1.0;

  Grid() = default;
  Grid(double u0_, double u1, int nu_, double v0_, double v1, int nv_);

  double u(int i) const { return u0 + i * du; }
  double v(int j) const { return v0 + j * dv; }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nu + i; }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
  double step(int axis) const { return axis == 0 ? du : dv; }
  int count(int axis) const { return axis == 0 ? nu : nv; }
  // True when (i,j) is at least `band` points away from every edge.
  bool interior(int i, int j, int band) const {
    return i >= band && j >= band && i < nu - band && j < nv - band;
  }
};

// Worker count: hardware concurrency capped by MLS_THREADS.
unsigned thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

namespace detail {

template <class T> T zero_like(const T &x) {
  if constexpr (std::is_arithmetic_v<T>) return T(0);
  else return T::Zero(x.rows(), x.cols());
}

// Stencil weights for the first derivative at position k of an n-point line.
// Returns offsets relative to k and weights (to be divided by h).
void first_stencil(int k, int n, int order, std::vector<int> &off, std::vector<double> &w);
void second_stencil(int k, int n, int order, std::vector<int> &off, std::vector<double> &w);

} // namespace detail

// Finite-difference derivative of a whole grid field along axis 0 (u) or 1 (v).
// order 2 or 4; one-sided stencils of the same order near the edges.
template <class T>
std::vector<T> grid_diff(const Grid &g, const std::vector<T> &f, int axis, int order = 2, bool second = false) {
  int n = g.count(axis);
  if (n < (order == 2 ? (second ? 4 : 3) : (second ? 6 : 5))) throw data_error("grid too small for stencil");
  double h = g.step(axis);
  double scale = second ? 1.0 / (h * h) : 1.0 / h;
  std::vector<T> out(f.size(), detail::zero_like(f[0]));
  std::vector<int> off;
  std::vector<double> w;
  for (int k = 0; k < n; ++k) {
    if (second) detail::second_stencil(k, n, order, off, w);
    else detail::first_stencil(k, n, order, off, w);
    for (int o = 0; o < (axis == 0 ? g.nv : g.nu); ++o) {
      int i = axis == 0 ? k : o, j = axis == 0 ? o : k;
      T acc = detail::zero_like(f[0]);
      for (std::size_t s = 0; s < off.size(); ++s) {
        int ii = axis == 0 ? i + off[s] : i, jj = axis == 0 ? j : j + off[s];
        acc += w[s] * f[g.idx(ii, jj)];
      }
      out[g.idx(i, j)] = acc * scale;
    }
  }
  return out;
}

// 4-point cubic interpolation at the midpoint between k and k+1 on a line of n samples.
template <class T> T mid_interp(const std::function<T(int)> &at, int k, int n) {
  if (n < 4) return 0.5 * (at(k) + at(k + 1));
  if (k >= 1 && k + 2 <= n - 1) return (-at(k - 1) + 9.0 * at(k) + 9.0 * at(k + 1) - at(k + 2)) / 16.0;
  if (k == 0) return (5.0 * at(0) + 15.0 * at(1) - 5.0 * at(2) + at(3)) / 16.0;
  // k == n-2
  return (5.0 * at(n - 1) + 15.0 * at(n - 2) - 5.0 * at(n - 3) + at(n - 4)) / 16.0;
}

} // namespace mlg
