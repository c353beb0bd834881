#ifndef WAVESRC_GRID_HPP
#define WAVESRC_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "wavesrc/common.hpp"

namespace wavesrc {

using Point = std::array<double, 3>; // y[2] unused when d == 2

/// Periodic Cartesian sampling lattice for the source support box [0, L)^d.
/// The compact support D must sit strictly inside with a >= 4h zero margin;
/// that margin is a property of the strength grids, checked at validation.
struct Grid {
  int d = 2;          // spatial dimension, 2 or 3
  int n = 0;          // nodes per axis, power of two
  double length = 1.0; // physical extent per axis

  Grid() = default;
  Grid(int d_, int n_, double length_) : d(d_), n(n_), length(length_) {
    if (d != 2 && d != 3)
      throw ConfigError("Grid: dimension must be 2 or 3");
    if (n < 8 || (n & (n - 1)) != 0)
      throw ConfigError("Grid: per-axis node count must be a power of two >= 8");
    if (!(length > 0.0))
      throw ConfigError("Grid: extent must be positive");
  }

  double spacing() const { return length / n; }
  double nyquist() const { return kPi / spacing(); }
  std::size_t node_count() const {
    std::size_t c = 1;
    for (int a = 0; a < d; ++a) c *= static_cast<std::size_t>(n);
    return c;
  }

  /// Row-major flat index of the multi-index (i0, i1[, i2]).
  std::size_t index(int i0, int i1, int i2 = 0) const {
    if (d == 2) return static_cast<std::size_t>(i0) * n + i1;
    return (static_cast<std::size_t>(i0) * n + i1) * n + i2;
  }

  Point node(std::size_t flat) const {
    const double h = spacing();
    Point p{0.0, 0.0, 0.0};
    if (d == 2) {
      p[0] = h * static_cast<double>(flat / n);
      p[1] = h * static_cast<double>(flat % n);
    } else {
      p[2] = h * static_cast<double>(flat % n);
      flat /= n;
      p[1] = h * static_cast<double>(flat % n);
      p[0] = h * static_cast<double>(flat / n);
    }
    return p;
  }

  /// Signed frequency of FFT bin i along one axis: xi = 2*pi*k/L, k in [-n/2, n/2).
  double bin_frequency(int i) const {
    const int k = (i <= n / 2 - 1) ? i : i - n; // bins n/2..n-1 wrap to negative
    return 2.0 * kPi * k / length;
  }

  bool operator==(const Grid& o) const {
    return d == o.d && n == o.n && length == o.length;
  }
};

inline double dot(const Point& a, const Point& b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a, int d) {
  return std::sqrt(dot(a, a, d));
}

} // namespace wavesrc

#endif
