#pragma once

// Circle of circumference one, represented by the fundamental domain [0,1)
// of the covering map R -> S^1, plus periodic grid-sampled functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ndslab {

/// Reduce a lift coordinate to [0,1).
inline double wrap(double x) noexcept {
  const double r = x - std::floor(x);
  return r < 1.0 ? r : 0.0;
}

/// Arc-length distance on the circle; at most 1/2.
inline double arc_distance(double x, double y) noexcept {
  const double w = wrap(x - y);
  return std::min(w, 1.0 - w);
}

inline double grid_point(std::size_t i, std::size_t n) noexcept {
  return static_cast<double>(i) / static_cast<double>(n);
}

/// Values of a 1-periodic function at the nodes i/N, i = 0..N-1, read back
/// through periodic piecewise-linear interpolation.  Integrals are exact
/// integrals of the interpolant, so `mean()` is the trapezoid (equivalently,
/// periodic midpoint) rule on the nodes.
class PeriodicSamples {
 public:
  PeriodicSamples() = default;
  explicit PeriodicSamples(std::vector<double> values);

  template <class F>
  static PeriodicSamples sample(std::size_t n, F&& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(grid_point(i, n));
    return PeriodicSamples(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double spacing() const noexcept { return 1.0 / static_cast<double>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Interpolated value at any lift coordinate.
  double at(double x) const noexcept;

  double mean() const noexcept { return total_; }
  double min() const noexcept;
  double max() const noexcept;
  double max_abs() const noexcept;
  /// Lipschitz constant of the interpolant (max slope over cells).
  double lipschitz() const noexcept;

  /// Integral of the interpolant over [a,b] in lift coordinates (a <= b).
  double integral(double a, double b) const noexcept;

 private:
  double primitive(double t) const noexcept;

  std::vector<double> values_;
  std::vector<double> cumulative_;  // integral over [0, i/N], size N+1
  double total_ = 0.0;
};

}  // namespace ndslab
