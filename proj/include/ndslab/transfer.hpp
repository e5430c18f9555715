#pragma once

// Densities on the circle grid and the Perron-Frobenius (transfer) operator
// P_f phi(x) = sum_{f(y) = x} phi(y) / f'(y).

#include <cstddef>
#include <vector>

#include "ndslab/circle.hpp"
#include "ndslab/systems.hpp"

namespace ndslab {

/// Nonnegative grid function of unit mass (periodic trapezoid rule, which is
/// the exact integral of the linear interpolant).  N is a power of two >= 128.
class GridDensity {
 public:
  /// Validates and rescales `values` to unit mass.
  explicit GridDensity(std::vector<double> values);

  static GridDensity uniform(std::size_t n);
  template <class F>
  static GridDensity from_function(std::size_t n, F&& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(grid_point(i, n));
    return GridDensity(std::move(v));
  }

  std::size_t size() const noexcept { return samples_.size(); }
  double spacing() const noexcept { return samples_.spacing(); }
  const PeriodicSamples& samples() const noexcept { return samples_; }
  std::span<const double> values() const noexcept { return samples_.values(); }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  double at(double x) const noexcept { return samples_.at(x); }
  /// Measure of the arc [a, b] in lift coordinates.
  double measure(double a, double b) const noexcept { return samples_.integral(a, b); }
  double min() const noexcept { return samples_.min(); }

 private:
  PeriodicSamples samples_;
};

struct TransferStep {
  GridDensity density;
  double mass_defect = 0.0;  // integral of P phi before renormalization, minus 1
};

/// One application of the transfer operator on the grid of phi.
TransferStep perron_frobenius(const CircleMap& map, const GridDensity& phi, double tol = 1e-12);

struct Evolution {
  std::vector<GridDensity> densities;  // phi_0 .. phi_n
  std::vector<double> mass_defects;    // one per step
};

/// phi_{k+1} = P_{f_k} phi_k for k < n.
Evolution evolve(const NdsSequence& seq, const GridDensity& phi, std::size_t n, double tol = 1e-12);

/// Smallest L on the grid with |phi(x)/phi(y) - 1| <= L d(x, y) for all grid
/// pairs with 0 < d(x, y) < eps.  Throws NonPositiveDensity.
double lipschitz_ratio_constant(const GridDensity& phi, double eps);

/// (phi - kappa/2) / (1 - kappa/2).  Throws KappaTooLarge unless
/// 0 <= kappa < 2 min phi.
GridDensity renormalize(const GridDensity& phi, double kappa);

struct MemoryLossReport {
  std::vector<double> l1_trace;  // n = 0 .. n_max
  std::size_t window_begin = 0;  // fit uses n in [begin, end)
  std::size_t window_end = 0;
  bool degenerate = true;
  double slope = 0.0;
  double fitted_rate = 0.0;  // exp(slope)
  double r2 = 0.0;
  bool monotone = true;  // trace nonincreasing within 1e-10
};

/// Evolves phi and psi side by side and fits log ||phi_n - psi_n||_1 against n
/// by least squares over the leading run of distances above `floor`.
MemoryLossReport loss_of_memory(const NdsSequence& seq, const GridDensity& phi, const GridDensity& psi,
                                std::size_t n_max, double floor = 1e-12, double tol = 1e-12);

/// L1 distance of two densities on the same grid.
double l1_distance(const GridDensity& a, const GridDensity& b);

}  // namespace ndslab
