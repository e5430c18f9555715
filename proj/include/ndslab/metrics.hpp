#pragma once

// Bowen metrics d_{i,n}, Bowen balls, greedy separated/spanning sets on a
// uniform grid, and the distortion / volume estimates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ndslab/systems.hpp"

namespace ndslab {

/// max_{0<=j<=n} d(f_i^j x, f_i^j y).
double bowen_distance(const NdsSequence& seq, std::size_t i, std::size_t n, double x, double y);

/// Bowen distance between x and x + t (|t| < 1/2), following the lift
/// difference along the orbit of x.  Stops early once the running max reaches
/// `cap`, returning that partial max.  Agrees with bowen_distance while all
/// orbit differences stay below 1/2, which holds below arc_radius().
double bowen_offset_distance(const NdsSequence& seq, std::size_t i, std::size_t n, double x,
                             double t, double cap = 0.5);

/// Radii below this bound give arc-shaped Bowen balls: 1/(2 * uniform_gamma),
/// half the preimage separation 1/Gamma of every map in the sequence.
double arc_radius(const NdsSequence& seq);

struct BowenBallArc {
  double center = 0.0;
  std::size_t order = 0;
  double radius = 0.0;
  double left = 0.0;   // circle point
  double right = 0.0;  // circle point
  double measure = 0.0;
};

/// Bowen ball B_i^n(x, eps) as an arc; throws RadiusTooLarge unless
/// eps < arc_radius(seq).
BowenBallArc bowen_ball(const NdsSequence& seq, std::size_t i, std::size_t n, double x, double eps);

/// Grid {k / resolution} of the circle with the Bowen metric d_{0,n}.  Owns
/// the greedy set constructions shared by the entropy and pressure modules.
class BowenGrid {
 public:
  BowenGrid(const NdsSequence& seq, std::size_t n, double eps, std::size_t resolution);

  std::size_t resolution() const noexcept { return res_; }
  bool arc_regime() const noexcept { return arcs_; }
  double point(std::size_t k) const noexcept;
  /// d_{0,n}(point(a), point(b)) < eps, symmetric in (a, b) by construction.
  bool close(std::size_t a, std::size_t b) const;

  /// First-fit maximal (n, eps)-separated set.  Candidates are visited by
  /// descending weight (ties by index); empty weights mean index order.
  std::vector<std::size_t> separated_set(std::span<const double> weights = {}) const;

  /// Greedy (n, eps)-spanning set of the grid.  In the arc regime: interval
  /// cover from the leftmost uncovered point, taking a centre with maximal
  /// coverage end; among ties the smallest weight, then the rightmost index.
  /// Outside the arc regime the maximal separated set is returned.
  std::vector<std::size_t> spanning_set(std::span<const double> weights = {}) const;

  /// Largest grid offset m with close(k, k +- j) for all j <= m (arc regime).
  /// `hint` is a guess of the answer; a good guess saves probes.
  std::size_t reach_right(std::size_t k, std::size_t hint = 1) const;
  std::size_t reach_left(std::size_t k, std::size_t hint = 1) const;

 private:
  NdsSequence seq_;
  std::size_t n_;
  double eps_;
  std::size_t res_;
  bool arcs_;
  std::size_t max_offset_;
};

/// Greedy lower bound of the maximal (n, eps)-separated cardinality.
/// Requires resolution >= 10 / eps.
std::size_t count_separated(const NdsSequence& seq, std::size_t n, double eps, std::size_t resolution);

/// Upper-bound estimate of the minimal (n, eps)-spanning cardinality; never
/// exceeds count_separated at the same arguments.
std::size_t count_spanning(const NdsSequence& seq, std::size_t n, double eps, std::size_t resolution);

/// Distortion constant C0 = Gamma / (lambda - 1).
double distortion_constant(const NdsSequence& seq);

/// |(f_0^n)'(x)| / |(f_0^n)'(y)|.  Throws PrecondViolated unless
/// d_{0,n-1}(x, y) < radius (default arc_radius(seq)).
double distortion_ratio(const NdsSequence& seq, std::size_t n, double x, double y, double radius = -1.0);

struct VolumeRow {
  std::size_t n = 0;
  double product_min = 0.0;
  double product_max = 0.0;
};

struct VolumeReport {
  double eps = 0.0;
  double min_product = 0.0;
  double max_product = 0.0;
  double ratio = 0.0;      // max / min
  double ratio_bound = 0.0;  // exp(2 C0 eps)
  std::vector<VolumeRow> rows;
};

/// m(B_0^n(x, eps)) * |(f_0^n)'(x)| over x_j = (j + 1/2)/samples and n <= n_max.
VolumeReport volume_lemma_check(const NdsSequence& seq, double eps, std::size_t n_max, std::size_t samples);

}  // namespace ndslab
