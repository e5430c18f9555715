#pragma once

#include <cstddef>
#include <vector>

#include "ndslab/systems.hpp"
#include "ndslab/transfer.hpp"

namespace ndslab {

/// Partition of the circle into the arcs [b_i, b_{i+1}) (the last one wraps
/// through 0) given strictly increasing breakpoints in [0,1).
class IntervalPartition {
 public:
  explicit IntervalPartition(std::vector<double> breakpoints);
  /// m equal arcs starting at 0.
  static IntervalPartition uniform(std::size_t m);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  std::size_t cell_count() const noexcept { return breakpoints_.size(); }
  /// Lift interval [left, right) of cell i, with right > left.
  std::pair<double, double> cell(std::size_t i) const noexcept;
  double max_cell_length() const noexcept;

 private:
  std::vector<double> breakpoints_;
};

/// P_0, P_1, ...: finite prefix, then the tail repeated.
struct PartitionSequence {
  std::vector<IntervalPartition> prefix;
  IntervalPartition tail;

  static PartitionSequence constant(IntervalPartition p) { return {{}, std::move(p)}; }
  const IntervalPartition& at(std::size_t n) const noexcept {
    return n < prefix.size() ? prefix[n] : tail;
  }
};

constexpr std::size_t default_cell_budget = std::size_t{1} << 22;

/// Common refinement of f_0^{-i} P_i over i < n.  Throws CellBlowup when the
/// breakpoint count bound exceeds `cell_budget`.
IntervalPartition joined_partition(const NdsSequence& seq, const PartitionSequence& parts, std::size_t n,
                                   std::size_t cell_budget = default_cell_budget, double tol = 1e-12);

/// -sum mu(P) log mu(P) with mu(P) the exact integral of the density over P.
double partition_entropy(const GridDensity& mu, const IntervalPartition& part);

/// Values v_n for n = 1..n_max with a finite-horizon limsup (or liminf) proxy
/// taken over the terminal window n_begin..n_max.
struct Trace {
  std::vector<double> values;  // values[n-1] belongs to horizon n
  std::size_t window_begin = 1;
  std::size_t window_end = 1;  // inclusive
  double estimate = 0.0;

  double at(std::size_t n) const { return values.at(n - 1); }
};

/// First horizon of the terminal window: n_max - ceil(fraction * n_max), at least 1.
std::size_t window_start(std::size_t n_max, double fraction = 1.0 / 3.0);

double window_max(const std::vector<double>& values, std::size_t begin, std::size_t end);
double window_min(const std::vector<double>& values, std::size_t begin, std::size_t end);

/// (1/n) H_mu(joined partition), limsup proxy = max over the terminal window.
Trace metric_entropy_estimate(const NdsSequence& seq, const PartitionSequence& parts, const GridDensity& mu,
                              std::size_t n_max, std::size_t cell_budget = default_cell_budget,
                              double window_fraction = 1.0 / 3.0);

/// (1/n) int log (f_0^n)' dm by the midpoint rule on quad_points nodes.
Trace metric_entropy_formula(const NdsSequence& seq, std::size_t n_max, std::size_t quad_points,
                             double window_fraction = 1.0 / 3.0);

/// (1/n) log int (f_0^n)' dm, accumulated in the log domain.
Trace top_entropy_formula(const NdsSequence& seq, std::size_t n_max, std::size_t quad_points,
                          double window_fraction = 1.0 / 3.0);

struct CountRow {
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t separated = 0;
  std::size_t spanning = 0;
  double rate_separated = 0.0;  // (1/n) log separated
  double rate_spanning = 0.0;
};

struct CountColumn {
  double eps = 0.0;
  /// (log C(n_max) - log C(n_w)) / (n_max - n_w) over the terminal window of
  /// separated counts; the raw (1/n) log C(n) carries a log(1/eps)/n offset.
  double secant_rate = 0.0;
  double window_max_rate = 0.0;  // max of raw (1/n) log C(n) over the window
};

struct EntropyTable {
  std::vector<CountRow> rows;  // ordered by eps (as given), then n
  std::vector<CountColumn> columns;
  std::size_t window_begin = 1;
  std::size_t window_end = 1;
  double headline = 0.0;  // secant rate of the smallest eps
  bool monotone_in_eps = true;
};

/// Separated/spanning counts for every eps and n = 1..n_max.
EntropyTable top_entropy_separated(const NdsSequence& seq, const std::vector<double>& eps_list,
                                   std::size_t n_max, std::size_t resolution, bool with_spanning = true,
                                   double window_fraction = 1.0 / 3.0);

/// Secant growth rate of a positive sequence c(1..n_max) over the terminal window.
double secant_rate(const std::vector<double>& log_counts, std::size_t begin, std::size_t end);

}  // namespace ndslab
