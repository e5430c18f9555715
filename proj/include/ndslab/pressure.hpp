#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ndslab/circle.hpp"
#include "ndslab/entropy.hpp"
#include "ndslab/systems.hpp"
#include "ndslab/transfer.hpp"

namespace ndslab {

/// phi_0, phi_1, ... as grid samples (prefix, then tail repeated), evaluated
/// by periodic linear interpolation.
class PotentialSequence {
 public:
  PotentialSequence(std::vector<PeriodicSamples> prefix, PeriodicSamples tail);

  static PotentialSequence constant(double c, std::size_t grid = 256);
  /// phi_n = -log f_n' for n < seq.prefix().size(), then -log of the tail.
  static PotentialSequence neg_log_derivative(const NdsSequence& seq, std::size_t grid);

  const PeriodicSamples& at(std::size_t n) const noexcept {
    return n < prefix_.size() ? prefix_[n] : tail_;
  }
  double value(std::size_t n, double x) const noexcept { return at(n).at(x); }
  const std::vector<PeriodicSamples>& prefix() const noexcept { return prefix_; }
  const PeriodicSamples& tail() const noexcept { return tail_; }
  /// sup norm over all members.
  double uniform_bound() const noexcept { return bound_; }
  /// Lipschitz bound over all members.
  double modulus() const noexcept { return modulus_; }

  /// Same sequence plus a constant.
  PotentialSequence shifted(double c) const;

 private:
  std::vector<PeriodicSamples> prefix_;
  PeriodicSamples tail_;
  double bound_ = 0.0;
  double modulus_ = 0.0;
};

/// S_n phi(x) = sum_{i<n} phi_i(f_0^i x).
double birkhoff_sum(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n, double x);

/// S_n phi at every point of the grid {k / resolution}.
std::vector<double> birkhoff_weights(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n,
                                     std::size_t resolution);

struct WeightedSet {
  std::vector<std::size_t> points;  // grid indices, ascending
  double log_value = 0.0;           // log sum exp(S_n phi)
};

/// Greedy descending-weight (n, eps)-separated set; a lower bound of log S(n, eps).
WeightedSet pressure_separated(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n, double eps,
                               std::size_t resolution);

/// Greedy spanning set; the smaller of the interval cover and the maximal
/// separated set (which also spans).  An upper-bound heuristic for log R(n, eps).
WeightedSet pressure_spanning(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n, double eps,
                              std::size_t resolution);

struct PressureRow {
  std::size_t n = 0;
  double eps = 0.0;
  double log_s = 0.0;
  double log_r = 0.0;
};

struct PressureColumn {
  double eps = 0.0;
  double secant_rate = 0.0;      // terminal-window secant of log S
  double window_max_rate = 0.0;  // max of (1/n) log S over the window
};

struct PressureTable {
  std::vector<PressureRow> rows;
  std::vector<PressureColumn> columns;
  std::size_t window_begin = 1;
  std::size_t window_end = 1;
  double headline = 0.0;  // secant rate of the smallest eps
};

PressureTable top_pressure_estimate(const NdsSequence& seq, const PotentialSequence& pot,
                                    const std::vector<double>& eps_list, std::size_t n_max,
                                    std::size_t resolution, bool with_spanning = true,
                                    double window_fraction = 1.0 / 3.0);

struct MetricPressure {
  double entropy = 0.0;          // limsup proxy of (1/n) H
  double potential_mean = 0.0;   // liminf proxy of (1/n) sum int phi_i d mu_i
  double value = 0.0;            // entropy + potential_mean
  Trace entropy_trace;
  std::vector<double> potential_trace;  // index n-1 for horizon n
  /// Entropy is taken on the supplied partitions only, so the value is a
  /// lower bound of the supremum over all admissible partition sequences.
  bool partition_lower_bound = true;
};

MetricPressure metric_pressure(const NdsSequence& seq, const PotentialSequence& pot, const GridDensity& mu,
                               const PartitionSequence& parts, std::size_t n_max,
                               std::size_t cell_budget = default_cell_budget,
                               double window_fraction = 1.0 / 3.0);

/// k-th power: f^[k]_n = f_{kn}^k and psi_n = sum_{j<k} phi_{nk+j} o f_{nk}^j,
/// the latter sampled on the potential grid (the tail's grid size).
std::pair<NdsSequence, PotentialSequence> power_system(const NdsSequence& seq, const PotentialSequence& pot,
                                                       std::size_t k);

struct VariationalGap {
  double top_pressure = 0.0;
  double metric_pressure = 0.0;
  double gap = 0.0;
};

VariationalGap variational_gap(const NdsSequence& seq, const PotentialSequence& pot, const GridDensity& mu,
                               const PartitionSequence& parts, double eps, std::size_t n_max,
                               std::size_t resolution, std::size_t cell_budget = default_cell_budget);

/// log sum exp of w over the given indices.
double log_sum_exp(const std::vector<double>& w, const std::vector<std::size_t>& idx);

}  // namespace ndslab
