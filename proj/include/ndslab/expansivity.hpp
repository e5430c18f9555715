#pragma once

// Strong uniform expansivity on a finite net, expansivity witnesses, and the
// Frink metrization pipeline producing adapted metrics in which every map
// expands small distances by mu = 2^{1/(3N)}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ndslab/systems.hpp"

namespace ndslab {

/// Net {a / size : a < size} of the circle.
std::vector<double> uniform_net(std::size_t size);

struct SueWitness {
  std::size_t time = 0;
  double x = 0.0;
  double y = 0.0;
  double distance = 0.0;        // d_i(x, y) >= eps
  double bowen_distance = 0.0;  // d_{i, N_max}(x, y) < delta
};

struct SueResult {
  bool ok = false;
  std::size_t horizon = 0;  // smallest N when ok
  std::optional<SueWitness> witness;
};

/// Smallest N <= n_max with d_{i,N}(x,y) < delta => d_i(x,y) < eps for all
/// base times i <= time_window and all pairs of the net; otherwise a failure
/// carrying a pair that stays delta-close for n_max steps.
SueResult sue_horizon(const NdsSequence& seq, double delta, double eps, std::size_t n_max,
                      std::size_t time_window, std::size_t net_size);

struct ExpansivityWitness {
  std::size_t n = 0;
  double x = 0.0;
  double y = 0.0;
  double distance = 0.0;           // d_0(x, y)
  double max_orbit_distance = 0.0;  // sup_j d(f_0^j x, f_0^j y)
  double collision_residual = 0.0;  // d(f_0^n x, f_0^n y)
};

/// x = 0 and y = (F_0^n)^{-1}(1) on lifts: distinct points that coincide from
/// time n on.  With max_orbit_distance < delta they defeat time-0
/// expansivity with constant delta.
ExpansivityWitness time0_witness(const NdsSequence& seq, std::size_t n);

/// Symmetric relation levels on a net: level(a, b) is the deepest k <= depth
/// with (a, b) in R_k.  R_0 is all pairs and the levels are nested.
class NestedRelations {
 public:
  NestedRelations(std::size_t net_size, std::size_t depth);

  std::size_t size() const noexcept { return size_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t level(std::size_t a, std::size_t b) const noexcept { return level_[a * size_ + b]; }
  void set_level(std::size_t a, std::size_t b, std::size_t k);
  bool contains(std::size_t k, std::size_t a, std::size_t b) const noexcept { return level(a, b) >= k; }
  /// Number of off-diagonal pairs in R_k.
  std::size_t off_diagonal(std::size_t k) const noexcept;

 private:
  std::size_t size_;
  std::size_t depth_;
  std::vector<std::uint8_t> level_;
};

/// V_k = {d_{n,k} < delta} for 1 <= k <= depth, V_0 all pairs.  Throws
/// DepthInsufficient if V_depth keeps an off-diagonal pair.
NestedRelations build_neighborhoods(const NdsSequence& seq, std::size_t n, double delta, std::size_t depth,
                                    const std::vector<double>& net, bool require_separation = true);

/// U_0 = all pairs, U_k = V_{(k-1) N} for 1 <= k <= depth.
NestedRelations frink_levels(const NestedRelations& v, std::size_t n_step, std::size_t depth);

/// Dense symmetric matrix on the net.
class NetMatrix {
 public:
  explicit NetMatrix(std::size_t n = 0) : n_(n), a_(n * n, 0.0) {}
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

struct CompositionViolation {
  std::size_t level = 0;
  std::size_t a = 0, b = 0, c = 0, d = 0;  // chain a-b-c-d in U_k with (a, d) outside U_{k-1}
};

/// First violation of U_k o U_k o U_k within U_{k-1}, if any.
std::optional<CompositionViolation> triple_composition_violation(const NestedRelations& u);

/// Shortest-path metric with edge weight 2^{-(k+1)} for pairs whose deepest
/// level is k (0 on the diagonal).  Checks the triple-composition hypothesis
/// first (HypothesisViolated) and requires U_depth to be the diagonal
/// (DepthInsufficient).
NetMatrix frink_metric(const NestedRelations& u);

struct SandwichReport {
  bool holds = true;
  std::vector<bool> per_level;  // level k = 1..depth at index k-1
  std::size_t checked_pairs = 0;
};

/// (x,y) in U_k => rho < 2^{-k}, and rho < 2^{-k} => (x,y) in U_{k-1}.
SandwichReport check_sandwich(const NestedRelations& u, const NetMatrix& rho);

struct MetricAxioms {
  bool symmetric = true;
  bool triangle = true;
  bool separates = true;
  double worst_triangle_excess = 0.0;
};

MetricAxioms check_metric(const NetMatrix& m);

/// Index of the net point nearest to x.
std::size_t project_to_net(double x, std::size_t net_size) noexcept;

/// rho'_n(x, y) = sum_{i < 3N} mu^{-i} rho_{n+i}(P^i x, P^i y) along orbits
/// projected to the net after every step; rhos[i] is rho_{n+i}.
NetMatrix adapted_metric(const NdsSequence& seq, std::size_t n, const std::vector<NetMatrix>& rhos, std::size_t n_step);

struct ExpansionReport {
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  double min_ratio = 0.0;  // min rho'_{n+1}(Pf x, Pf y) / rho'_n(x, y) over checked pairs
  double slack = 0.0;
  double mu = 0.0;
  std::size_t pairs_below_threshold_adapted = 0;  // pairs with rho'_n < threshold
};

/// Checks rho'_{n+1}(P f_n x, P f_n y) >= mu rho'_n(x, y) - 2 slack over net
/// pairs with 0 < gate(x, y) < threshold, where gate is the Frink metric
/// rho_n (the smallness condition of the expansion estimate).
ExpansionReport expansion_check(const NetMatrix& rho_prime_n, const NetMatrix& rho_prime_next, const CircleMap& f_n,
                                const NetMatrix& gate, double threshold, double mu, double slack);

/// Circle distance between f(x_a) and its projection, maximized over the net.
double projection_error(const CircleMap& f, std::size_t net_size);

struct FrinkPipelineResult {
  std::size_t net_size = 0;
  std::size_t depth = 0;
  std::size_t n_step = 0;  // s.u.e. horizon N
  double delta = 0.0;
  double mu = 0.0;
  NestedRelations u{0, 0};
  NetMatrix rho;           // rho_n
  NetMatrix rho_prime;     // rho'_n
  NetMatrix rho_prime_next;  // rho'_{n+1}
  SandwichReport sandwich;
  MetricAxioms rho_axioms;
  MetricAxioms rho_prime_axioms;
  ExpansionReport expansion;
};

/// Full construction at base time n: N from sue_horizon(delta, delta/3), the
/// Frink metrics rho_{n..n+3N}, adapted metrics at n and n+1, and all checks.
FrinkPipelineResult frink_pipeline(const NdsSequence& seq, std::size_t n, std::size_t net_size, double delta,
                                   std::size_t depth, std::size_t sue_max = 32, double threshold = 1.0 / 32.0);

/// ceil(1 / (2 eps)) arcs of radius eps cover the circle at every time.
std::vector<std::size_t> uniform_total_boundedness(double eps, std::size_t times);

/// Terminal-window secant rate of log #cells of the joined uniform partition
/// with ceil(1/delta) arcs: entropy generated by a delta-cover sequence.
double generator_entropy(const NdsSequence& seq, double delta, std::size_t n_max);

}  // namespace ndslab
