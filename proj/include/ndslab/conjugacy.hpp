#pragma once

// Equi-conjugacy between a sequence f_0, f_1, ... of degree-d circle maps
// and a fixed degree-d map f, as the fixed point of
//   sigma(h)_k = F_k^{-1} o h_{k+1} o F
// on lifts h_k(x) = x + p_k(x) with 1-periodic displacements p_k.  The fixed
// point satisfies pi_{k+1} o f = f_k o pi_k.

#include <cstddef>
#include <optional>
#include <vector>

#include "ndslab/circle.hpp"
#include "ndslab/systems.hpp"

namespace ndslab {

/// Lift homeomorphism x + p(x) commuting with integer translations.
class LiftHomeo {
 public:
  explicit LiftHomeo(PeriodicSamples displacement) : p_(std::move(displacement)) {}
  static LiftHomeo identity(std::size_t grid);

  const PeriodicSamples& displacement() const noexcept { return p_; }
  std::size_t grid() const noexcept { return p_.size(); }
  double lift(double x) const noexcept { return x + p_.at(x); }
  double eval(double x) const noexcept { return wrap(lift(x)); }
  /// Lift coordinate x with lift(x) = y, by bisection on the interpolant.
  double inverse(double y) const;
  /// Finite-difference slopes of the lift all positive.
  bool increasing() const noexcept;

 private:
  PeriodicSamples p_;
};

struct ConjugacyState {
  std::size_t horizon = 0;
  std::vector<LiftHomeo> h;  // h_0 .. h_T; h_k = id for k >= T
  CircleMap target;
  NdsSequence nds;
};

/// h_k = id for every k; validates the solver preconditions.
ConjugacyState identity_state(const NdsSequence& nds, const CircleMap& f, std::size_t horizon,
                              std::size_t grid = 8192);

/// One sigma update of every slot from the previous state.  Throws
/// NonMonotone if a new lift fails to be increasing on the grid.
ConjugacyState sigma_step(const ConjugacyState& state, double root_tol = 1e-13);

/// max over slots and nodes of |p_k - q_k|.
double state_distance(const ConjugacyState& a, const ConjugacyState& b);

struct ConjugacyReport {
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> contraction_trace;  // successive-state distances
  std::size_t iteration_budget = 0;       // ceil(log tol / log(1/lambda)) + 5
};

struct Conjugacy {
  ConjugacyState state;
  ConjugacyReport report;
  const std::vector<LiftHomeo>& maps() const noexcept { return state.h; }
};

/// Iterates sigma from `initial` (default: identity) until successive states
/// are closer than tol.  Throws DegreeMismatch, PrecondViolated, or
/// NoConvergence carrying the contraction trace.
Conjugacy solve_equiconjugacy(const NdsSequence& nds, const CircleMap& f, std::size_t horizon, double tol,
                              std::size_t max_iter, std::size_t grid = 8192, std::size_t residual_samples = 1000,
                              std::optional<ConjugacyState> initial = std::nullopt, double root_tol = 1e-13);

/// State after exactly `steps` sigma updates from the identity.
ConjugacyState run_sigma(const NdsSequence& nds, const CircleMap& f, std::size_t horizon, std::size_t steps,
                         std::size_t grid = 8192, double root_tol = 1e-13);

/// max over x_j = j / samples and k < T of d(pi_{k+1}(f x), f_k(pi_k x)).
double conjugacy_residual(const std::vector<LiftHomeo>& pis, const NdsSequence& nds, const CircleMap& f,
                          std::size_t samples);

/// max_x (pi(x + delta) - pi(x)) on lifts, over x on the displacement grid.
double oscillation(const LiftHomeo& pi, double delta);

/// min_{n <= n_max} 2 c lambda^{-n} + lambda^{-n} Gamma_f^n delta: the
/// equicontinuity modulus for displacements bounded by c.
double modulus_bound(double c, double lambda, double gamma_f, double delta, std::size_t n_max = 64);

}  // namespace ndslab
