#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace ndslab {

enum class MapFamily { linear, perturbed_trig, identity, composite };

std::string to_string(MapFamily family);

/// One factor x -> d*x + a*sin(2*pi*x)/(2*pi) of a circle map lift.
struct TrigAtom {
  int degree = 1;
  double amplitude = 0.0;
};

/// Smooth circle map given by its lift F: R -> R with F(x+1) = F(x) + degree
/// and F(0) = 0.  Plain maps have one atom; composites (power systems) carry
/// their factors in application order.
///
/// lambda is a certified lower bound of F' and gamma a certified upper bound
/// of max(|F'|, |F''|).  Expansion (lambda > 1) is not required here so that
/// the identity can serve as a tail; operations that need it check it.
class CircleMap {
 public:
  static CircleMap linear(int degree);
  static CircleMap perturbed(int degree, double amplitude);
  static CircleMap identity();
  /// outer o inner, i.e. inner is applied first.
  static CircleMap compose(const CircleMap& inner, const CircleMap& outer);

  MapFamily family() const noexcept { return family_; }
  int degree() const noexcept { return degree_; }
  /// Amplitude of a single-atom map; 0 for composites.
  double amplitude() const noexcept;
  double lambda() const noexcept { return lambda_; }
  double gamma() const noexcept { return std::max(d1_max_, d2_max_); }
  double derivative_bound() const noexcept { return d1_max_; }
  double second_derivative_bound() const noexcept { return d2_max_; }
  bool is_expanding() const noexcept { return lambda_ > 1.0; }
  const std::vector<TrigAtom>& atoms() const noexcept { return atoms_; }

  double lift(double x) const noexcept;
  double lift_derivative(double x) const noexcept;
  double lift_second_derivative(double x) const noexcept;
  /// Unique x with F(x) = y; throws NonConvergence if |F(x) - y| > tol.
  double lift_inverse(double y, double tol = 1e-12) const;

  /// F(x) mod 1.
  double eval(double x) const noexcept;
  double derivative(double x) const noexcept { return lift_derivative(x); }
  /// The d points y_j in [0,1) with F(y_j) = x + j, sorted ascending.
  std::vector<double> branch_preimages(double x, double tol = 1e-12) const;

  friend bool operator==(const CircleMap& a, const CircleMap& b) noexcept;

 private:
  CircleMap() = default;
  void finish();

  MapFamily family_ = MapFamily::identity;
  int degree_ = 1;
  double lambda_ = 1.0;
  double d1_max_ = 1.0;
  double d2_max_ = 0.0;
  std::vector<TrigAtom> atoms_;
};

/// Nonautonomous sequence f_0, f_1, ...: an explicit prefix followed by a
/// tail map repeated forever.
class NdsSequence {
 public:
  NdsSequence(std::vector<CircleMap> prefix, CircleMap tail);
  static NdsSequence constant(const CircleMap& f) { return NdsSequence({}, f); }

  const CircleMap& map_at(std::size_t n) const noexcept {
    return n < prefix_.size() ? prefix_[n] : tail_;
  }
  const std::vector<CircleMap>& prefix() const noexcept { return prefix_; }
  const CircleMap& tail() const noexcept { return tail_; }

  double uniform_lambda() const noexcept { return lambda_; }
  double uniform_gamma() const noexcept { return gamma_; }
  bool is_expanding() const noexcept { return lambda_ > 1.0; }
  /// Throws PrecondViolated naming `operation` unless uniform_lambda > 1.
  void require_expanding(const std::string& operation) const;

  /// f_k^n(x) = f_{k+n-1} o ... o f_k (x), reduced mod 1.
  double compose_eval(std::size_t k, std::size_t n, double x) const noexcept;
  /// Same composition on lifts (no reduction).
  double compose_lift(std::size_t k, std::size_t n, double x) const noexcept;
  /// sum_{i<n} log f_{k+i}'(f_k^i x).
  double log_jacobian_sum(std::size_t k, std::size_t n, double x) const noexcept;
  double log_jacobian_sum(std::size_t n, double x) const noexcept {
    return log_jacobian_sum(0, n, x);
  }
  /// Sum of log-degrees over steps k..k+n-1.
  double log_degree_sum(std::size_t k, std::size_t n) const noexcept;

  /// Sequence g_m = f_{k+m}: the system started at time k.
  NdsSequence shifted(std::size_t k) const;

 private:
  std::vector<CircleMap> prefix_;
  CircleMap tail_;
  double lambda_ = 1.0;
  double gamma_ = 1.0;
};

}  // namespace ndslab
