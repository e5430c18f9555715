#include "ndslab/systems.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ndslab/circle.hpp"
#include "ndslab/errors.hpp"

namespace ndslab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double atom_lift(const TrigAtom& a, double x) noexcept {
  if (a.amplitude == 0.0) return a.degree * x;
  return a.degree * x + a.amplitude * std::sin(two_pi * x) / two_pi;
}

double atom_derivative(const TrigAtom& a, double x) noexcept {
  if (a.amplitude == 0.0) return a.degree;
  return a.degree + a.amplitude * std::cos(two_pi * x);
}

double atom_second_derivative(const TrigAtom& a, double x) noexcept {
  if (a.amplitude == 0.0) return 0.0;
  return -two_pi * a.amplitude * std::sin(two_pi * x);
}

double atom_inverse(const TrigAtom& a, double y, double tol) {
  const double d = a.degree;
  if (a.amplitude == 0.0) return y / d;
  // F is increasing and |F(x) - d x| <= A, so the root lies in this bracket.
  const double spread = std::fabs(a.amplitude) / two_pi;
  const double margin = 1e-12 * (1.0 + std::fabs(y));
  double lo = (y - spread) / d - margin;
  double hi = (y + spread) / d + margin;
  const double width = 1e-14 * std::max(1.0, std::fabs(y) / d);
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (atom_lift(a, mid) < y) lo = mid;
    else hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int k = 0; k < 2; ++k) x -= (atom_lift(a, x) - y) / atom_derivative(a, x);
  const double residual = std::fabs(atom_lift(a, x) - y);
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "branch solve residual " << residual << " exceeds tolerance " << tol << " at y=" << y;
    throw Error(ErrorKind::non_convergence, os.str()).with_trace({residual});
  }
  return x;
}

}  // namespace

std::string to_string(MapFamily family) {
  switch (family) {
    case MapFamily::linear: return "linear";
    case MapFamily::perturbed_trig: return "perturbed";
    case MapFamily::identity: return "identity";
    case MapFamily::composite: return "composite";
  }
  return "unknown";
}

CircleMap CircleMap::linear(int degree) { return perturbed(degree, 0.0); }

CircleMap CircleMap::perturbed(int degree, double amplitude) {
  if (degree < 2) {
    throw Error(ErrorKind::invalid_argument,
                "degree must be >= 2 for an expanding map, got " + std::to_string(degree));
  }
  if (!std::isfinite(amplitude) || degree - std::fabs(amplitude) <= 1.0) {
    std::ostringstream os;
    os << "expansion bound d - |a| = " << degree - std::fabs(amplitude)
       << " must exceed 1 (degree " << degree << ", amplitude " << amplitude << ")";
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  CircleMap m;
  m.atoms_ = {TrigAtom{degree, amplitude}};
  m.finish();
  return m;
}

CircleMap CircleMap::identity() {
  CircleMap m;
  m.atoms_ = {TrigAtom{1, 0.0}};
  m.finish();
  return m;
}

CircleMap CircleMap::compose(const CircleMap& inner, const CircleMap& outer) {
  CircleMap m;
  m.atoms_ = inner.atoms_;
  m.atoms_.insert(m.atoms_.end(), outer.atoms_.begin(), outer.atoms_.end());
  m.finish();
  return m;
}

void CircleMap::finish() {
  // Drop identity factors; they contribute nothing.
  std::vector<TrigAtom> kept;
  for (const auto& a : atoms_)
    if (!(a.degree == 1 && a.amplitude == 0.0)) kept.push_back(a);
  if (kept.empty()) kept.push_back(TrigAtom{1, 0.0});
  atoms_ = std::move(kept);

  degree_ = 1;
  lambda_ = 1.0;
  d1_max_ = 1.0;
  d2_max_ = 0.0;
  for (const auto& a : atoms_) {
    const double amp = std::fabs(a.amplitude);
    const double lo = a.degree - amp;
    const double hi1 = a.degree + amp;
    const double hi2 = two_pi * amp;
    // (g o f)'' = g''(f) f'^2 + g'(f) f''
    d2_max_ = hi2 * d1_max_ * d1_max_ + hi1 * d2_max_;
    d1_max_ *= hi1;
    lambda_ *= lo;
    degree_ *= a.degree;
  }
  if (atoms_.size() > 1) family_ = MapFamily::composite;
  else if (degree_ == 1) family_ = MapFamily::identity;
  else if (atoms_[0].amplitude == 0.0) family_ = MapFamily::linear;
  else family_ = MapFamily::perturbed_trig;
}

double CircleMap::amplitude() const noexcept {
  return atoms_.size() == 1 ? atoms_[0].amplitude : 0.0;
}

double CircleMap::lift(double x) const noexcept {
  for (const auto& a : atoms_) x = atom_lift(a, x);
  return x;
}

double CircleMap::lift_derivative(double x) const noexcept {
  double d = 1.0;
  for (const auto& a : atoms_) {
    d *= atom_derivative(a, x);
    x = atom_lift(a, x);
  }
  return d;
}

double CircleMap::lift_second_derivative(double x) const noexcept {
  double d1 = 1.0;
  double d2 = 0.0;
  for (const auto& a : atoms_) {
    const double g1 = atom_derivative(a, x);
    const double g2 = atom_second_derivative(a, x);
    d2 = g2 * d1 * d1 + g1 * d2;
    d1 *= g1;
    x = atom_lift(a, x);
  }
  return d2;
}

double CircleMap::lift_inverse(double y, double tol) const {
  require(tol > 0.0, "root tolerance must be positive");
  double x = y;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) x = atom_inverse(*it, x, tol);
  if (atoms_.size() > 1) {
    const double residual = std::fabs(lift(x) - y);
    if (!(residual <= tol * degree_)) {
      std::ostringstream os;
      os << "composite branch solve residual " << residual << " exceeds tolerance";
      throw Error(ErrorKind::non_convergence, os.str()).with_trace({residual});
    }
  }
  return x;
}

double CircleMap::eval(double x) const noexcept { return wrap(lift(x)); }

std::vector<double> CircleMap::branch_preimages(double x, double tol) const {
  std::vector<double> out(static_cast<std::size_t>(degree_));
  const double base = wrap(x);
  for (int j = 0; j < degree_; ++j) out[static_cast<std::size_t>(j)] = wrap(lift_inverse(base + j, tol));
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const CircleMap& a, const CircleMap& b) noexcept {
  if (a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
    if (a.atoms_[i].degree != b.atoms_[i].degree || a.atoms_[i].amplitude != b.atoms_[i].amplitude)
      return false;
  }
  return true;
}

NdsSequence::NdsSequence(std::vector<CircleMap> prefix, CircleMap tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  lambda_ = tail_.lambda();
  gamma_ = tail_.gamma();
  for (const auto& m : prefix_) {
    lambda_ = std::min(lambda_, m.lambda());
    gamma_ = std::max(gamma_, m.gamma());
  }
}

void NdsSequence::require_expanding(const std::string& operation) const {
  if (!is_expanding()) {
    std::ostringstream os;
    os << operation << " needs a uniformly expanding sequence, uniform lambda = " << lambda_;
    throw Error(ErrorKind::precond_violated, os.str());
  }
}

double NdsSequence::compose_eval(std::size_t k, std::size_t n, double x) const noexcept {
  x = wrap(x);
  for (std::size_t i = 0; i < n; ++i) x = map_at(k + i).eval(x);
  return x;
}

double NdsSequence::compose_lift(std::size_t k, std::size_t n, double x) const noexcept {
  for (std::size_t i = 0; i < n; ++i) x = map_at(k + i).lift(x);
  return x;
}

double NdsSequence::log_jacobian_sum(std::size_t k, std::size_t n, double x) const noexcept {
  double s = 0.0;
  x = wrap(x);
  for (std::size_t i = 0; i < n; ++i) {
    const CircleMap& f = map_at(k + i);
    s += std::log(f.derivative(x));
    x = f.eval(x);
  }
  return s;
}

double NdsSequence::log_degree_sum(std::size_t k, std::size_t n) const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::log(static_cast<double>(map_at(k + i).degree()));
  return s;
}

NdsSequence NdsSequence::shifted(std::size_t k) const {
  std::vector<CircleMap> p;
  for (std::size_t i = k; i < prefix_.size(); ++i) p.push_back(prefix_[i]);
  return NdsSequence(std::move(p), tail_);
}

}  // namespace ndslab
