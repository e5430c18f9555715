#include "ndslab/circle.hpp"

#include "ndslab/errors.hpp"

namespace ndslab {

PeriodicSamples::PeriodicSamples(std::vector<double> values) : values_(std::move(values)) {
  require(!values_.empty(), "periodic samples need at least one node");
  const std::size_t n = values_.size();
  const double h = 1.0 / static_cast<double>(n);
  cumulative_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = values_[(i + 1) % n];
    cumulative_[i + 1] = cumulative_[i] + 0.5 * h * (values_[i] + next);
  }
  total_ = cumulative_[n];
}

double PeriodicSamples::at(double x) const noexcept {
  const std::size_t n = values_.size();
  const double t = wrap(x) * static_cast<double>(n);
  auto i = static_cast<std::size_t>(t);
  if (i >= n) i = n - 1;
  const double s = t - static_cast<double>(i);
  const double a = values_[i];
  const double b = values_[(i + 1) % n];
  return a + s * (b - a);
}

double PeriodicSamples::min() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

double PeriodicSamples::max() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

double PeriodicSamples::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double PeriodicSamples::lipschitz() const noexcept {
  const std::size_t n = values_.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(values_[(i + 1) % n] - values_[i]));
  return m * static_cast<double>(n);
}

double PeriodicSamples::primitive(double t) const noexcept {
  const std::size_t n = values_.size();
  const double whole = std::floor(t);
  const double u = (t - whole) * static_cast<double>(n);
  auto i = static_cast<std::size_t>(u);
  if (i >= n) i = n - 1;
  const double tau = u - static_cast<double>(i);
  const double h = 1.0 / static_cast<double>(n);
  const double a = values_[i];
  const double b = values_[(i + 1) % n];
  const double partial = h * (tau * a + 0.5 * tau * tau * (b - a));
  return whole * total_ + cumulative_[i] + partial;
}

double PeriodicSamples::integral(double a, double b) const noexcept {
  return primitive(b) - primitive(a);
}

}  // namespace ndslab
