#include "ndslab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ndslab/errors.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

GridDensity::GridDensity(std::vector<double> values) {
  const std::size_t n = values.size();
  require(n >= 128 && power_of_two(n), "density grid size must be a power of two >= 128, got " +
                                           std::to_string(n));
  for (double v : values) {
    require(std::isfinite(v) && v >= 0.0, "density values must be finite and nonnegative");
  }
  PeriodicSamples raw(values);
  const double mass = raw.mean();
  require(mass > 0.0, "density has zero mass");
  for (double& v : values) v /= mass;
  samples_ = PeriodicSamples(std::move(values));
}

GridDensity GridDensity::uniform(std::size_t n) { return GridDensity(std::vector<double>(n, 1.0)); }

TransferStep perron_frobenius(const CircleMap& map, const GridDensity& phi, double tol) {
  const std::size_t n = phi.size();
  const int d = map.degree();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = grid_point(i, n);
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        const double y = map.lift_inverse(x + j, tol);
        s += phi.at(y) / map.lift_derivative(y);
      }
      out[i] = s;
    }
  });
  const double mass = PeriodicSamples(out).mean();
  return TransferStep{GridDensity(std::move(out)), mass - 1.0};
}

Evolution evolve(const NdsSequence& seq, const GridDensity& phi, std::size_t n, double tol) {
  Evolution ev;
  ev.densities.reserve(n + 1);
  ev.densities.push_back(phi);
  for (std::size_t k = 0; k < n; ++k) {
    TransferStep step = perron_frobenius(seq.map_at(k), ev.densities.back(), tol);
    ev.mass_defects.push_back(step.mass_defect);
    ev.densities.push_back(std::move(step.density));
  }
  return ev;
}

double lipschitz_ratio_constant(const GridDensity& phi, double eps) {
  const std::size_t n = phi.size();
  require(eps > phi.spacing(), "ratio radius must exceed the grid spacing");
  if (phi.min() <= 0.0) {
    throw Error(ErrorKind::non_positive_density, "density has a nonpositive grid value");
  }
  // Pairs at offset k have distance k/n while k/n <= 1/2.
  const auto reach = std::min<std::size_t>(n / 2, static_cast<std::size_t>(std::ceil(eps * n)) - 1);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= reach; ++k) {
      const double dist = static_cast<double>(k) / static_cast<double>(n);
      if (!(dist < eps)) break;
      const double a = phi[i];
      const double b = phi[(i + k) % n];
      best = std::max(best, std::max(std::fabs(a / b - 1.0), std::fabs(b / a - 1.0)) / dist);
    }
  }
  return best;
}

GridDensity renormalize(const GridDensity& phi, double kappa) {
  if (!(kappa >= 0.0) || !(kappa < 2.0 * phi.min())) {
    std::ostringstream os;
    os << "kappa " << kappa << " must lie in [0, 2 min phi) = [0, " << 2.0 * phi.min() << ")";
    throw Error(ErrorKind::kappa_too_large, os.str());
  }
  std::vector<double> v(phi.values().begin(), phi.values().end());
  for (double& x : v) x = (x - 0.5 * kappa) / (1.0 - 0.5 * kappa);
  return GridDensity(std::move(v));
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  require(a.size() == b.size(), "densities live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

MemoryLossReport loss_of_memory(const NdsSequence& seq, const GridDensity& phi, const GridDensity& psi,
                                std::size_t n_max, double floor, double tol) {
  require(n_max >= 8, "loss-of-memory run needs n_max >= 8");
  require(phi.size() == psi.size(), "densities live on different grids");
  MemoryLossReport rep;
  GridDensity a = phi;
  GridDensity b = psi;
  rep.l1_trace.push_back(l1_distance(a, b));
  for (std::size_t k = 0; k < n_max; ++k) {
    a = perron_frobenius(seq.map_at(k), a, tol).density;
    b = perron_frobenius(seq.map_at(k), b, tol).density;
    rep.l1_trace.push_back(l1_distance(a, b));
  }
  for (std::size_t k = 1; k < rep.l1_trace.size(); ++k)
    if (rep.l1_trace[k] > rep.l1_trace[k - 1] + 1e-10) rep.monotone = false;

  rep.window_begin = 0;
  rep.window_end = 0;
  while (rep.window_end < rep.l1_trace.size() && rep.l1_trace[rep.window_end] > floor) ++rep.window_end;
  const std::size_t m = rep.window_end - rep.window_begin;
  if (m < 4) {
    rep.degenerate = true;
    rep.slope = std::numeric_limits<double>::quiet_NaN();
    rep.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    rep.r2 = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = rep.window_begin; k < rep.window_end; ++k) {
    const double x = static_cast<double>(k);
    const double y = std::log(rep.l1_trace[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double md = static_cast<double>(m);
  const double cov = sxy - sx * sy / md;
  const double vx = sxx - sx * sx / md;
  const double vy = syy - sy * sy / md;
  rep.degenerate = false;
  rep.slope = cov / vx;
  rep.fitted_rate = std::exp(rep.slope);
  rep.r2 = vy > 0.0 ? cov * cov / (vx * vy) : 1.0;
  return rep;
}

}  // namespace ndslab
