#include "ndslab/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ndslab/errors.hpp"
#include "ndslab/metrics.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

PotentialSequence::PotentialSequence(std::vector<PeriodicSamples> prefix, PeriodicSamples tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  require(tail_.size() > 0, "potential tail is empty");
  bound_ = tail_.max_abs();
  modulus_ = tail_.lipschitz();
  for (const auto& p : prefix_) {
    require(p.size() > 0, "potential member is empty");
    bound_ = std::max(bound_, p.max_abs());
    modulus_ = std::max(modulus_, p.lipschitz());
  }
  require(std::isfinite(bound_), "potential values must be finite");
}

PotentialSequence PotentialSequence::constant(double c, std::size_t grid) {
  return PotentialSequence({}, PeriodicSamples(std::vector<double>(grid, c)));
}

PotentialSequence PotentialSequence::neg_log_derivative(const NdsSequence& seq, std::size_t grid) {
  auto sample = [grid](const CircleMap& f) {
    return PeriodicSamples::sample(grid, [&](double x) { return -std::log(f.derivative(x)); });
  };
  std::vector<PeriodicSamples> prefix;
  for (const auto& f : seq.prefix()) prefix.push_back(sample(f));
  return PotentialSequence(std::move(prefix), sample(seq.tail()));
}

PotentialSequence PotentialSequence::shifted(double c) const {
  auto shift = [c](const PeriodicSamples& p) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (double& x : v) x += c;
    return PeriodicSamples(std::move(v));
  };
  std::vector<PeriodicSamples> prefix;
  for (const auto& p : prefix_) prefix.push_back(shift(p));
  return PotentialSequence(std::move(prefix), shift(tail_));
}

double birkhoff_sum(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n, double x) {
  double s = 0.0;
  x = wrap(x);
  for (std::size_t i = 0; i < n; ++i) {
    s += pot.value(i, x);
    x = seq.map_at(i).eval(x);
  }
  return s;
}

std::vector<double> birkhoff_weights(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n,
                                     std::size_t resolution) {
  std::vector<double> w(resolution);
  parallel_for(resolution, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) w[k] = birkhoff_sum(seq, pot, n, grid_point(k, resolution));
  });
  return w;
}

double log_sum_exp(const std::vector<double>& w, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i : idx) m = std::max(m, w[i]);
  double s = 0.0;
  for (std::size_t i : idx) s += std::exp(w[i] - m);
  return m + std::log(s);
}

namespace {

bool all_equal(const std::vector<double>& w) {
  return std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
}

// Equal weights visit candidates in index order, the fast path of the grid.
std::span<const double> ordering(const std::vector<double>& w) {
  if (all_equal(w)) return {};
  return w;
}

WeightedSet separated_on(const BowenGrid& grid, const std::vector<double>& w) {
  WeightedSet out;
  out.points = grid.separated_set(ordering(w));
  out.log_value = log_sum_exp(w, out.points);
  return out;
}

WeightedSet spanning_on(const BowenGrid& grid, const std::vector<double>& w, const WeightedSet& sep) {
  if (!grid.arc_regime()) return sep;
  WeightedSet cover;
  cover.points = grid.spanning_set(ordering(w));
  cover.log_value = log_sum_exp(w, cover.points);
  return cover.log_value <= sep.log_value ? cover : sep;
}

}  // namespace

WeightedSet pressure_separated(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n, double eps,
                               std::size_t resolution) {
  const BowenGrid grid(seq, n, eps, resolution);
  return separated_on(grid, birkhoff_weights(seq, pot, n, resolution));
}

WeightedSet pressure_spanning(const NdsSequence& seq, const PotentialSequence& pot, std::size_t n, double eps,
                              std::size_t resolution) {
  const BowenGrid grid(seq, n, eps, resolution);
  const auto w = birkhoff_weights(seq, pot, n, resolution);
  return spanning_on(grid, w, separated_on(grid, w));
}

PressureTable top_pressure_estimate(const NdsSequence& seq, const PotentialSequence& pot,
                                    const std::vector<double>& eps_list, std::size_t n_max,
                                    std::size_t resolution, bool with_spanning, double window_fraction) {
  require(!eps_list.empty(), "need at least one radius");
  require(n_max >= 1, "horizon must be positive");
  PressureTable table;
  table.window_end = n_max;
  table.window_begin = window_start(n_max, window_fraction);
  const std::size_t m = eps_list.size();
  table.rows.resize(m * n_max);
  std::vector<std::vector<double>> logs(m), rates(m);
  // Orbit points and running Birkhoff sums, advanced one step per horizon.
  std::vector<double> orbit(resolution);
  std::vector<double> weights(resolution, 0.0);
  for (std::size_t k = 0; k < resolution; ++k) orbit[k] = grid_point(k, resolution);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const CircleMap& f = seq.map_at(n - 1);
    const PeriodicSamples& phi = pot.at(n - 1);
    parallel_for(resolution, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        weights[k] += phi.at(orbit[k]);
        orbit[k] = f.eval(orbit[k]);
      }
    });
    for (std::size_t e = 0; e < m; ++e) {
      const BowenGrid grid(seq, n, eps_list[e], resolution);
      PressureRow& row = table.rows[e * n_max + n - 1];
      row.n = n;
      row.eps = eps_list[e];
      const WeightedSet sep = separated_on(grid, weights);
      row.log_s = sep.log_value;
      row.log_r = with_spanning ? spanning_on(grid, weights, sep).log_value
                                : std::numeric_limits<double>::quiet_NaN();
      logs[e].push_back(row.log_s);
      rates[e].push_back(row.log_s / static_cast<double>(n));
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    PressureColumn c;
    c.eps = eps_list[e];
    c.secant_rate = secant_rate(logs[e], table.window_begin, table.window_end);
    c.window_max_rate = window_max(rates[e], table.window_begin, table.window_end);
    table.columns.push_back(c);
  }
  const auto smallest = std::min_element(eps_list.begin(), eps_list.end()) - eps_list.begin();
  table.headline = table.columns[static_cast<std::size_t>(smallest)].secant_rate;
  return table;
}

MetricPressure metric_pressure(const NdsSequence& seq, const PotentialSequence& pot, const GridDensity& mu,
                               const PartitionSequence& parts, std::size_t n_max, std::size_t cell_budget,
                               double window_fraction) {
  require(mu.min() > 0.0, "metric pressure needs a strictly positive density");
  MetricPressure out;
  out.entropy_trace = metric_entropy_estimate(seq, parts, mu, n_max, cell_budget, window_fraction);
  out.entropy = out.entropy_trace.estimate;
  const Evolution ev = evolve(seq, mu, n_max - 1);
  double running = 0.0;
  for (std::size_t i = 0; i < n_max; ++i) {
    const GridDensity& d = ev.densities[i];
    const PeriodicSamples& phi = pot.at(i);
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) s += phi.at(grid_point(k, d.size())) * d[k];
    running += s / static_cast<double>(d.size());
    out.potential_trace.push_back(running / static_cast<double>(i + 1));
  }
  out.potential_mean = window_min(out.potential_trace, out.entropy_trace.window_begin, out.entropy_trace.window_end);
  out.value = out.entropy + out.potential_mean;
  return out;
}

std::pair<NdsSequence, PotentialSequence> power_system(const NdsSequence& seq, const PotentialSequence& pot,
                                                       std::size_t k) {
  require(k >= 1, "power must be at least 1");
  if (k == 1) return {seq, pot};
  const std::size_t grid = pot.tail().size();
  const std::size_t longest = std::max(seq.prefix().size(), pot.prefix().size());
  const std::size_t blocks = (longest + k - 1) / k;

  auto block_map = [&](std::size_t start) {
    CircleMap m = seq.map_at(start);
    for (std::size_t j = 1; j < k; ++j) m = CircleMap::compose(m, seq.map_at(start + j));
    return m;
  };
  auto block_potential = [&](std::size_t start) {
    return PeriodicSamples::sample(grid, [&](double x) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        s += pot.value(start + j, x);
        x = seq.map_at(start + j).eval(x);
      }
      return s;
    });
  };

  std::vector<CircleMap> maps;
  std::vector<PeriodicSamples> pots;
  for (std::size_t m = 0; m < blocks; ++m) {
    maps.push_back(block_map(m * k));
    pots.push_back(block_potential(m * k));
  }
  return {NdsSequence(std::move(maps), block_map(blocks * k)),
          PotentialSequence(std::move(pots), block_potential(blocks * k))};
}

VariationalGap variational_gap(const NdsSequence& seq, const PotentialSequence& pot, const GridDensity& mu,
                               const PartitionSequence& parts, double eps, std::size_t n_max,
                               std::size_t resolution, std::size_t cell_budget) {
  VariationalGap g;
  g.top_pressure = top_pressure_estimate(seq, pot, {eps}, n_max, resolution, false).headline;
  g.metric_pressure = metric_pressure(seq, pot, mu, parts, n_max, cell_budget).value;
  g.gap = g.top_pressure - g.metric_pressure;
  return g;
}

}  // namespace ndslab
