#include "ndslab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ndslab/circle.hpp"
#include "ndslab/errors.hpp"
#include "ndslab/metrics.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

IntervalPartition::IntervalPartition(std::vector<double> breakpoints) : breakpoints_(std::move(breakpoints)) {
  require(!breakpoints_.empty(), "a partition needs at least one breakpoint");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    require(b >= 0.0 && b < 1.0, "partition breakpoints must lie in [0,1)");
    if (i > 0) require(b > breakpoints_[i - 1], "partition breakpoints must be strictly increasing");
  }
}

IntervalPartition IntervalPartition::uniform(std::size_t m) {
  require(m >= 1, "a partition needs at least one cell");
  std::vector<double> b(m);
  for (std::size_t i = 0; i < m; ++i) b[i] = static_cast<double>(i) / static_cast<double>(m);
  return IntervalPartition(std::move(b));
}

std::pair<double, double> IntervalPartition::cell(std::size_t i) const noexcept {
  const double left = breakpoints_[i];
  const double right = i + 1 < breakpoints_.size() ? breakpoints_[i + 1] : breakpoints_[0] + 1.0;
  return {left, right};
}

double IntervalPartition::max_cell_length() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto [l, r] = cell(i);
    m = std::max(m, r - l);
  }
  return m;
}

namespace {

// f_0^{-i}(points): pull back through f_{i-1}, ..., f_0.
std::vector<double> pull_back(const NdsSequence& seq, std::vector<double> points, std::size_t i, double tol) {
  for (std::size_t step = i; step-- > 0;) {
    const CircleMap& f = seq.map_at(step);
    const int d = f.degree();
    std::vector<double> next;
    next.reserve(points.size() * static_cast<std::size_t>(d));
    for (double z : points)
      for (int k = 0; k < d; ++k) next.push_back(wrap(f.lift_inverse(z + k, tol)));
    points = std::move(next);
  }
  return points;
}

// Sorted breakpoints with near-duplicates (circle distance <= 1e-12) merged.
IntervalPartition merge_breakpoints(std::vector<double> points) {
  std::sort(points.begin(), points.end());
  std::vector<double> out;
  out.reserve(points.size());
  for (double p : points)
    if (out.empty() || p - out.back() > 1e-12) out.push_back(p);
  while (out.size() > 1 && out.back() + 1e-12 >= 1.0 + out.front()) out.pop_back();
  return IntervalPartition(std::move(out));
}

double breakpoint_bound(const NdsSequence& seq, const PartitionSequence& parts, std::size_t n) {
  double total = 0.0;
  double degrees = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += static_cast<double>(parts.at(i).cell_count()) * degrees;
    degrees *= seq.map_at(i).degree();
  }
  return total;
}

void check_budget(const NdsSequence& seq, const PartitionSequence& parts, std::size_t n, std::size_t budget) {
  const double bound = breakpoint_bound(seq, parts, n);
  if (bound > static_cast<double>(budget)) {
    std::ostringstream os;
    os << "joined partition at n=" << n << " may have " << bound << " cells, budget is " << budget;
    throw Error(ErrorKind::cell_blowup, os.str());
  }
}

}  // namespace

IntervalPartition joined_partition(const NdsSequence& seq, const PartitionSequence& parts, std::size_t n,
                                   std::size_t cell_budget, double tol) {
  require(n >= 1, "joined partition needs n >= 1");
  check_budget(seq, parts, n, cell_budget);
  std::vector<double> all;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pts = pull_back(seq, parts.at(i).breakpoints(), i, tol);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  return merge_breakpoints(std::move(all));
}

double partition_entropy(const GridDensity& mu, const IntervalPartition& part) {
  double h = 0.0;
  for (std::size_t i = 0; i < part.cell_count(); ++i) {
    const auto [l, r] = part.cell(i);
    const double m = mu.measure(l, r);
    if (m > 0.0) h -= m * std::log(m);
  }
  return h;
}

std::size_t window_start(std::size_t n_max, double fraction) {
  const auto span = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n_max)));
  return n_max > span ? std::max<std::size_t>(1, n_max - span) : 1;
}

double window_max(const std::vector<double>& values, std::size_t begin, std::size_t end) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t n = begin; n <= end; ++n) m = std::max(m, values.at(n - 1));
  return m;
}

double window_min(const std::vector<double>& values, std::size_t begin, std::size_t end) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = begin; n <= end; ++n) m = std::min(m, values.at(n - 1));
  return m;
}

double secant_rate(const std::vector<double>& log_counts, std::size_t begin, std::size_t end) {
  if (end <= begin) return log_counts.at(end - 1) / static_cast<double>(end);
  return (log_counts.at(end - 1) - log_counts.at(begin - 1)) / static_cast<double>(end - begin);
}

namespace {

Trace finish_max(std::vector<double> values, double fraction) {
  Trace t;
  t.window_end = values.size();
  t.window_begin = window_start(t.window_end, fraction);
  t.estimate = window_max(values, t.window_begin, t.window_end);
  t.values = std::move(values);
  return t;
}

// S(j, n) = log (f_0^n)'(x_j) at midpoint nodes, row-major by node.
std::vector<double> log_jacobian_table(const NdsSequence& seq, std::size_t n_max, std::size_t q) {
  std::vector<double> table(q * n_max);
  parallel_for(q, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      double x = (static_cast<double>(j) + 0.5) / static_cast<double>(q);
      double s = 0.0;
      for (std::size_t n = 0; n < n_max; ++n) {
        const CircleMap& f = seq.map_at(n);
        s += std::log(f.derivative(x));
        x = f.eval(x);
        table[j * n_max + n] = s;
      }
    }
  });
  return table;
}

}  // namespace

Trace metric_entropy_estimate(const NdsSequence& seq, const PartitionSequence& parts, const GridDensity& mu,
                              std::size_t n_max, std::size_t cell_budget, double window_fraction) {
  require(n_max >= 2, "metric entropy estimate needs n_max >= 2");
  std::vector<double> values;
  std::vector<double> all;
  for (std::size_t n = 1; n <= n_max; ++n) {
    check_budget(seq, parts, n, cell_budget);
    const auto pts = pull_back(seq, parts.at(n - 1).breakpoints(), n - 1, 1e-12);
    all.insert(all.end(), pts.begin(), pts.end());
    const IntervalPartition joined = merge_breakpoints(all);
    values.push_back(partition_entropy(mu, joined) / static_cast<double>(n));
  }
  return finish_max(std::move(values), window_fraction);
}

Trace metric_entropy_formula(const NdsSequence& seq, std::size_t n_max, std::size_t quad_points,
                             double window_fraction) {
  require(quad_points >= 128, "quadrature needs at least 128 points");
  require(n_max >= 1, "horizon must be positive");
  const auto table = log_jacobian_table(seq, n_max, quad_points);
  std::vector<double> values(n_max, 0.0);
  for (std::size_t j = 0; j < quad_points; ++j)
    for (std::size_t n = 0; n < n_max; ++n) values[n] += table[j * n_max + n];
  for (std::size_t n = 0; n < n_max; ++n)
    values[n] /= static_cast<double>(quad_points) * static_cast<double>(n + 1);
  return finish_max(std::move(values), window_fraction);
}

Trace top_entropy_formula(const NdsSequence& seq, std::size_t n_max, std::size_t quad_points,
                          double window_fraction) {
  require(quad_points >= 128, "quadrature needs at least 128 points");
  require(n_max >= 1, "horizon must be positive");
  const auto table = log_jacobian_table(seq, n_max, quad_points);
  std::vector<double> values(n_max, 0.0);
  for (std::size_t n = 0; n < n_max; ++n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < quad_points; ++j) m = std::max(m, table[j * n_max + n]);
    double s = 0.0;
    for (std::size_t j = 0; j < quad_points; ++j) s += std::exp(table[j * n_max + n] - m);
    values[n] = (m + std::log(s / static_cast<double>(quad_points))) / static_cast<double>(n + 1);
  }
  return finish_max(std::move(values), window_fraction);
}

EntropyTable top_entropy_separated(const NdsSequence& seq, const std::vector<double>& eps_list,
                                   std::size_t n_max, std::size_t resolution, bool with_spanning,
                                   double window_fraction) {
  require(!eps_list.empty(), "need at least one radius");
  require(n_max >= 1, "horizon must be positive");
  EntropyTable table;
  table.window_end = n_max;
  table.window_begin = window_start(n_max, window_fraction);
  std::vector<std::vector<std::size_t>> counts;
  for (double eps : eps_list) {
    std::vector<double> logs;
    std::vector<double> rates;
    std::vector<std::size_t> col;
    for (std::size_t n = 1; n <= n_max; ++n) {
      const BowenGrid grid(seq, n, eps, resolution);
      CountRow row;
      row.n = n;
      row.eps = eps;
      row.separated = grid.separated_set().size();
      if (with_spanning) row.spanning = std::min(row.separated, grid.spanning_set().size());
      const double dn = static_cast<double>(n);
      row.rate_separated = std::log(static_cast<double>(row.separated)) / dn;
      row.rate_spanning = with_spanning ? std::log(static_cast<double>(row.spanning)) / dn : 0.0;
      logs.push_back(std::log(static_cast<double>(row.separated)));
      rates.push_back(row.rate_separated);
      col.push_back(row.separated);
      table.rows.push_back(row);
    }
    CountColumn c;
    c.eps = eps;
    c.secant_rate = secant_rate(logs, table.window_begin, table.window_end);
    c.window_max_rate = window_max(rates, table.window_begin, table.window_end);
    table.columns.push_back(c);
    counts.push_back(std::move(col));
  }
  // Counts must not grow with the radius.
  for (std::size_t a = 0; a < eps_list.size(); ++a)
    for (std::size_t b = 0; b < eps_list.size(); ++b)
      if (eps_list[a] < eps_list[b])
        for (std::size_t n = 0; n < n_max; ++n)
          if (counts[a][n] < counts[b][n]) table.monotone_in_eps = false;
  const auto smallest = std::min_element(eps_list.begin(), eps_list.end()) - eps_list.begin();
  table.headline = table.columns[static_cast<std::size_t>(smallest)].secant_rate;
  return table;
}

}  // namespace ndslab
