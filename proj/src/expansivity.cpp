#include "ndslab/expansivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ndslab/circle.hpp"
#include "ndslab/entropy.hpp"
#include "ndslab/errors.hpp"
#include "ndslab/metrics.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

std::vector<double> uniform_net(std::size_t size) {
  require(size >= 2, "a net needs at least two points");
  std::vector<double> net(size);
  for (std::size_t a = 0; a < size; ++a) net[a] = grid_point(a, size);
  return net;
}

SueResult sue_horizon(const NdsSequence& seq, double delta, double eps, std::size_t n_max,
                      std::size_t time_window, std::size_t net_size) {
  require(eps > 0.0 && eps < delta && delta <= 0.5, "need 0 < eps < delta <= 1/2");
  const std::vector<double> net = uniform_net(net_size);
  // From the end of the prefix on every base time sees the same maps.
  const std::size_t last = std::min(time_window, seq.prefix().size());
  SueResult out;
  std::size_t horizon = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    for (std::size_t a = 0; a < net_size; ++a) {
      for (std::size_t b = a + 1; b < net_size; ++b) {
        const double d0 = arc_distance(net[a], net[b]);
        if (d0 < eps || d0 >= delta) continue;
        // First order m with d_{i,m} >= delta; the implication needs N >= m.
        double x = net[a], y = net[b], m = d0;
        std::size_t order = 0;
        while (m < delta && order < n_max) {
          const CircleMap& f = seq.map_at(i + order);
          x = f.eval(x);
          y = f.eval(y);
          m = std::max(m, arc_distance(x, y));
          ++order;
        }
        if (m < delta) {
          out.witness = SueWitness{i, net[a], net[b], d0, bowen_distance(seq, i, n_max, net[a], net[b])};
          return out;
        }
        horizon = std::max(horizon, order);
      }
    }
  }
  out.ok = true;
  out.horizon = horizon;
  return out;
}

ExpansivityWitness time0_witness(const NdsSequence& seq, std::size_t n) {
  require(n >= 1, "witness order must be positive");
  ExpansivityWitness w;
  w.n = n;
  double y = 1.0;
  for (std::size_t j = n; j-- > 0;) y = seq.map_at(j).lift_inverse(y, 1e-15);
  w.x = 0.0;
  w.y = y;
  w.distance = arc_distance(w.x, w.y);
  double x = w.x, z = w.y;
  for (std::size_t j = 0; j < n; ++j) {
    w.max_orbit_distance = std::max(w.max_orbit_distance, arc_distance(x, z));
    x = seq.map_at(j).eval(x);
    z = seq.map_at(j).eval(z);
  }
  w.collision_residual = arc_distance(x, z);
  return w;
}

NestedRelations::NestedRelations(std::size_t net_size, std::size_t depth)
    : size_(net_size), depth_(depth), level_(net_size * net_size, 0) {
  require(depth <= 255, "relation depth is limited to 255 levels");
  for (std::size_t a = 0; a < size_; ++a) level_[a * size_ + a] = static_cast<std::uint8_t>(depth_);
}

void NestedRelations::set_level(std::size_t a, std::size_t b, std::size_t k) {
  require(k <= depth_, "level exceeds the relation depth");
  level_[a * size_ + b] = static_cast<std::uint8_t>(k);
  level_[b * size_ + a] = static_cast<std::uint8_t>(k);
}

std::size_t NestedRelations::off_diagonal(std::size_t k) const noexcept {
  std::size_t c = 0;
  for (std::size_t a = 0; a < size_; ++a)
    for (std::size_t b = 0; b < size_; ++b)
      if (a != b && level(a, b) >= k) ++c;
  return c;
}

NestedRelations build_neighborhoods(const NdsSequence& seq, std::size_t n, double delta, std::size_t depth,
                                    const std::vector<double>& net, bool require_separation) {
  require(delta > 0.0 && delta <= 0.5, "need 0 < delta <= 1/2");
  require(net.size() >= 2, "a net needs at least two points");
  for (std::size_t a = 0; a + 1 < net.size(); ++a)
    require(net[a] < net[a + 1] && net[a] >= 0.0 && net[a + 1] < 1.0, "net points must be sorted and distinct in [0,1)");
  const std::size_t m = net.size();
  NestedRelations rel(m, depth);
  std::vector<std::uint8_t> levels(m * m, static_cast<std::uint8_t>(depth));
  parallel_for(m * m, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t flat = lo; flat < hi; ++flat) {
      const std::size_t a = flat / m, b = flat % m;
      if (b <= a) continue;
      double x = net[a], y = net[b], d = arc_distance(x, y);
      std::size_t k = 0;
      // Deepest k <= depth with d_{n,k} < delta; level 0 holds for every pair.
      while (k < depth) {
        const CircleMap& f = seq.map_at(n + k);
        x = f.eval(x);
        y = f.eval(y);
        d = std::max(d, arc_distance(x, y));
        if (!(d < delta)) break;
        ++k;
      }
      levels[flat] = static_cast<std::uint8_t>(k);
    }
  });
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) rel.set_level(a, b, levels[a * m + b]);
  if (require_separation && depth > 0) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        if (rel.level(a, b) == depth) {
          std::ostringstream os;
          os << "V_" << depth << " at base time " << n << " still contains the pair (" << net[a] << ", " << net[b]
             << ")";
          throw Error(ErrorKind::depth_insufficient, os.str());
        }
  }
  return rel;
}

NestedRelations frink_levels(const NestedRelations& v, std::size_t n_step, std::size_t depth) {
  require(n_step >= 1, "step N must be at least 1");
  require(depth >= 1, "Frink depth must be at least 1");
  require(v.depth() >= (depth - 1) * n_step, "neighborhoods are too shallow for the requested Frink depth");
  const std::size_t m = v.size();
  NestedRelations u(m, depth);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      u.set_level(a, b, std::min(depth, v.level(a, b) / n_step + 1));
  return u;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitRows {
  std::size_t words;
  std::vector<Bits> rows;
  bool test(std::size_t a, std::size_t b) const { return (rows[a][b / 64] >> (b % 64)) & 1U; }
};

BitRows level_rows(const NestedRelations& u, std::size_t k) {
  const std::size_t m = u.size();
  BitRows r{(m + 63) / 64, {}};
  r.rows.assign(m, Bits(r.words, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (u.contains(k, a, b)) r.rows[a][b / 64] |= std::uint64_t{1} << (b % 64);
  return r;
}

BitRows compose(const BitRows& left, const BitRows& right) {
  BitRows out{left.words, std::vector<Bits>(left.rows.size(), Bits(left.words, 0))};
  const std::size_t m = left.rows.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (left.test(a, b))
        for (std::size_t w = 0; w < left.words; ++w) out.rows[a][w] |= right.rows[b][w];
  return out;
}

}  // namespace

std::optional<CompositionViolation> triple_composition_violation(const NestedRelations& u) {
  const std::size_t m = u.size();
  for (std::size_t k = 2; k <= u.depth(); ++k) {
    const BitRows uk = level_rows(u, k);
    const BitRows two = compose(uk, uk);
    const BitRows three = compose(two, uk);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t d = 0; d < m; ++d) {
        if (!three.test(a, d) || u.contains(k - 1, a, d)) continue;
        for (std::size_t b = 0; b < m; ++b) {
          if (!uk.test(a, b)) continue;
          for (std::size_t c = 0; c < m; ++c)
            if (uk.test(b, c) && uk.test(c, d)) return CompositionViolation{k, a, b, c, d};
        }
      }
    }
  }
  return std::nullopt;
}

NetMatrix frink_metric(const NestedRelations& u) {
  if (const auto v = triple_composition_violation(u)) {
    std::ostringstream os;
    os << "U_" << v->level << " o U_" << v->level << " o U_" << v->level << " is not inside U_" << v->level - 1
       << ": chain " << v->a << " - " << v->b << " - " << v->c << " - " << v->d;
    throw Error(ErrorKind::hypothesis_violated, os.str());
  }
  const std::size_t m = u.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (u.level(a, b) >= u.depth()) {
        std::ostringstream os;
        os << "U_" << u.depth() << " contains the off-diagonal pair (" << a << ", " << b << ")";
        throw Error(ErrorKind::depth_insufficient, os.str());
      }
  NetMatrix rho(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      rho(a, b) = a == b ? 0.0 : std::ldexp(1.0, -static_cast<int>(u.level(a, b)) - 1);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t a = 0; a < m; ++a) {
      const double ak = rho(a, k);
      for (std::size_t b = 0; b < m; ++b) rho(a, b) = std::min(rho(a, b), ak + rho(k, b));
    }
  return rho;
}

SandwichReport check_sandwich(const NestedRelations& u, const NetMatrix& rho) {
  require(u.size() == rho.size(), "relation and metric sizes differ");
  SandwichReport rep;
  const std::size_t m = u.size();
  for (std::size_t k = 1; k <= u.depth(); ++k) {
    const double bound = std::ldexp(1.0, -static_cast<int>(k));
    bool ok = true;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        if (u.contains(k, a, b) && !(rho(a, b) < bound)) ok = false;
        if (rho(a, b) < bound && !u.contains(k - 1, a, b)) ok = false;
      }
    rep.per_level.push_back(ok);
    rep.holds = rep.holds && ok;
    rep.checked_pairs += m * m;
  }
  return rep;
}

MetricAxioms check_metric(const NetMatrix& d) {
  MetricAxioms ax;
  const std::size_t m = d.size();
  for (std::size_t a = 0; a < m; ++a) {
    if (d(a, a) != 0.0) ax.separates = false;
    for (std::size_t b = 0; b < m; ++b) {
      if (d(a, b) != d(b, a)) ax.symmetric = false;
      if (a != b && !(d(a, b) > 0.0)) ax.separates = false;
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t b = 0; b < m; ++b) {
        const double excess = d(a, b) - d(a, c) - d(c, b);
        ax.worst_triangle_excess = std::max(ax.worst_triangle_excess, excess);
      }
  ax.triangle = ax.worst_triangle_excess <= 1e-12;
  return ax;
}

std::size_t project_to_net(double x, std::size_t net_size) noexcept {
  const double s = wrap(x) * static_cast<double>(net_size);
  return static_cast<std::size_t>(std::llround(s)) % net_size;
}

NetMatrix adapted_metric(const NdsSequence& seq, std::size_t n, const std::vector<NetMatrix>& rhos,
                         std::size_t n_step) {
  require(n_step >= 1, "adapted metric needs N >= 1 (at least 3 terms)");
  const std::size_t terms = 3 * n_step;
  require(rhos.size() >= terms, "adapted metric needs rho_{n+i} for i < 3N");
  const std::size_t m = rhos.front().size();
  for (const auto& r : rhos) require(r.size() == m, "Frink metrics live on different nets");
  const double mu = std::exp2(1.0 / static_cast<double>(terms));
  std::vector<std::size_t> idx(m);
  for (std::size_t a = 0; a < m; ++a) idx[a] = a;
  NetMatrix out(m);
  double scale = 1.0;
  for (std::size_t i = 0; i < terms; ++i) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) out(a, b) += scale * rhos[i](idx[a], idx[b]);
    const CircleMap& f = seq.map_at(n + i);
    for (auto& p : idx) p = project_to_net(f.eval(grid_point(p, m)), m);
    scale /= mu;
  }
  return out;
}

double projection_error(const CircleMap& f, std::size_t net_size) {
  double e = 0.0;
  for (std::size_t a = 0; a < net_size; ++a) {
    const double y = f.eval(grid_point(a, net_size));
    e = std::max(e, arc_distance(y, grid_point(project_to_net(y, net_size), net_size)));
  }
  return e;
}

ExpansionReport expansion_check(const NetMatrix& rho_prime_n, const NetMatrix& rho_prime_next, const CircleMap& f_n,
                                const NetMatrix& gate, double threshold, double mu, double slack) {
  const std::size_t m = rho_prime_n.size();
  require(rho_prime_next.size() == m && gate.size() == m, "expansion check matrices differ in size");
  require(threshold > 0.0 && mu > 1.0 && slack >= 0.0, "need threshold > 0, mu > 1, slack >= 0");
  ExpansionReport rep;
  rep.mu = mu;
  rep.slack = slack;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> image(m);
  for (std::size_t a = 0; a < m; ++a) image[a] = project_to_net(f_n.eval(grid_point(a, m)), m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double r = rho_prime_n(a, b);
      if (r > 0.0 && r < threshold) ++rep.pairs_below_threshold_adapted;
      if (!(gate(a, b) > 0.0 && gate(a, b) < threshold)) continue;
      ++rep.pairs_checked;
      const double s = rho_prime_next(image[a], image[b]);
      rep.min_ratio = std::min(rep.min_ratio, s / r);
      if (s < mu * r - 2.0 * slack - 1e-12) ++rep.violations;
    }
  return rep;
}

FrinkPipelineResult frink_pipeline(const NdsSequence& seq, std::size_t n, std::size_t net_size, double delta,
                                   std::size_t depth, std::size_t sue_max, double threshold) {
  require(depth >= 1, "Frink depth must be at least 1");
  FrinkPipelineResult out;
  out.net_size = net_size;
  out.depth = depth;
  out.delta = delta;
  const SueResult sue = sue_horizon(seq, delta, delta / 3.0, sue_max, n + 3 * sue_max + 1, net_size);
  if (!sue.ok) {
    std::ostringstream os;
    os << "no strong uniform expansivity step up to " << sue_max << ": pair (" << sue.witness->x << ", "
       << sue.witness->y << ") at base time " << sue.witness->time << " stays delta-close";
    throw Error(ErrorKind::hypothesis_violated, os.str());
  }
  out.n_step = std::max<std::size_t>(1, sue.horizon);
  const std::size_t terms = 3 * out.n_step;
  out.mu = std::exp2(1.0 / static_cast<double>(terms));
  const std::vector<double> net = uniform_net(net_size);

  std::vector<NetMatrix> rhos;
  out.sandwich.holds = true;
  // Base times past the prefix all see the tail, so their metric is shared.
  const std::size_t stationary = std::max(n, seq.prefix().size());
  for (std::size_t t = n; t <= n + terms; ++t) {
    if (t > stationary) {
      rhos.push_back(rhos.back());
      continue;
    }
    const NestedRelations v = build_neighborhoods(seq, t, delta, (depth - 1) * out.n_step, net, false);
    NestedRelations u = frink_levels(v, out.n_step, depth);
    NetMatrix rho = frink_metric(u);
    const SandwichReport s = check_sandwich(u, rho);
    if (t == n) {
      out.sandwich = s;
      out.u = std::move(u);
      out.rho = rho;
    } else {
      out.sandwich.holds = out.sandwich.holds && s.holds;
    }
    rhos.push_back(std::move(rho));
  }
  out.rho_prime = adapted_metric(seq, n, {rhos.begin(), rhos.begin() + static_cast<std::ptrdiff_t>(terms)},
                                 out.n_step);
  out.rho_prime_next = adapted_metric(seq, n + 1, {rhos.begin() + 1, rhos.end()}, out.n_step);
  out.rho_axioms = check_metric(out.rho);
  out.rho_prime_axioms = check_metric(out.rho_prime);

  // Off-net images move by under half a spacing; bound that in rho' by the
  // largest distance between neighbouring net points.
  double slack = 0.0;
  if (projection_error(seq.map_at(n), net_size) > 0.0)
    for (std::size_t a = 0; a < net_size; ++a)
      slack = std::max(slack, out.rho_prime_next(a, (a + 1) % net_size));
  out.expansion = expansion_check(out.rho_prime, out.rho_prime_next, seq.map_at(n), out.rho, threshold, out.mu, slack);
  return out;
}

std::vector<std::size_t> uniform_total_boundedness(double eps, std::size_t times) {
  require(eps > 0.0, "cover radius must be positive");
  const auto balls = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / (2.0 * eps) - 1e-12)));
  return std::vector<std::size_t>(times, balls);
}

double generator_entropy(const NdsSequence& seq, double delta, std::size_t n_max) {
  require(delta > 0.0 && delta <= 1.0, "cover radius must lie in (0, 1]");
  require(n_max >= 2, "generator entropy needs n_max >= 2");
  const auto cells = static_cast<std::size_t>(std::ceil(1.0 / delta - 1e-12));
  const auto parts = PartitionSequence::constant(IntervalPartition::uniform(cells));
  std::vector<double> logs;
  for (std::size_t n = 1; n <= n_max; ++n)
    logs.push_back(std::log(static_cast<double>(joined_partition(seq, parts, n).cell_count())));
  return secant_rate(logs, window_start(n_max), n_max);
}

}  // namespace ndslab
