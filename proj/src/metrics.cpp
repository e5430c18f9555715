#include "ndslab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ndslab/circle.hpp"
#include "ndslab/errors.hpp"

namespace ndslab {

namespace {

// Representative of t modulo 1 in [-1/2, 1/2].
double centered(double t) noexcept { return t - std::nearbyint(t); }

class Bitset {
 public:
  explicit Bitset(std::size_t n) : words_((n + 63) / 64, 0) {}
  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace

double bowen_distance(const NdsSequence& seq, std::size_t i, std::size_t n, double x, double y) {
  x = wrap(x);
  y = wrap(y);
  double m = arc_distance(x, y);
  for (std::size_t j = 0; j < n; ++j) {
    const CircleMap& f = seq.map_at(i + j);
    x = f.eval(x);
    y = f.eval(y);
    m = std::max(m, arc_distance(x, y));
  }
  return m;
}

double bowen_offset_distance(const NdsSequence& seq, std::size_t i, std::size_t n, double x,
                             double t, double cap) {
  double xj = wrap(x);
  double diff = centered(t);
  double m = std::fabs(diff);
  for (std::size_t j = 0; j < n && m < cap; ++j) {
    const CircleMap& f = seq.map_at(i + j);
    const double fx = f.lift(xj);
    diff = centered(f.lift(xj + diff) - fx);
    xj = wrap(fx);
    m = std::max(m, std::fabs(diff));
  }
  return m;
}

double arc_radius(const NdsSequence& seq) { return 0.5 / seq.uniform_gamma(); }

BowenBallArc bowen_ball(const NdsSequence& seq, std::size_t i, std::size_t n, double x, double eps) {
  require(eps > 0.0, "Bowen ball radius must be positive");
  const double limit = arc_radius(seq);
  if (!(eps < limit)) {
    std::ostringstream os;
    os << "radius " << eps << " is not below the even-covering bound " << limit;
    throw Error(ErrorKind::radius_too_large, os.str());
  }
  x = wrap(x);
  auto reach = [&](double sign) {
    double lo = 0.0;
    double hi = eps;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (bowen_offset_distance(seq, i, n, x, sign * mid, eps) < eps) lo = mid;
      else hi = mid;
    }
    return lo;
  };
  const double r = reach(1.0);
  const double l = reach(-1.0);
  BowenBallArc ball;
  ball.center = x;
  ball.order = n;
  ball.radius = eps;
  ball.left = wrap(x - l);
  ball.right = wrap(x + r);
  ball.measure = l + r;
  return ball;
}

BowenGrid::BowenGrid(const NdsSequence& seq, std::size_t n, double eps, std::size_t resolution)
    : seq_(seq), n_(n), eps_(eps), res_(resolution) {
  require(eps > 0.0, "radius must be positive");
  require(resolution >= 2, "grid resolution must be at least 2");
  require(static_cast<double>(resolution) * eps >= 10.0,
          "grid resolution must be at least 10 / eps");
  arcs_ = eps < arc_radius(seq_);
  max_offset_ = std::min<std::size_t>(
      res_ / 2, static_cast<std::size_t>(std::ceil(eps_ * static_cast<double>(res_))));
}

double BowenGrid::point(std::size_t k) const noexcept {
  return static_cast<double>(k % res_) / static_cast<double>(res_);
}

bool BowenGrid::close(std::size_t a, std::size_t b) const {
  a %= res_;
  b %= res_;
  if (a == b) return true;
  const std::size_t fwd = (b + res_ - a) % res_;
  const std::size_t back = res_ - fwd;
  std::size_t base = a;
  std::size_t off = fwd;
  if (back < fwd || (back == fwd && b < a)) {
    base = b;
    off = back;
  }
  const double t = static_cast<double>(off) / static_cast<double>(res_);
  if (t >= eps_) return false;
  return bowen_offset_distance(seq_, 0, n_, point(base), t, eps_) < eps_;
}

namespace {

// Largest m in [0, top] with pred(m), for pred true at 0 and monotone
// (true then false).  Gallops from `hint`.
template <class Pred>
std::size_t largest_true(Pred&& pred, std::size_t top, std::size_t hint) {
  hint = std::clamp<std::size_t>(hint, 1, std::max<std::size_t>(top, 1));
  std::size_t lo = 0;
  std::size_t hi = top + 1;
  if (hint > top) return 0;
  if (pred(hint)) {
    lo = hint;
    std::size_t step = 1;
    while (lo + step <= top && pred(lo + step)) {
      lo += step;
      step *= 2;
    }
    hi = std::min(lo + step, top + 1);
  } else {
    hi = hint;
    std::size_t step = 1;
    while (hi > step && !pred(hi - step)) {
      hi -= step;
      step *= 2;
    }
    lo = hi > step ? hi - step : 0;
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

std::size_t BowenGrid::reach_right(std::size_t k, std::size_t hint) const {
  k %= res_;
  return largest_true([&](std::size_t j) { return close(k, k + j); }, max_offset_, hint);
}

std::size_t BowenGrid::reach_left(std::size_t k, std::size_t hint) const {
  k %= res_;
  return largest_true([&](std::size_t j) { return close((k + res_ - j) % res_, k); }, max_offset_,
                      hint);
}

std::vector<std::size_t> BowenGrid::separated_set(std::span<const double> weights) const {
  require(weights.empty() || weights.size() == res_, "weight vector must match the grid");
  std::vector<std::size_t> accepted;
  if (weights.empty() && arcs_) {
    // Index order: everything between an accepted point and the end of its
    // ball is rejected, and the next point is the first one past it.  Only
    // the first point's ball reaches back across 0.
    const std::size_t stop = res_ - reach_left(0);
    std::size_t hint = 1;
    std::size_t p = 0;
    while (p < stop) {
      accepted.push_back(p);
      hint = reach_right(p, hint);
      p += hint + 1;
    }
    return accepted;
  }
  std::vector<std::size_t> order;
  if (!weights.empty()) {
    order.resize(res_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  }
  Bitset blocked(res_);
  std::size_t hint_r = 1;
  std::size_t hint_l = 1;
  for (std::size_t idx = 0; idx < res_; ++idx) {
    const std::size_t p = order.empty() ? idx : order[idx];
    if (blocked.test(p)) continue;
    accepted.push_back(p);
    if (arcs_) {
      hint_r = reach_right(p, hint_r);
      hint_l = reach_left(p, hint_l);
      for (std::size_t j = 0; j <= hint_r + hint_l; ++j) blocked.set((p + res_ - hint_l + j) % res_);
    } else {
      blocked.set(p);
      for (std::size_t j = 1; j <= max_offset_; ++j) {
        const std::size_t q1 = (p + j) % res_;
        const std::size_t q2 = (p + res_ - j) % res_;
        if (!blocked.test(q1) && close(p, q1)) blocked.set(q1);
        if (!blocked.test(q2) && close(q2, p)) blocked.set(q2);
      }
    }
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

std::vector<std::size_t> BowenGrid::spanning_set(std::span<const double> weights) const {
  require(weights.empty() || weights.size() == res_, "weight vector must match the grid");
  if (!arcs_) return separated_set(weights);
  auto weight = [&](std::size_t c) { return weights.empty() ? 0.0 : weights[c]; };
  const auto res = static_cast<long long>(res_);
  auto idx = [&](long long c) { return static_cast<std::size_t>(((c % res) + res) % res); };
  std::size_t hint = 1;
  auto coverage_end = [&](long long c) {
    hint = reach_right(idx(c), hint);
    return c + static_cast<long long>(hint);
  };

  std::vector<std::size_t> centers;
  long long p = 0;
  long long stop = res;
  bool first = true;
  while (p < stop) {
    const long long lowest = p - static_cast<long long>(reach_left(idx(p), hint));
    const long long cmax = coverage_end(p);
    const long long rmax = coverage_end(cmax);
    long long best = cmax;
    for (long long c = cmax - 1; c >= lowest && coverage_end(c) == rmax; --c)
      if (weight(idx(c)) < weight(idx(best))) best = c;
    centers.push_back(idx(best));
    if (first) {
      stop = std::min(stop, best - static_cast<long long>(reach_left(idx(best), hint)) + res);
      first = false;
    }
    p = rmax + 1;
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  return centers;
}

std::size_t count_separated(const NdsSequence& seq, std::size_t n, double eps, std::size_t resolution) {
  return BowenGrid(seq, n, eps, resolution).separated_set().size();
}

std::size_t count_spanning(const NdsSequence& seq, std::size_t n, double eps, std::size_t resolution) {
  const BowenGrid grid(seq, n, eps, resolution);
  const std::size_t cover = grid.spanning_set().size();
  if (!grid.arc_regime()) return cover;
  return std::min(cover, grid.separated_set().size());
}

double distortion_constant(const NdsSequence& seq) {
  const double lambda = seq.uniform_lambda();
  if (!(lambda > 1.0)) return std::numeric_limits<double>::infinity();
  return seq.uniform_gamma() / (lambda - 1.0);
}

double distortion_ratio(const NdsSequence& seq, std::size_t n, double x, double y, double radius) {
  if (radius < 0.0) radius = arc_radius(seq);
  if (n >= 1) {
    const double d = bowen_distance(seq, 0, n - 1, x, y);
    if (!(d < radius)) {
      std::ostringstream os;
      os << "Bowen distance d_{0," << n - 1 << "} = " << d << " is not below " << radius;
      throw Error(ErrorKind::precond_violated, os.str());
    }
  }
  return std::exp(seq.log_jacobian_sum(n, x) - seq.log_jacobian_sum(n, y));
}

VolumeReport volume_lemma_check(const NdsSequence& seq, double eps, std::size_t n_max, std::size_t samples) {
  require(samples >= 1, "volume check needs at least one sample");
  VolumeReport rep;
  rep.eps = eps;
  rep.min_product = std::numeric_limits<double>::infinity();
  rep.max_product = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    VolumeRow row{n, std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t j = 0; j < samples; ++j) {
      const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(samples);
      const BowenBallArc ball = bowen_ball(seq, 0, n, x, eps);
      const double product = ball.measure * std::exp(seq.log_jacobian_sum(n, x));
      row.product_min = std::min(row.product_min, product);
      row.product_max = std::max(row.product_max, product);
    }
    rep.min_product = std::min(rep.min_product, row.product_min);
    rep.max_product = std::max(rep.max_product, row.product_max);
    rep.rows.push_back(row);
  }
  rep.ratio = rep.max_product / rep.min_product;
  rep.ratio_bound = std::exp(2.0 * distortion_constant(seq) * eps);
  return rep;
}

}  // namespace ndslab
