#include <doctest.h>

#include <cmath>
#include <vector>

#include "gen.hpp"
#include "ndslab/circle.hpp"
#include "ndslab/errors.hpp"
#include "ndslab/metrics.hpp"

using namespace ndslab;

namespace {

// Bowen distance by explicit iteration of the reduced maps.
double brute_bowen(const NdsSequence& seq, std::size_t i, std::size_t n, double x, double y) {
  double m = arc_distance(x, y);
  for (std::size_t j = 0; j < n; ++j) {
    x = seq.map_at(i + j).eval(x);
    y = seq.map_at(i + j).eval(y);
    m = std::max(m, arc_distance(x, y));
  }
  return m;
}

const NdsSequence doubling = NdsSequence::constant(CircleMap::linear(2));

}  // namespace

TEST_CASE("Bowen distance matches direct iteration and is monotone in n") {
  gen::Source src(31);
  for (int t = 0; t < 500; ++t) {
    const auto seq = src.sequence(5);
    const std::size_t i = src.index(3);
    const double x = src.point(), y = src.point();
    double prev = 0.0;
    for (std::size_t n = 0; n <= 6; ++n) {
      const double d = bowen_distance(seq, i, n, x, y);
      CHECK(d == doctest::Approx(brute_bowen(seq, i, n, x, y)).epsilon(1e-9));
      CHECK(d >= prev);
      CHECK(d == doctest::Approx(bowen_distance(seq, i, n, y, x)));
      prev = d;
    }
  }
}

TEST_CASE("Bowen distance satisfies the triangle inequality on random triples") {
  gen::Source src(32);
  const auto seq = src.sequence(8);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = src.index(9);
    const double x = src.point(), y = src.point(), z = src.point();
    CHECK(bowen_distance(seq, 0, n, x, z) <= bowen_distance(seq, 0, n, x, y) + bowen_distance(seq, 0, n, y, z) + 1e-12);
  }
}

TEST_CASE("offset distance agrees with the Bowen distance below the arc radius") {
  gen::Source src(33);
  for (int t = 0; t < 500; ++t) {
    const auto seq = src.sequence(5);
    const std::size_t n = src.index(6);
    const double x = src.point();
    const double t_off = src.uniform(-1, 1) * arc_radius(seq) / std::pow(seq.uniform_gamma(), static_cast<double>(n));
    CHECK(bowen_offset_distance(seq, 0, n, x, t_off) == doctest::Approx(bowen_distance(seq, 0, n, x, x + t_off)).epsilon(1e-9));
  }
  // doubling: d_{0,n}(x, x+t) = 2^n |t| while 2^n |t| < 1/2
  CHECK(bowen_offset_distance(doubling, 0, 5, 0.3, 0.01) == doctest::Approx(0.32));
  CHECK(bowen_offset_distance(doubling, 0, 5, 0.3, 0.01, 0.1) >= 0.1);
}

TEST_CASE("Bowen balls of the doubling map are arcs of radius eps / 2^n") {
  CHECK(arc_radius(doubling) == doctest::Approx(0.25));
  for (std::size_t n = 0; n <= 10; ++n) {
    const auto ball = bowen_ball(doubling, 0, n, 0.3, 0.1);
    CHECK(ball.measure == doctest::Approx(0.2 / std::ldexp(1.0, static_cast<int>(n))).epsilon(1e-12));
    CHECK(arc_distance(ball.right, 0.3) == doctest::Approx(0.1 / std::ldexp(1.0, static_cast<int>(n))).epsilon(1e-9));
  }
  try {
    bowen_ball(doubling, 0, 3, 0.3, 0.25);
    FAIL("expected RadiusTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::radius_too_large);
  }
}

TEST_CASE("Bowen ball endpoints sit on the eps level set") {
  gen::Source src(34);
  for (int t = 0; t < 100; ++t) {
    const auto seq = src.sequence(4);
    const double eps = 0.9 * arc_radius(seq);
    const std::size_t n = src.index(5);
    const double x = src.point();
    const auto ball = bowen_ball(seq, 0, n, x, eps);
    const double r = wrap(ball.right - x), l = wrap(x - ball.left);
    CHECK(ball.measure == doctest::Approx(r + l).epsilon(1e-12));
    CHECK(brute_bowen(seq, 0, n, x, x + r * (1 - 1e-9)) < eps);
    CHECK(brute_bowen(seq, 0, n, x, x + r * (1 + 1e-6) + 1e-15) >= eps);
    CHECK(brute_bowen(seq, 0, n, x, x - l * (1 + 1e-6) - 1e-15) >= eps);
  }
}

TEST_CASE("greedy separated count for the doubling map has a closed form") {
  // points k s apart with s = ceil(eps R / 2^n) grid steps; floor(R / s) fit around the circle
  const std::size_t res = 1u << 16;
  for (std::size_t n : {0u, 3u, 5u, 7u}) {
    const double eps = 0.03;
    const auto s = static_cast<std::size_t>(std::ceil(eps * res / std::ldexp(1.0, static_cast<int>(n))));
    CHECK(count_separated(doubling, n, eps, res) == res / s);
    CHECK(count_spanning(doubling, n, eps, res) <= res / s);
  }
}

TEST_CASE("separated sets are separated and maximal, spanning sets span") {
  gen::Source src(35);
  for (int t = 0; t < 12; ++t) {
    const auto seq = src.sequence(4);
    const std::size_t n = 1 + src.index(3);
    const double eps = t % 3 == 0 ? 0.3 : 0.05;
    const std::size_t res = 600;
    const BowenGrid grid(seq, n, eps, res);
    CHECK(grid.arc_regime() == (eps < arc_radius(seq)));
    const auto sep = grid.separated_set();
    for (std::size_t a = 0; a < sep.size(); ++a)
      for (std::size_t b = a + 1; b < sep.size(); ++b)
        CHECK(brute_bowen(seq, 0, n, grid.point(sep[a]), grid.point(sep[b])) >= eps - 1e-12);
    const auto span = grid.spanning_set();
    CHECK(span.size() <= sep.size());
    for (std::size_t k = 0; k < res; ++k) {
      bool near_sep = false, near_span = false;
      for (auto c : sep) near_sep = near_sep || brute_bowen(seq, 0, n, grid.point(k), grid.point(c)) < eps + 1e-12;
      for (auto c : span) near_span = near_span || brute_bowen(seq, 0, n, grid.point(k), grid.point(c)) < eps + 1e-12;
      CHECK(near_sep);
      CHECK(near_span);
    }
  }
  CHECK_THROWS_AS(BowenGrid(doubling, 2, 0.01, 100), Error);
}

TEST_CASE("distortion is bounded by C0 times the final distance") {
  CHECK(distortion_constant(doubling) == doctest::Approx(2.0));
  CHECK(distortion_ratio(doubling, 8, 0.1, 0.1001) == doctest::Approx(1.0));
  gen::Source src(36);
  for (int t = 0; t < 300; ++t) {
    const auto seq = src.sequence(6);
    const std::size_t n = 1 + src.index(6);
    const double x = src.point();
    const auto ball = bowen_ball(seq, 0, n - 1, x, 0.5 * arc_radius(seq));
    const double y = x + src.uniform(0, 1) * wrap(ball.right - x);
    const double ratio = distortion_ratio(seq, n, x, y);
    double manual = 1.0, a = x, b = y;
    for (std::size_t i = 0; i < n; ++i) {
      manual *= seq.map_at(i).lift_derivative(a) / seq.map_at(i).lift_derivative(b);
      a = seq.map_at(i).lift(a);
      b = seq.map_at(i).lift(b);
    }
    CHECK(ratio == doctest::Approx(manual).epsilon(1e-10));
    CHECK(std::fabs(std::log(ratio)) <= distortion_constant(seq) * std::fabs(b - a) + 1e-12);
  }
  try {
    distortion_ratio(doubling, 3, 0.0, 0.2);
    FAIL("expected PrecondViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precond_violated);
  }
}

TEST_CASE("volume products are constant for the doubling map and bounded otherwise") {
  const auto lin = volume_lemma_check(doubling, 0.01, 12, 200);
  CHECK(lin.rows.size() == 13);
  CHECK(lin.min_product == doctest::Approx(0.02).epsilon(1e-10));
  CHECK(lin.max_product == doctest::Approx(0.02).epsilon(1e-10));
  gen::Source src(37);
  for (int t = 0; t < 10; ++t) {
    const auto seq = src.sequence(5);
    const auto rep = volume_lemma_check(seq, 0.02, 6, 100);
    CHECK(rep.ratio >= 1.0);
    CHECK(rep.ratio <= rep.ratio_bound);
  }
}
