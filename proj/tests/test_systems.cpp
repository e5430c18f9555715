#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "ndslab/circle.hpp"
#include "ndslab/errors.hpp"
#include "ndslab/systems.hpp"

using namespace ndslab;

namespace {

// Lift of x -> d x + a sin(2 pi x) / (2 pi), written out directly.
double trig_lift(int d, double a, double x) { return d * x + a * std::sin(2 * std::numbers::pi * x) / (2 * std::numbers::pi); }

}  // namespace

TEST_CASE("linear and perturbed lifts match the closed form") {
  const auto f = CircleMap::perturbed(3, 0.4);
  CHECK(f.degree() == 3);
  CHECK(f.family() == MapFamily::perturbed_trig);
  CHECK(f.lift(0.0) == 0.0);
  for (double x : {0.1, 0.37, 0.9, -0.3, 2.2}) CHECK(f.lift(x) == doctest::Approx(trig_lift(3, 0.4, x)));
  CHECK(f.lambda() == doctest::Approx(2.6));
  CHECK(f.gamma() == doctest::Approx(std::max(3.4, 2 * std::numbers::pi * 0.4)));

  const auto g = CircleMap::linear(2);
  CHECK(g.family() == MapFamily::linear);
  CHECK(g.eval(0.75) == doctest::Approx(0.5));
  CHECK(g.lambda() == 2.0);
  CHECK(g.gamma() == 2.0);
  CHECK(g.is_expanding());

  const auto id = CircleMap::identity();
  CHECK_FALSE(id.is_expanding());
  CHECK(id.eval(0.3) == doctest::Approx(0.3));
}

TEST_CASE("invalid maps are rejected as validation errors") {
  for (auto make : {+[] { return CircleMap::perturbed(1, 0.0); }, +[] { return CircleMap::perturbed(2, 1.0); },
                    +[] { return CircleMap::perturbed(2, std::nan("")); }}) {
    try {
      make();
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_argument);
      CHECK(e.is_validation());
    }
  }
}

TEST_CASE("lift identities hold for random maps") {
  gen::Source src(21);
  for (int t = 0; t < 300; ++t) {
    const auto f = src.map(2, 5);
    const double x = src.uniform(-2, 2);
    CHECK(f.lift(x + 1) == doctest::Approx(f.lift(x) + f.degree()).epsilon(1e-12));
    const double h = 1e-6;
    const double fd = (f.lift(x + h) - f.lift(x - h)) / (2 * h);
    CHECK(f.lift_derivative(x) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(f.lift_derivative(x) >= f.lambda() - 1e-12);
    CHECK(std::fabs(f.lift_derivative(x)) <= f.derivative_bound() + 1e-12);
    CHECK(std::fabs(f.lift_second_derivative(x)) <= f.second_derivative_bound() + 1e-12);
    const double y = src.uniform(-5, 5);
    CHECK(f.lift(f.lift_inverse(y)) == doctest::Approx(y).epsilon(1e-11));

    const auto pre = f.branch_preimages(x);
    REQUIRE(pre.size() == static_cast<std::size_t>(f.degree()));
    for (std::size_t j = 0; j < pre.size(); ++j) {
      CHECK(pre[j] >= 0.0);
      CHECK(pre[j] < 1.0);
      CHECK(arc_distance(f.eval(pre[j]), x) < 1e-11);
      if (j > 0) CHECK(pre[j] > pre[j - 1]);
    }
  }
}

TEST_CASE("composition applies the inner map first and keeps certified bounds") {
  gen::Source src(22);
  for (int t = 0; t < 100; ++t) {
    const auto f = src.map(), g = src.map();
    const auto h = CircleMap::compose(f, g);
    CHECK(h.family() == MapFamily::composite);
    CHECK(h.degree() == f.degree() * g.degree());
    CHECK(h.atoms().size() == 2);
    for (int s = 0; s < 20; ++s) {
      const double x = src.point();
      CHECK(h.lift(x) == doctest::Approx(g.lift(f.lift(x))).epsilon(1e-12));
      const double dh = g.lift_derivative(f.lift(x)) * f.lift_derivative(x);
      CHECK(h.lift_derivative(x) == doctest::Approx(dh).epsilon(1e-12));
      CHECK(dh >= h.lambda() - 1e-9);
      CHECK(dh <= h.derivative_bound() + 1e-9);
      CHECK(std::fabs(h.lift_second_derivative(x)) <= h.second_derivative_bound() + 1e-9);
    }
  }
}

TEST_CASE("sequence compositions and log Jacobians agree with step-by-step iteration") {
  gen::Source src(23);
  for (int t = 0; t < 100; ++t) {
    const auto seq = src.sequence(6);
    const std::size_t k = src.index(4), n = 1 + src.index(7);
    const double x = src.point();
    double y = x, logj = 0.0, logd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& f = seq.map_at(k + i);
      logj += std::log(f.lift_derivative(y));
      logd += std::log(static_cast<double>(f.degree()));
      y = f.lift(y);
    }
    CHECK(seq.compose_lift(k, n, x) == doctest::Approx(y).epsilon(1e-12));
    CHECK(arc_distance(seq.compose_eval(k, n, x), y) < 1e-9);
    CHECK(seq.log_jacobian_sum(k, n, x) == doctest::Approx(logj).epsilon(1e-12));
    CHECK(seq.log_degree_sum(k, n) == doctest::Approx(logd));
    const auto shifted = seq.shifted(k);
    CHECK(shifted.compose_lift(0, n, x) == doctest::Approx(y).epsilon(1e-12));
  }
}

TEST_CASE("uniform constants are the extremes over prefix and tail") {
  const NdsSequence seq({CircleMap::perturbed(2, 0.3), CircleMap::linear(5)}, CircleMap::linear(3));
  CHECK(seq.uniform_lambda() == doctest::Approx(1.7));
  CHECK(seq.uniform_gamma() == doctest::Approx(5.0));
  CHECK(seq.map_at(1).degree() == 5);
  CHECK(seq.map_at(100).degree() == 3);
  CHECK_NOTHROW(seq.require_expanding("test"));

  const NdsSequence lazy({CircleMap::identity()}, CircleMap::linear(2));
  CHECK_FALSE(lazy.is_expanding());
  try {
    lazy.require_expanding("counting");
    FAIL("expected PrecondViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precond_violated);
  }
}
