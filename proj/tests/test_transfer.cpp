#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gen.hpp"
#include "ndslab/errors.hpp"
#include "ndslab/transfer.hpp"

using namespace ndslab;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

GridDensity bump(std::size_t n, double amp, double phase) {
  return GridDensity::from_function(n, [&](double x) { return 1.0 + amp * std::cos(two_pi * (x - phase)); });
}

// Tent of height one over the base level, peaked at 1/2.
GridDensity tent(std::size_t n) {
  return GridDensity::from_function(n, [](double x) { return 1.0 + (1.0 - 4.0 * std::fabs(x - 0.5)); });
}

// Midpoint rule on m nodes.
template <class F>
double quad(std::size_t m, F&& f) {
  double s = 0;
  for (std::size_t j = 0; j < m; ++j) s += f((j + 0.5) / static_cast<double>(m));
  return s / static_cast<double>(m);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace

TEST_CASE("densities are validated and normalized") {
  const auto c = GridDensity::from_function(128, [](double) { return 3.0; });
  for (double v : c.values()) CHECK(v == doctest::Approx(1.0));
  const auto b = bump(256, 0.5, 0.1);
  CHECK(b.samples().mean() == doctest::Approx(1.0));
  CHECK(b.measure(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(b.measure(0.2, 0.2) == 0.0);
  for (auto bad : {+[] { return GridDensity(std::vector<double>(100, 1.0)); },
                   +[] { return GridDensity(std::vector<double>(64, 1.0)); },
                   +[] { return GridDensity(std::vector<double>(128, 0.0)); }, +[] {
                     std::vector<double> v(128, 1.0);
                     v[5] = -0.1;
                     return GridDensity(v);
                   }}) {
    try {
      bad();
      FAIL("expected invalid_argument");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_argument);
    }
  }
}

TEST_CASE("the uniform density is invariant under linear maps") {
  for (int d : {2, 3, 5}) {
    const auto step = perron_frobenius(CircleMap::linear(d), GridDensity::uniform(512));
    CHECK(std::fabs(step.mass_defect) < 1e-12);
    for (double v : step.density.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transfer operator is dual to composition") {
  // int (P phi) psi = int phi (psi o f), both sides by independent fine quadrature
  gen::Source src(41);
  for (int t = 0; t < 6; ++t) {
    const auto f = src.map(2, 3);
    const auto phi = bump(4096, src.uniform(-0.6, 0.6), src.point());
    const double k = src.integer(1, 3), ph = src.point();
    auto psi = [&](double x) { return std::sin(two_pi * k * (x - ph)) + 0.3 * std::cos(two_pi * x); };
    const auto step = perron_frobenius(f, phi);
    const double lhs = quad(1 << 16, [&](double x) { return (1 + step.mass_defect) * step.density.at(x) * psi(x); });
    const double rhs = quad(1 << 16, [&](double x) { return phi.at(x) * psi(f.eval(x)); });
    CHECK(std::fabs(lhs - rhs) < 1e-6);
  }
}

TEST_CASE("mass defect decays like the square of the grid spacing") {
  // smooth densities superconverge to rounding level; the tent kink shows the generic rate
  const auto f = CircleMap::perturbed(2, 0.3);
  std::vector<double> logn, logdef;
  for (std::size_t n : {512u, 1024u, 2048u, 4096u}) {
    const auto step = perron_frobenius(f, tent(n));
    CHECK(std::fabs(step.mass_defect) < (n == 4096 ? 1e-8 : 1e-5));
    logn.push_back(std::log(static_cast<double>(n)));
    logdef.push_back(std::log(std::fabs(step.mass_defect)));
  }
  const double slope = ls_slope(logn, logdef);
  CHECK(slope >= -2.3);
  CHECK(slope <= -1.7);
}

TEST_CASE("evolution composes single steps") {
  const NdsSequence seq({CircleMap::perturbed(2, 0.2), CircleMap::perturbed(3, -0.4)}, CircleMap::linear(2));
  const auto phi = bump(256, 0.4, 0.0);
  const auto ev = evolve(seq, phi, 4);
  REQUIRE(ev.densities.size() == 5);
  REQUIRE(ev.mass_defects.size() == 4);
  auto cur = phi;
  for (std::size_t k = 0; k < 4; ++k) {
    cur = perron_frobenius(seq.map_at(k), cur).density;
    CHECK(l1_distance(cur, ev.densities[k + 1]) < 1e-15);
  }
}

TEST_CASE("Lipschitz ratio constant matches brute force") {
  CHECK(lipschitz_ratio_constant(GridDensity::uniform(128), 0.1) == 0.0);
  const auto phi = bump(128, 0.5, 0.3);
  const double eps = 0.1;
  double brute = 0;
  for (std::size_t i = 0; i < 128; ++i)
    for (std::size_t j = 0; j < 128; ++j) {
      const double d = arc_distance(grid_point(i, 128), grid_point(j, 128));
      if (d > 0 && d < eps) brute = std::max(brute, std::fabs(phi[i] / phi[j] - 1) / d);
    }
  CHECK(lipschitz_ratio_constant(phi, eps) == doctest::Approx(brute));
  std::vector<double> v(128, 1.0);
  v[3] = 0.0;
  try {
    lipschitz_ratio_constant(GridDensity(v), 0.1);
    FAIL("expected NonPositiveDensity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_positive_density);
  }
}

TEST_CASE("renormalization subtracts kappa / 2 and rescales") {
  const auto phi = bump(128, 0.5, 0.0);
  const auto r = renormalize(phi, 0.6);
  for (std::size_t i = 0; i < 128; ++i) CHECK(r[i] == doctest::Approx((phi[i] - 0.3) / 0.7));
  CHECK(r.samples().mean() == doctest::Approx(1.0));
  try {
    renormalize(phi, 2 * phi.min());
    FAIL("expected KappaTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kappa_too_large);
  }
}

TEST_CASE("loss of memory is monotone with rate below one") {
  const auto seq = NdsSequence::constant(CircleMap::perturbed(2, 0.1));
  const auto phi = bump(1024, 0.5, 0.0), psi = bump(1024, -0.5, 0.25);
  const auto rep = loss_of_memory(seq, phi, psi, 12, 1e-12);
  REQUIRE(rep.l1_trace.size() == 13);
  CHECK(rep.l1_trace[0] == doctest::Approx(l1_distance(phi, psi)));
  CHECK(rep.monotone);
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.fitted_rate < 1.0);
  // oracle: evolve separately
  const auto a = evolve(seq, phi, 12), b = evolve(seq, psi, 12);
  for (std::size_t k = 0; k <= 12; ++k) CHECK(rep.l1_trace[k] == doctest::Approx(l1_distance(a.densities[k], b.densities[k])));
  CHECK_THROWS_AS(loss_of_memory(seq, phi, psi, 4), Error);
}
