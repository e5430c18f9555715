// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ndslab/cli.hpp"
#include "ndslab/expansivity.hpp"
#include "ndslab/metrics.hpp"
#include "ndslab/transfer.hpp"

using namespace ndslab;
using cli::json;

#ifndef NDS_LAB_PRESET_DIR
#define NDS_LAB_PRESET_DIR "presets"
#endif

namespace {

// Tolerances.
constexpr double entropy_tol = 0.05;
constexpr double entropy_seconds = 60.0;
constexpr double periodic_tol = 1e-6;
constexpr double jensen_tol = 1e-9;
constexpr double pressure_tol = 0.05;
constexpr double gap_floor = -0.05;
constexpr std::size_t gap_configs = 8;
constexpr double memory_r2 = 0.99;
constexpr double memory_monotone_tol = 1e-10;  // enforced inside loss_of_memory
constexpr double memory_seconds = 30.0;
constexpr double volume_rel_tol = 1e-10;
constexpr double conjugacy_residual_max = 1e-8;
constexpr double conjugacy_entropy_tol = 0.06;
constexpr std::size_t witness_max_n = 6;
constexpr double witness_rel_tol = 1e-12;
constexpr double frink_seconds = 120.0;
constexpr double slope_lo = -2.3, slope_hi = -1.7;
constexpr double duality_tol = 1e-6;
constexpr std::size_t triangle_triples = 10000;

const double log2v = std::log(2.0);

struct Run {
  json summary;
  double seconds = 0.0;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cli::ExperimentConfig preset(const std::string& name) {
  return cli::load_config(std::string(NDS_LAB_PRESET_DIR) + "/" + name + ".json");
}

Run section(const cli::ExperimentConfig& cfg, const std::string& sub) {
  const auto t0 = std::chrono::steady_clock::now();
  cli::Artifacts a = cli::execute(sub, cfg);
  return {std::move(a.summary), elapsed(t0)};
}

Run section(const std::string& name, const std::string& sub) { return section(preset(name), sub); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  bool ok = false;
  std::string detail;
  try {
    std::tie(ok, detail) = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::printf("%s criterion %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

// Memoized pressure runs shared by criteria 3 and 4.
std::vector<std::pair<std::string, Run>> pressure_runs;

const Run& pressure_of(const std::string& name) {
  for (const auto& [n, r] : pressure_runs)
    if (n == name) return r;
  pressure_runs.emplace_back(name, section(name, "pressure"));
  return pressure_runs.back().second;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace

int main() {
  report(1, "entropy cross-validation (doubling)", [] {
    const Run r = section("doubling", "entropy");
    const auto& e = r.summary.at("estimates");
    const double v[4] = {e.at("top_separated"), e.at("top_formula"), e.at("metric_formula"), e.at("metric_estimate")};
    bool ok = r.seconds < entropy_seconds;
    for (double x : v) ok = ok && std::fabs(x - log2v) <= entropy_tol;
    return std::pair{ok, fmt("separated %.6f, top formula %.6f, metric formula %.6f, metric estimate %.6f vs log 2 "
                             "(tol %.2f); %.1f s (limit %.0f s)",
                             v[0], v[1], v[2], v[3], entropy_tol, r.seconds, entropy_seconds)};
  });

  report(2, "entropy formulas for periodic degrees (2,3)", [] {
    const Run r = section("periodic23", "entropy");
    const auto& e = r.summary.at("estimates");
    const double top = e.at("top_formula"), met = e.at("metric_formula");
    const double target = 0.5 * std::log(6.0);
    const bool ok = std::fabs(top - target) <= periodic_tol && std::fabs(met - target) <= periodic_tol &&
                    met <= top + jensen_tol && std::fabs(top - met) <= jensen_tol;
    return std::pair{ok, fmt("top %.12f, metric %.12f vs log sqrt 6 = %.12f (tol %.0e); |top - metric| = %.1e "
                             "(equality tol %.0e)",
                             top, met, target, periodic_tol, std::fabs(top - met), jensen_tol)};
  });

  report(3, "zero pressure of the geometric potential", [] {
    bool ok = true;
    std::string detail;
    for (const std::string name : {"doubling", "perturbed"}) {
      const auto& p = pressure_of(name).summary.at("potentials").at(0);
      if (p.at("potential").at("kind") != "neg_log_derivative") throw std::runtime_error("first potential is not -log f'");
      const double top = p.at("top_pressure"), met = p.at("metric").at("value");
      ok = ok && std::fabs(top) <= pressure_tol && std::fabs(met) <= pressure_tol;
      detail += fmt("%s: top %.5f, metric %.2e; ", name.c_str(), top, met);
    }
    return std::pair{ok, detail + fmt("tol %.2f", pressure_tol)};
  });

  report(4, "variational inequality over the preset matrix", [] {
    std::size_t configs = 0, bad = 0;
    double worst = 1e300;
    for (const std::string name : {"doubling", "perturbed", "periodic23", "perturbed_conjugacy"})
      for (const auto& p : pressure_of(name).summary.at("potentials")) {
        const double gap = p.at("variational_gap");
        ++configs;
        worst = std::min(worst, gap);
        if (gap < gap_floor) ++bad;
      }
    return std::pair{configs >= gap_configs && bad == 0,
                     fmt("%zu configurations (need %zu), min gap %.5f, %zu below %.2f", configs, gap_configs, worst,
                         bad, gap_floor)};
  });

  report(5, "loss of memory (perturbed a = 0.1)", [] {
    const Run r = section("perturbed", "memoryloss");
    const auto& f = r.summary.at("fit");
    const bool degenerate = f.at("degenerate");
    const double rate = degenerate ? NAN : f.at("fitted_rate").get<double>();
    const double r2 = degenerate ? NAN : f.at("r2").get<double>();
    const bool monotone = f.at("monotone");
    const bool ok = !degenerate && rate < 1.0 && r2 > memory_r2 && monotone && r.seconds < memory_seconds;
    return std::pair{ok, fmt("rate %.4f (< 1), r2 %.5f (> %.2f), monotone within %.0e: %s; %.1f s (limit %.0f s)",
                             rate, r2, memory_r2, memory_monotone_tol, monotone ? "yes" : "no", r.seconds,
                             memory_seconds)};
  });

  report(6, "volume lemma", [] {
    const auto lin = section("doubling", "volume").summary.at("report");
    const auto per = section("perturbed", "volume").summary.at("report");
    const double spread = (lin.at("max_product").get<double>() - lin.at("min_product").get<double>()) /
                          lin.at("min_product").get<double>();
    const double ratio = per.at("ratio"), bound = per.at("ratio_bound");
    const bool ok = spread <= volume_rel_tol && ratio <= bound;
    return std::pair{ok, fmt("linear relative spread %.2e (tol %.0e); perturbed ratio %.6f <= exp(2 C0 eps) = %.6f "
                             "with C0 = %.4f",
                             spread, volume_rel_tol, ratio, bound, per.at("distortion_constant").get<double>())};
  });

  report(7, "equi-conjugacy (perturbed prefix, T = 8)", [] {
    const auto s = section("perturbed_conjugacy", "conjugacy").summary;
    const auto& rep = s.at("report");
    const std::size_t it = rep.at("iterations"), budget = rep.at("iteration_budget");
    const double res = rep.at("residual");
    const double h = s.at("entropy_check").at("entropy");
    const bool ok = it <= budget && res < conjugacy_residual_max && std::fabs(h - log2v) <= conjugacy_entropy_tol;
    return std::pair{ok, fmt("%zu iterations (budget %zu), residual %.2e (< %.0e), entropy %.4f (log 2 +- %.2f)", it,
                             budget, res, conjugacy_residual_max, h, conjugacy_entropy_tol)};
  });

  report(8, "expansivity gallery", [] {
    const auto blocks = section("alternating_blocks", "expansivity").summary.at("sue");
    const bool a = !blocks.at("ok").get<bool>() && blocks.contains("witness");
    std::string wa = a ? fmt("witness (%.6f, %.6f) at time %zu", blocks.at("witness").at("x").get<double>(),
                             blocks.at("witness").at("y").get<double>(), blocks.at("witness").at("time").get<std::size_t>())
                       : std::string("no failure reported");

    const auto growing = preset("growing_degree").system;
    bool b = true;
    double fact = 1;
    for (std::size_t n = 1; n <= witness_max_n; ++n) {
      fact *= static_cast<double>(n + 1);
      const auto w = time0_witness(growing, n);
      b = b && std::fabs(w.y - 1.0 / fact) <= witness_rel_tol / fact && w.collision_residual < 1e-9;
    }

    const auto dbl = section("doubling", "expansivity").summary.at("sue");
    const double delta = dbl.at("delta"), eps = dbl.at("eps");
    const auto expected = static_cast<std::size_t>(std::ceil(std::log2(delta / eps)));
    const bool c = dbl.at("ok").get<bool>() && dbl.at("horizon").get<std::size_t>() == expected;
    return std::pair{a && b && c,
                     fmt("(a) %s; (b) y = 1/(n+1)! for n <= %zu: %s; (c) N = %zu vs ceil(log2(%.2f/%.2f)) = %zu",
                         wa.c_str(), witness_max_n, b ? "yes" : "no",
                         dbl.contains("horizon") ? dbl.at("horizon").get<std::size_t>() : 0, delta, eps, expected)};
  });

  report(9, "Frink pipeline (doubling, depth 6)", [] {
    const auto cfg = preset("doubling");
    const auto t0 = std::chrono::steady_clock::now();
    const auto small = section(cfg, "frink").summary;
    json raw = cfg.raw;
    raw["frink"]["net_size"] = 1024;
    raw["frink"]["export_matrices"] = false;
    const auto large = section(cli::parse_config(raw), "frink").summary;
    const double secs = elapsed(t0);

    auto sound = [](const json& s) {
      return s.at("sandwich").at("holds").get<bool>() && s.at("rho_axioms").at("triangle").get<bool>() &&
             s.at("rho_prime_axioms").at("triangle").get<bool>();
    };
    const auto& ex = large.at("expansion");
    const std::size_t checked = ex.at("pairs_checked"), viol = ex.at("violations");
    const double mu = ex.at("mu");
    const double min_ratio = checked > 0 ? ex.at("min_ratio").get<double>() : NAN;
    const bool ok = sound(small) && sound(large) && small.at("expansion").at("violations") == 0 && checked > 0 &&
                    viol == 0 && min_ratio >= mu && secs < frink_seconds;
    return std::pair{ok, fmt("net 256: sandwich %s, %zu pairs gated; net 1024: sandwich %s, %zu pairs checked, %zu "
                             "violations, min ratio %.4f >= mu %.4f; %.1f s (limit %.0f s)",
                             small.at("sandwich").at("holds").get<bool>() ? "holds" : "fails",
                             small.at("expansion").at("pairs_checked").get<std::size_t>(),
                             large.at("sandwich").at("holds").get<bool>() ? "holds" : "fails", checked, viol, min_ratio,
                             mu, secs, frink_seconds)};
  });

  report(10, "property suites", [] {
    const double two_pi = 2 * std::numbers::pi;
    auto bump = [&](std::size_t n) {
      return GridDensity::from_function(n, [&](double x) { return 1.0 + 0.5 * std::cos(two_pi * (x - 0.2)); });
    };
    auto tent = [](std::size_t n) {
      return GridDensity::from_function(n, [](double x) { return 2.0 - 4.0 * std::fabs(x - 0.5); });
    };
    const auto f = CircleMap::perturbed(2, 0.3);
    std::vector<double> ln, ld;
    for (std::size_t n = 512; n <= 4096; n *= 2) {
      ln.push_back(std::log(static_cast<double>(n)));
      ld.push_back(std::log(std::fabs(perron_frobenius(f, tent(n)).mass_defect)));
    }
    const double slope = ls_slope(ln, ld);

    const auto phi = bump(4096);
    const auto step = perron_frobenius(f, phi);
    auto psi = [&](double x) { return std::sin(two_pi * 2 * (x - 0.1)) + 0.3 * std::cos(two_pi * x); };
    const std::size_t m = 1 << 16;
    double lhs = 0, rhs = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = (static_cast<double>(j) + 0.5) / m;
      lhs += (1 + step.mass_defect) * step.density.at(x) * psi(x);
      rhs += phi.at(x) * psi(f.eval(x));
    }
    const double duality = std::fabs(lhs - rhs) / m;

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const NdsSequence seq({CircleMap::perturbed(3, 0.4), CircleMap::linear(2), CircleMap::perturbed(2, -0.3)},
                          CircleMap::perturbed(2, 0.1));
    std::size_t violations = 0;
    for (std::size_t t = 0; t < triangle_triples; ++t) {
      const double x = u(rng), y = u(rng), z = u(rng);
      const std::size_t n = rng() % 10;
      if (bowen_distance(seq, 0, n, x, z) > bowen_distance(seq, 0, n, x, y) + bowen_distance(seq, 0, n, y, z) + 1e-12)
        ++violations;
    }
    const bool ok = slope >= slope_lo && slope <= slope_hi && duality <= duality_tol && violations == 0;
    return std::pair{ok, fmt("mass defect slope %.3f in [%.1f, %.1f]; duality error %.2e (tol %.0e); %zu triangle "
                             "violations in %zu triples",
                             slope, slope_lo, slope_hi, duality, duality_tol, violations, triangle_triples)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
