#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "ndslab/circle.hpp"
#include "ndslab/cli.hpp"
#include "ndslab/conjugacy.hpp"
#include "ndslab/expansivity.hpp"
#include "ndslab/metrics.hpp"

namespace ndslab::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double as_real(std::size_t n) { return static_cast<double>(n); }

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json base_summary(const std::string& sub, const ExperimentConfig& cfg) {
  return json{{"schema_version", schema_version}, {"subcommand", sub}, {"name", cfg.name}, {"seed", cfg.seed}};
}

void require_param(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_argument, where + ": " + what);
}

void require_grid(std::size_t n, const std::string& where) {
  require_param(n >= 128 && (n & (n - 1)) == 0, where, "grid size must be a power of two >= 128");
}

void require_radii(const std::vector<double>& eps, std::size_t resolution, const std::string& where) {
  for (double e : eps) {
    require_param(e > 0.0 && e < 0.5, where + ".eps", "radii must lie in (0, 1/2)");
    require_param(as_real(resolution) * e >= 10.0, where + ".resolution", "need resolution * eps >= 10");
  }
}

struct MetricSpec {
  IntervalPartition partition{{0.0}};
  json density_spec;
  std::size_t density_grid = 4096;
  std::size_t cell_budget = default_cell_budget;
};

MetricSpec read_metric(Params& parent, const std::string& key) {
  Params p(parent.object(key), parent.where() + "." + key);
  MetricSpec m;
  m.partition = parse_partition(p.object("partition"), p.where() + ".partition");
  m.density_spec = p.object("density");
  m.density_grid = p.count("density_grid", 4096);
  m.cell_budget = p.count("cell_budget", default_cell_budget);
  p.finish();
  require_grid(m.density_grid, p.where() + ".density_grid");
  return m;
}

// ---------------------------------------------------------------- entropy

Artifacts run_entropy(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("entropy", json::object()), "entropy");
  const std::size_t n_max = p.count("n_max", 14);
  const auto eps = p.reals("eps", {0.01});
  const std::size_t resolution = p.count("resolution", std::size_t{1} << 24);
  const bool spanning = p.flag("with_spanning", true);
  const std::size_t quad = p.count("quad_points", 4096);
  const double frac = p.real("window_fraction", 1.0 / 3.0);
  const std::size_t metric_n = p.count("metric_n_max", n_max);
  MetricSpec metric = read_metric(p, "metric");
  p.finish();
  require_param(n_max >= 2 && metric_n >= 2, "entropy.n_max", "need at least 2");
  require_param(quad >= 1, "entropy.quad_points", "need at least one node");
  require_param(frac > 0.0 && frac < 1.0, "entropy.window_fraction", "must lie in (0, 1)");
  require_radii(eps, resolution, "entropy");
  const GridDensity mu = parse_density(metric.density_spec, metric.density_grid, "entropy.metric.density");

  const EntropyTable table = top_entropy_separated(cfg.system, eps, n_max, resolution, spanning, frac);
  const Trace top = top_entropy_formula(cfg.system, n_max, quad, frac);
  const Trace met = metric_entropy_formula(cfg.system, n_max, quad, frac);
  const Trace est = metric_entropy_estimate(cfg.system, PartitionSequence::constant(metric.partition), mu, metric_n,
                                            metric.cell_budget, frac);

  Artifacts a;
  a.summary = base_summary("entropy", cfg);
  a.summary["estimates"] = {{"top_separated", table.headline},
                            {"top_formula", top.estimate},
                            {"metric_formula", met.estimate},
                            {"metric_estimate", est.estimate}};
  json cols = json::array();
  for (const auto& c : table.columns)
    cols.push_back({{"eps", c.eps}, {"secant_rate", c.secant_rate}, {"window_max_rate", c.window_max_rate}});
  a.summary["columns"] = cols;
  a.summary["window"] = {{"begin", table.window_begin}, {"end", table.window_end}};
  a.summary["monotone_in_eps"] = table.monotone_in_eps;

  Table counts{"entropy_counts", {"n", "eps", "separated", "spanning", "rate_separated", "rate_spanning"}, {}};
  for (const auto& r : table.rows)
    counts.rows.push_back({as_real(r.n), r.eps, as_real(r.separated), spanning ? as_real(r.spanning) : nan,
                           r.rate_separated, spanning ? r.rate_spanning : nan});
  Table traces{"entropy_traces", {"n", "top_formula", "metric_formula", "metric_estimate"}, {}};
  for (std::size_t n = 1; n <= std::max(n_max, metric_n); ++n)
    traces.rows.push_back({as_real(n), n <= n_max ? top.at(n) : nan, n <= n_max ? met.at(n) : nan,
                           n <= metric_n ? est.at(n) : nan});
  a.tables = {std::move(counts), std::move(traces)};
  return a;
}

// ---------------------------------------------------------------- pressure

Artifacts run_pressure(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("pressure", json::object()), "pressure");
  const std::size_t n_max = p.count("n_max", 12);
  const auto eps = p.reals("eps", {0.01});
  const std::size_t resolution = p.count("resolution", std::size_t{1} << 23);
  const bool spanning = p.flag("with_spanning", true);
  const double frac = p.real("window_fraction", 1.0 / 3.0);
  json pots = p.has("potentials") ? p.value("potentials") : json::array({json{{"kind", "neg_log_derivative"}}});
  MetricSpec metric = read_metric(p, "metric");
  p.finish();
  require_param(n_max >= 2, "pressure.n_max", "need at least 2");
  require_param(frac > 0.0 && frac < 1.0, "pressure.window_fraction", "must lie in (0, 1)");
  require_param(pots.is_array() && !pots.empty(), "pressure.potentials", "expected a nonempty array");
  require_radii(eps, resolution, "pressure");
  const GridDensity mu = parse_density(metric.density_spec, metric.density_grid, "pressure.metric.density");
  std::vector<PotentialSequence> potentials;
  for (std::size_t i = 0; i < pots.size(); ++i)
    potentials.push_back(parse_potential(pots[i], cfg.system, "pressure.potentials[" + std::to_string(i) + "]"));

  Artifacts a;
  a.summary = base_summary("pressure", cfg);
  Table tab{"pressure_table", {"potential", "n", "eps", "log_s", "log_r"}, {}};
  Table met{"pressure_metric", {"potential", "n", "entropy_rate", "potential_mean"}, {}};
  json results = json::array();
  for (std::size_t i = 0; i < potentials.size(); ++i) {
    const PressureTable t = top_pressure_estimate(cfg.system, potentials[i], eps, n_max, resolution, spanning, frac);
    const MetricPressure m = metric_pressure(cfg.system, potentials[i], mu, PartitionSequence::constant(metric.partition),
                                             n_max, metric.cell_budget, frac);
    json cols = json::array();
    for (const auto& c : t.columns)
      cols.push_back({{"eps", c.eps}, {"secant_rate", c.secant_rate}, {"window_max_rate", c.window_max_rate}});
    results.push_back({{"potential", pots[i]},
                       {"top_pressure", t.headline},
                       {"columns", cols},
                       {"metric", {{"entropy", m.entropy},
                                   {"potential_mean", m.potential_mean},
                                   {"value", m.value},
                                   {"partition_lower_bound", m.partition_lower_bound}}},
                       {"variational_gap", t.headline - m.value}});
    for (const auto& r : t.rows)
      tab.rows.push_back({as_real(i), as_real(r.n), r.eps, r.log_s, spanning ? r.log_r : nan});
    for (std::size_t n = 1; n <= n_max; ++n)
      met.rows.push_back({as_real(i), as_real(n), m.entropy_trace.at(n), m.potential_trace[n - 1]});
  }
  a.summary["potentials"] = results;
  a.tables = {std::move(tab), std::move(met)};
  return a;
}

// -------------------------------------------------------------- memoryloss

Artifacts run_memoryloss(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("memoryloss", json::object()), "memoryloss");
  const std::size_t grid = p.count("grid", 4096);
  const std::size_t n_max = p.count("n_max", 30);
  const double floor = p.real("floor", 1e-12);
  const double tol = p.real("root_tol", 1e-12);
  const json phi_spec = p.object("phi");
  const json psi_spec = p.object("psi");
  p.finish();
  require_grid(grid, "memoryloss.grid");
  require_param(n_max >= 8, "memoryloss.n_max", "need at least 8 steps");
  require_param(floor > 0.0, "memoryloss.floor", "must be positive");
  require_param(tol > 0.0, "memoryloss.root_tol", "must be positive");
  const GridDensity phi = parse_density(phi_spec, grid, "memoryloss.phi");
  const GridDensity psi = parse_density(psi_spec, grid, "memoryloss.psi");

  const MemoryLossReport r = loss_of_memory(cfg.system, phi, psi, n_max, floor, tol);
  Artifacts a;
  a.summary = base_summary("memoryloss", cfg);
  a.summary["fit"] = {{"fitted_rate", number(r.fitted_rate)}, {"slope", number(r.slope)},       {"r2", number(r.r2)},
                      {"window_begin", r.window_begin},       {"window_end", r.window_end},     {"degenerate", r.degenerate},
                      {"monotone", r.monotone}};
  Table t{"memoryloss_trace", {"n", "l1"}, {}};
  for (std::size_t n = 0; n < r.l1_trace.size(); ++n) t.rows.push_back({as_real(n), r.l1_trace[n]});
  a.tables = {std::move(t)};
  return a;
}

// --------------------------------------------------------------- conjugacy

Artifacts run_conjugacy(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("conjugacy", json::object()), "conjugacy");
  const std::size_t horizon = p.count("horizon", 8);
  const double tol = p.real("tol", 1e-10);
  const std::size_t max_iter = p.count("max_iter", 200);
  const std::size_t grid = p.count("grid", 8192);
  const std::size_t samples = p.count("residual_samples", 1000);
  const double root_tol = p.real("root_tol", 1e-13);
  const std::size_t truncate = p.count("truncate_steps", 0);
  const std::size_t export_points = p.count("export_points", 64);
  const double initial_amp = p.real("initial_amplitude", 0.0);
  const CircleMap target = p.has("target") ? parse_map(p.value("target"), "conjugacy.target") : cfg.system.tail();
  Params e(p.object("entropy_check"), "conjugacy.entropy_check");
  const bool entropy_check = p.has("entropy_check");
  const std::size_t e_n = e.count("n_max", 12);
  const double e_eps = e.real("eps", 0.01);
  const std::size_t e_res = e.count("resolution", std::size_t{1} << 22);
  e.finish();
  p.finish();
  require_param(tol > 0.0, "conjugacy.tol", "must be positive");
  require_param(max_iter >= 1, "conjugacy.max_iter", "need at least one iteration");
  require_param(grid >= 16, "conjugacy.grid", "need at least 16 nodes");
  require_param(samples >= 1, "conjugacy.residual_samples", "need at least one sample");
  require_param(root_tol > 0.0, "conjugacy.root_tol", "must be positive");
  require_param(export_points >= 1, "conjugacy.export_points", "need at least one point");
  if (entropy_check) {
    require_param(e_n >= 2, "conjugacy.entropy_check.n_max", "need at least 2");
    require_radii({e_eps}, e_res, "conjugacy.entropy_check");
  }

  std::optional<ConjugacyState> initial;
  if (initial_amp != 0.0) {
    ConjugacyState s = identity_state(cfg.system, target, horizon, grid);
    for (std::size_t k = 0; k < horizon; ++k)
      s.h[k] = LiftHomeo(PeriodicSamples::sample(
          grid, [&](double x) { return initial_amp * std::sin(2.0 * std::numbers::pi * x); }));
    initial = std::move(s);
  }
  const Conjugacy c =
      solve_equiconjugacy(cfg.system, target, horizon, tol, max_iter, grid, samples, std::move(initial), root_tol);

  Artifacts a;
  a.summary = base_summary("conjugacy", cfg);
  a.summary["report"] = {{"iterations", c.report.iterations},
                         {"iteration_budget", c.report.iteration_budget},
                         {"residual", c.report.residual},
                         {"residual_samples", samples},
                         {"residual_grid", conjugacy_residual(c.maps(), cfg.system, target, grid)},
                         {"final_step", c.report.contraction_trace.back()}};
  if (truncate > 0) {
    const ConjugacyState t = run_sigma(cfg.system, target, horizon, truncate, grid, root_tol);
    a.summary["truncated"] = {{"steps", truncate}, {"residual", conjugacy_residual(t.h, cfg.system, target, samples)}};
  }
  if (entropy_check) {
    const EntropyTable t = top_entropy_separated(cfg.system, {e_eps}, e_n, e_res, false);
    a.summary["entropy_check"] = {{"n_max", e_n}, {"eps", e_eps}, {"entropy", t.headline}};
  }
  Table trace{"conjugacy_trace", {"iteration", "distance"}, {}};
  for (std::size_t i = 0; i < c.report.contraction_trace.size(); ++i)
    trace.rows.push_back({as_real(i + 1), c.report.contraction_trace[i]});
  Table disp{"conjugacy_displacements", {"k", "x", "displacement"}, {}};
  for (std::size_t k = 0; k < c.maps().size(); ++k)
    for (std::size_t j = 0; j < export_points; ++j) {
      const double x = grid_point(j, export_points);
      disp.rows.push_back({as_real(k), x, c.maps()[k].displacement().at(x)});
    }
  a.tables = {std::move(trace), std::move(disp)};
  return a;
}

// ------------------------------------------------------------- expansivity

Artifacts run_expansivity(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("expansivity", json::object()), "expansivity");
  Params s(p.object("sue"), "expansivity.sue");
  const double delta = s.real("delta", 0.2);
  const double eps = s.real("eps", 0.05);
  const std::size_t n_max = s.count("n_max", 32);
  const std::size_t window = s.count("time_window", 8);
  const std::size_t net = s.count("net_size", 256);
  s.finish();
  const auto orders = p.counts("witness_orders", {});
  const auto cover_eps = p.reals("boundedness_eps", {0.25, 0.1});
  const std::size_t cover_times = p.count("boundedness_times", 8);
  const bool generator = p.has("generator");
  Params g(p.object("generator"), "expansivity.generator");
  const double g_delta = g.real("delta", 0.4);
  const std::size_t g_n = g.count("n_max", 12);
  g.finish();
  p.finish();
  require_param(eps > 0.0 && eps < delta && delta <= 0.5, "expansivity.sue", "need 0 < eps < delta <= 1/2");
  require_param(net >= 2, "expansivity.sue.net_size", "need at least 2 points");
  for (std::size_t n : orders) require_param(n >= 1, "expansivity.witness_orders", "orders must be positive");
  for (double e : cover_eps) require_param(e > 0.0, "expansivity.boundedness_eps", "radii must be positive");
  if (generator) {
    require_param(g_delta > 0.0 && g_delta <= 1.0, "expansivity.generator.delta", "must lie in (0, 1]");
    require_param(g_n >= 2, "expansivity.generator.n_max", "need at least 2");
  }

  Artifacts a;
  a.summary = base_summary("expansivity", cfg);
  const SueResult r = sue_horizon(cfg.system, delta, eps, n_max, window, net);
  json sue = {{"delta", delta}, {"eps", eps}, {"n_max", n_max}, {"time_window", window}, {"net_size", net},
              {"ok", r.ok}};
  if (r.ok) sue["horizon"] = r.horizon;
  if (r.witness)
    sue["witness"] = {{"time", r.witness->time},
                      {"x", r.witness->x},
                      {"y", r.witness->y},
                      {"distance", r.witness->distance},
                      {"bowen_distance", r.witness->bowen_distance}};
  a.summary["sue"] = sue;
  Table wt{"expansivity_witnesses", {"n", "x", "y", "distance", "max_orbit_distance", "collision_residual"}, {}};
  json wits = json::array();
  for (std::size_t n : orders) {
    const ExpansivityWitness w = time0_witness(cfg.system, n);
    wt.rows.push_back({as_real(n), w.x, w.y, w.distance, w.max_orbit_distance, w.collision_residual});
    wits.push_back({{"n", n},
                    {"x", w.x},
                    {"y", w.y},
                    {"distance", w.distance},
                    {"max_orbit_distance", w.max_orbit_distance},
                    {"collision_residual", w.collision_residual}});
  }
  a.summary["time0_witnesses"] = wits;
  json cover = json::array();
  for (double e : cover_eps) cover.push_back({{"eps", e}, {"balls", uniform_total_boundedness(e, cover_times)}});
  a.summary["uniform_total_boundedness"] = cover;
  if (generator)
    a.summary["generator_entropy"] = {{"delta", g_delta}, {"n_max", g_n},
                                      {"entropy", generator_entropy(cfg.system, g_delta, g_n)}};
  a.tables = {std::move(wt)};
  return a;
}

// ------------------------------------------------------------------- frink

Table matrix_table(const std::string& name, const NetMatrix& m) {
  Table t{name, {}, {}};
  for (std::size_t a = 0; a < m.size(); ++a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", grid_point(a, m.size()));
    t.header.emplace_back(buf);
  }
  for (std::size_t a = 0; a < m.size(); ++a) {
    std::vector<double> row(m.size());
    for (std::size_t b = 0; b < m.size(); ++b) row[b] = m(a, b);
    t.rows.push_back(std::move(row));
  }
  return t;
}

json axioms_json(const MetricAxioms& m) {
  return {{"symmetric", m.symmetric},
          {"triangle", m.triangle},
          {"separates", m.separates},
          {"worst_triangle_excess", m.worst_triangle_excess}};
}

Artifacts run_frink(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("frink", json::object()), "frink");
  const std::size_t net = p.count("net_size", 256);
  const std::size_t depth = p.count("depth", 6);
  const double delta = p.real("delta", 0.3);
  const std::size_t base = p.count("base_time", 0);
  const std::size_t sue_max = p.count("sue_max", 32);
  const double threshold = p.real("threshold", 1.0 / 32.0);
  const bool export_matrices = p.flag("export_matrices", true);
  p.finish();
  require_param(net >= 2 && net <= 2048, "frink.net_size", "must lie in [2, 2048]");
  require_param(depth >= 1 && depth <= 32, "frink.depth", "must lie in [1, 32]");
  require_param(delta > 0.0 && delta <= 0.5, "frink.delta", "must lie in (0, 1/2]");
  require_param(sue_max >= 1, "frink.sue_max", "must be positive");
  require_param(threshold > 0.0, "frink.threshold", "must be positive");

  const FrinkPipelineResult r = frink_pipeline(cfg.system, base, net, delta, depth, sue_max, threshold);
  Artifacts a;
  a.summary = base_summary("frink", cfg);
  a.summary["net_size"] = net;
  a.summary["depth"] = depth;
  a.summary["delta"] = delta;
  a.summary["n_step"] = r.n_step;
  a.summary["mu"] = r.mu;
  a.summary["sandwich"] = {{"holds", r.sandwich.holds}, {"per_level", r.sandwich.per_level}};
  a.summary["rho_axioms"] = axioms_json(r.rho_axioms);
  a.summary["rho_prime_axioms"] = axioms_json(r.rho_prime_axioms);
  a.summary["expansion"] = {{"threshold", threshold},
                            {"pairs_checked", r.expansion.pairs_checked},
                            {"violations", r.expansion.violations},
                            {"min_ratio", number(r.expansion.min_ratio)},
                            {"mu", r.expansion.mu},
                            {"slack", r.expansion.slack},
                            {"pairs_below_threshold_adapted", r.expansion.pairs_below_threshold_adapted}};
  if (export_matrices) a.tables = {matrix_table("frink_rho", r.rho), matrix_table("frink_rho_prime", r.rho_prime)};
  return a;
}

// ------------------------------------------------------------------ volume

Artifacts run_volume(const ExperimentConfig& cfg) {
  Params p(cfg.raw.value("volume", json::object()), "volume");
  const double eps = p.real("eps", 0.01);
  const std::size_t n_max = p.count("n_max", 12);
  const std::size_t samples = p.count("samples", 1000);
  p.finish();
  require_param(eps > 0.0, "volume.eps", "must be positive");
  require_param(n_max >= 1, "volume.n_max", "need at least 1");
  require_param(samples >= 1, "volume.samples", "need at least one sample");

  const VolumeReport r = volume_lemma_check(cfg.system, eps, n_max, samples);
  Artifacts a;
  a.summary = base_summary("volume", cfg);
  a.summary["report"] = {{"eps", r.eps},
                         {"distortion_constant", distortion_constant(cfg.system)},
                         {"min_product", r.min_product},
                         {"max_product", r.max_product},
                         {"ratio", r.ratio},
                         {"ratio_bound", r.ratio_bound}};
  Table t{"volume_rows", {"n", "product_min", "product_max"}, {}};
  for (const auto& row : r.rows) t.rows.push_back({as_real(row.n), row.product_min, row.product_max});
  a.tables = {std::move(t)};
  return a;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> subs = {"entropy",     "pressure", "memoryloss", "conjugacy",
                                                "expansivity", "frink",    "volume"};
  return subs;
}

Artifacts execute(const std::string& subcommand, const ExperimentConfig& cfg) {
  if (subcommand == "entropy") return run_entropy(cfg);
  if (subcommand == "pressure") return run_pressure(cfg);
  if (subcommand == "memoryloss") return run_memoryloss(cfg);
  if (subcommand == "conjugacy") return run_conjugacy(cfg);
  if (subcommand == "expansivity") return run_expansivity(cfg);
  if (subcommand == "frink") return run_frink(cfg);
  if (subcommand == "volume") return run_volume(cfg);
  throw Error(ErrorKind::invalid_argument, "unknown subcommand '" + subcommand + "'");
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

void write_artifacts(const std::filesystem::path& out, const std::string& subcommand, const ExperimentConfig& cfg,
                     const Artifacts& artifacts) {
  std::filesystem::create_directories(out);
  write_text(out / "config_echo.json", cfg.raw.dump(2) + "\n");
  write_text(out / (subcommand + "_summary.json"), artifacts.summary.dump(2) + "\n");
  for (const auto& t : artifacts.tables) write_text(out / (t.name + ".csv"), format_csv(t));
}

json error_json(const Error& error) {
  json e = {{"kind", std::string(error.name())},
            {"message", error.what()},
            {"category", error.is_validation() ? "validation" : "numeric"}};
  if (!error.trace().empty()) {
    json t = json::array();
    for (double v : error.trace()) t.push_back(number(v));
    e["trace"] = t;
  }
  return {{"schema_version", schema_version}, {"error", e}};
}

int run(const std::string& subcommand, const std::filesystem::path& config, const std::filesystem::path& out,
        std::ostream& log, std::ostream& err) {
  std::optional<ExperimentConfig> cfg;
  auto fail = [&](const Error& e) {
    const json j = error_json(e);
    err << j.dump() << '\n';
    try {
      std::filesystem::create_directories(out);
      if (cfg) write_text(out / "config_echo.json", cfg->raw.dump(2) + "\n");
      write_text(out / "error.json", j.dump(2) + "\n");
    } catch (const std::exception&) {
      // The error is already on stderr.
    }
    return e.is_validation() ? 2 : 3;
  };
  try {
    cfg = load_config(config);
    const Artifacts a = execute(subcommand, *cfg);
    write_artifacts(out, subcommand, *cfg, a);
    log << a.summary.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    return fail(e);
  } catch (const json::exception& e) {
    return fail(Error(ErrorKind::invalid_argument, std::string("config: ") + e.what()));
  } catch (const std::exception& e) {
    err << json{{"schema_version", schema_version},
                {"error", {{"kind", "RuntimeError"}, {"message", e.what()}, {"category", "numeric"}}}}
               .dump()
        << '\n';
    return 3;
  }
}

}  // namespace ndslab::cli
