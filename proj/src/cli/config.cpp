#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ndslab/circle.hpp"
#include "ndslab/cli.hpp"

namespace ndslab::cli {

Params::Params(const json& object, std::string where) : object_(object), where_(std::move(where)) {
  if (object_.is_null()) object_ = json::object();
  if (!object_.is_object()) throw Error(ErrorKind::invalid_argument, where_ + ": expected an object");
}

const json* Params::find(const std::string& key) {
  if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) seen_.push_back(key);
  const auto it = object_.find(key);
  return it == object_.end() ? nullptr : &*it;
}

void Params::fail(const std::string& key, const std::string& what) const {
  throw Error(ErrorKind::invalid_argument, where_ + "." + key + ": " + what);
}

bool Params::has(const std::string& key) const { return object_.contains(key); }

double Params::real(const std::string& key, double fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_number()) fail(key, "expected a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

double Params::real(const std::string& key) {
  if (!has(key)) fail(key, "is required");
  return real(key, 0.0);
}

std::size_t Params::count(const std::string& key, std::size_t fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0) fail(key, "expected a nonnegative integer");
  return v->get<std::size_t>();
}

std::size_t Params::count(const std::string& key) {
  if (!has(key)) fail(key, "is required");
  return count(key, 0);
}

int Params::integer(const std::string& key, int fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(key, "expected an integer");
  return v->get<int>();
}

bool Params::flag(const std::string& key, bool fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(key, "expected true or false");
  return v->get<bool>();
}

std::string Params::text(const std::string& key, const std::string& fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_string()) fail(key, "expected a string");
  return v->get<std::string>();
}

std::vector<double> Params::reals(const std::string& key, std::vector<double> fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_array() || v->empty()) fail(key, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& x : *v) {
    if (!x.is_number()) fail(key, "expected a nonempty array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::size_t> Params::counts(const std::string& key, std::vector<std::size_t> fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_array() || v->empty()) fail(key, "expected a nonempty array of integers");
  std::vector<std::size_t> out;
  for (const auto& x : *v) {
    if (!x.is_number_integer() || x.get<long long>() < 0) fail(key, "expected a nonempty array of integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

json Params::object(const std::string& key) {
  const json* v = find(key);
  if (!v) return json::object();
  if (!v->is_object()) fail(key, "expected an object");
  return *v;
}

json Params::value(const std::string& key) {
  const json* v = find(key);
  if (!v) fail(key, "is required");
  return *v;
}

void Params::finish() const {
  for (auto it = object_.begin(); it != object_.end(); ++it)
    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
      throw Error(ErrorKind::invalid_argument, where_ + "." + it.key() + ": unknown key");
}

CircleMap parse_map(const json& spec, const std::string& where) {
  Params p(spec, where);
  const std::string family = p.text("family", "");
  p.count("repeat", 1);  // consumed by parse_system
  CircleMap out = CircleMap::identity();
  if (family == "identity") {
    if (p.integer("degree", 1) != 1) throw Error(ErrorKind::invalid_argument, where + ": the identity has degree 1");
    if (p.real("amplitude", 0.0) != 0.0)
      throw Error(ErrorKind::invalid_argument, where + ": the identity has no amplitude");
  } else if (family == "linear") {
    const int degree = p.integer("degree", 0);
    if (p.real("amplitude", 0.0) != 0.0)
      throw Error(ErrorKind::invalid_argument, where + ": linear maps have amplitude 0");
    try {
      out = CircleMap::linear(degree);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  } else if (family == "perturbed_trig" || family == "perturbed") {
    const int degree = p.integer("degree", 0);
    const double amplitude = p.real("amplitude");
    try {
      out = CircleMap::perturbed(degree, amplitude);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  } else {
    throw Error(ErrorKind::invalid_argument,
                where + ".family: expected linear, perturbed_trig or identity, got '" + family + "'");
  }
  p.finish();
  return out;
}

NdsSequence parse_system(const json& spec) {
  Params p(spec, "system");
  std::vector<CircleMap> prefix;
  const json list = p.has("prefix") ? p.value("prefix") : json::array();
  if (!list.is_array()) throw Error(ErrorKind::invalid_argument, "system.prefix: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "system.prefix[" + std::to_string(i) + "]";
    const json& entry = list[i];
    if (entry.is_object() && entry.contains("cycle")) {
      Params c(entry, where);
      const json maps = c.value("cycle");
      const std::size_t count = c.count("count", 1);
      c.finish();
      if (!maps.is_array() || maps.empty())
        throw Error(ErrorKind::invalid_argument, where + ".cycle: expected a nonempty array of maps");
      std::vector<CircleMap> cycle;
      for (std::size_t j = 0; j < maps.size(); ++j)
        cycle.push_back(parse_map(maps[j], where + ".cycle[" + std::to_string(j) + "]"));
      for (std::size_t r = 0; r < count; ++r) prefix.insert(prefix.end(), cycle.begin(), cycle.end());
      continue;
    }
    const CircleMap m = parse_map(entry, where);
    const std::size_t repeat = entry.value("repeat", std::size_t{1});
    if (repeat == 0) throw Error(ErrorKind::invalid_argument, where + ".repeat: must be at least 1");
    prefix.insert(prefix.end(), repeat, m);
  }
  if (!p.has("tail")) throw Error(ErrorKind::invalid_argument, "system.tail: is required");
  const json tail_spec = p.value("tail");
  if (tail_spec.is_object() && tail_spec.contains("repeat"))
    throw Error(ErrorKind::invalid_argument, "system.tail.repeat: the tail repeats forever");
  const CircleMap tail = parse_map(tail_spec, "system.tail");
  p.finish();
  return NdsSequence(std::move(prefix), tail);
}

ExperimentConfig parse_config(const json& document) {
  if (!document.is_object()) throw Error(ErrorKind::invalid_argument, "config: expected a JSON object");
  ExperimentConfig cfg;
  cfg.raw = document;
  const int version = document.value("schema_version", schema_version);
  if (version != schema_version)
    throw Error(ErrorKind::invalid_argument,
                "config.schema_version: expected " + std::to_string(schema_version) + ", got " + std::to_string(version));
  if (!document.contains("name") || !document["name"].is_string())
    throw Error(ErrorKind::invalid_argument, "config.name: a string is required");
  cfg.name = document["name"].get<std::string>();
  cfg.description = document.value("description", std::string{});
  if (document.contains("seed")) {
    if (!document["seed"].is_number_unsigned())
      throw Error(ErrorKind::invalid_argument, "config.seed: expected a nonnegative integer");
    cfg.seed = document["seed"].get<std::uint64_t>();
  }
  if (!document.contains("system")) throw Error(ErrorKind::invalid_argument, "config.system: is required");
  cfg.system = parse_system(document["system"]);
  static const std::vector<std::string> top_level = {"schema_version", "name", "description", "seed", "system",
                                                     "criteria"};
  for (auto it = document.begin(); it != document.end(); ++it) {
    const auto& subs = subcommands();
    if (std::find(top_level.begin(), top_level.end(), it.key()) == top_level.end() &&
        std::find(subs.begin(), subs.end(), it.key()) == subs.end())
      throw Error(ErrorKind::invalid_argument, "config." + it.key() + ": unknown key");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open config file " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(document);
}

GridDensity parse_density(const json& spec, std::size_t grid, const std::string& where) {
  Params p(spec, where);
  const std::string kind = p.text("kind", "uniform");
  std::vector<double> v(grid);
  if (kind == "uniform") {
    std::fill(v.begin(), v.end(), 1.0);
  } else if (kind == "tent") {
    const double c = p.real("center", 0.5);
    const double h = p.real("height", 1.0);
    if (!(h >= 0.0 && h < 4.0)) throw Error(ErrorKind::invalid_argument, where + ".height: must lie in [0, 4)");
    for (std::size_t i = 0; i < grid; ++i) v[i] = 1.0 + h * (0.25 - arc_distance(grid_point(i, grid), c));
  } else if (kind == "cosine") {
    const double a = p.real("amplitude", 0.5);
    const double phase = p.real("phase", 0.0);
    if (!(std::fabs(a) < 1.0)) throw Error(ErrorKind::invalid_argument, where + ".amplitude: must satisfy |a| < 1");
    for (std::size_t i = 0; i < grid; ++i)
      v[i] = 1.0 + a * std::cos(2.0 * std::numbers::pi * (grid_point(i, grid) - phase));
  } else {
    throw Error(ErrorKind::invalid_argument, where + ".kind: expected uniform, tent or cosine, got '" + kind + "'");
  }
  p.finish();
  return GridDensity(std::move(v));
}

IntervalPartition parse_partition(const json& spec, const std::string& where) {
  Params p(spec, where);
  if (p.has("uniform") && p.has("breakpoints"))
    throw Error(ErrorKind::invalid_argument, where + ": give either uniform or breakpoints");
  if (p.has("uniform")) {
    const std::size_t m = p.count("uniform");
    p.finish();
    if (m < 1) throw Error(ErrorKind::invalid_argument, where + ".uniform: need at least one cell");
    return IntervalPartition::uniform(m);
  }
  const auto b = p.reals("breakpoints", {0.0, 0.5});
  p.finish();
  return IntervalPartition(b);
}

PotentialSequence parse_potential(const json& spec, const NdsSequence& seq, const std::string& where) {
  Params p(spec, where);
  const std::string kind = p.text("kind", "neg_log_derivative");
  const std::size_t grid = p.count("grid", 4096);
  if (grid < 16) throw Error(ErrorKind::invalid_argument, where + ".grid: need at least 16 nodes");
  if (kind == "neg_log_derivative") {
    p.finish();
    return PotentialSequence::neg_log_derivative(seq, grid);
  }
  if (kind == "constant") {
    const double c = p.real("value", 0.0);
    p.finish();
    return PotentialSequence::constant(c, grid);
  }
  if (kind == "cosine") {
    const double a = p.real("amplitude", 0.3);
    const double phase = p.real("phase", 0.0);
    p.finish();
    return PotentialSequence({}, PeriodicSamples::sample(grid, [&](double x) {
                               return a * std::cos(2.0 * std::numbers::pi * (x - phase));
                             }));
  }
  throw Error(ErrorKind::invalid_argument,
              where + ".kind: expected neg_log_derivative, constant or cosine, got '" + kind + "'");
}

std::vector<Preset> list_presets(const std::filesystem::path& dir) {
  std::vector<Preset> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) continue;
    Preset p;
    p.name = doc.value("name", entry.path().stem().string());
    p.description = doc.value("description", std::string{});
    p.file = entry.path();
    if (doc.contains("criteria") && doc["criteria"].is_array())
      for (const auto& c : doc["criteria"])
        if (c.is_number_integer()) p.criteria.push_back(c.get<int>());
    for (const auto& s : subcommands())
      if (doc.contains(s)) p.sections.push_back(s);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const Preset& a, const Preset& b) { return a.name < b.name; });
  return out;
}

std::string format_presets(const std::vector<Preset>& presets) {
  std::ostringstream os;
  for (const auto& p : presets) {
    os << p.name << "  " << p.file.string() << "\n    " << p.description << "\n    subcommands:";
    for (const auto& s : p.sections) os << ' ' << s;
    os << '\n';
  }
  return os.str();
}

}  // namespace ndslab::cli
