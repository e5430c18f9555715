#pragma once

// Experiment runner: JSON configs in, CSV tables and JSON summaries out.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ndslab/entropy.hpp"
#include "ndslab/errors.hpp"
#include "ndslab/pressure.hpp"
#include "ndslab/systems.hpp"
#include "ndslab/transfer.hpp"

namespace ndslab::cli {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

/// Reader over one JSON object that rejects unknown keys on finish().
class Params {
 public:
  Params(const json& object, std::string where);

  bool has(const std::string& key) const;
  double real(const std::string& key, double fallback);
  double real(const std::string& key);
  std::size_t count(const std::string& key, std::size_t fallback);
  std::size_t count(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> reals(const std::string& key, std::vector<double> fallback);
  std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> fallback);
  /// Sub-object (empty object when absent).
  json object(const std::string& key);
  /// Raw value; throws when absent.
  json value(const std::string& key);
  const std::string& where() const noexcept { return where_; }
  /// Throws invalid_argument naming the first key that was never read.
  void finish() const;

 private:
  const json* find(const std::string& key);
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  json object_;
  std::string where_;
  std::vector<std::string> seen_;
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  std::uint64_t seed = 0;
  NdsSequence system = NdsSequence::constant(CircleMap::identity());
  json raw;
};

CircleMap parse_map(const json& spec, const std::string& where);
/// {"prefix": [...], "tail": map}.  Prefix entries are maps (optionally with
/// "repeat") or {"cycle": [maps], "count": k}.
NdsSequence parse_system(const json& spec);
ExperimentConfig parse_config(const json& document);
ExperimentConfig load_config(const std::filesystem::path& path);

/// {"kind": "uniform" | "tent" | "cosine", ...} sampled on `grid` nodes.
GridDensity parse_density(const json& spec, std::size_t grid, const std::string& where);
/// {"breakpoints": [...]} or {"uniform": m}.
IntervalPartition parse_partition(const json& spec, const std::string& where);
/// {"kind": "neg_log_derivative" | "constant" | "cosine", ...}.
PotentialSequence parse_potential(const json& spec, const NdsSequence& seq, const std::string& where);

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Artifacts {
  json summary;
  std::vector<Table> tables;
};

const std::vector<std::string>& subcommands();

/// Validates the subcommand section of `cfg`, then computes.  Throws Error.
Artifacts execute(const std::string& subcommand, const ExperimentConfig& cfg);

/// Writes <sub>_summary.json, every table as CSV and config_echo.json.
void write_artifacts(const std::filesystem::path& out, const std::string& subcommand, const ExperimentConfig& cfg,
                     const Artifacts& artifacts);

std::string format_csv(const Table& table);

json error_json(const Error& error);

/// Full run with exit codes: 0 success, 2 validation error, 3 numeric failure.
int run(const std::string& subcommand, const std::filesystem::path& config, const std::filesystem::path& out,
        std::ostream& log, std::ostream& err);

struct Preset {
  std::string name;
  std::string description;
  std::filesystem::path file;
  std::vector<int> criteria;
  std::vector<std::string> sections;
};

/// Every *.json directly inside `dir`, sorted by name.
std::vector<Preset> list_presets(const std::filesystem::path& dir);
std::string format_presets(const std::vector<Preset>& presets);

}  // namespace ndslab::cli
