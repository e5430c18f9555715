// nds-lab <subcommand> --config <path> [--out <dir>]
// nds-lab presets [--dir <presets>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ndslab/cli.hpp"

#ifndef NDS_LAB_PRESET_DIR
#define NDS_LAB_PRESET_DIR "presets"
#endif

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on nonautonomous expanding circle maps"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  for (const auto& name : ndslab::cli::subcommands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default nds_lab_out/<name>)");
  }
  std::string preset_dir = NDS_LAB_PRESET_DIR;
  auto* presets = app.add_subcommand("presets", "list the shipped experiment configs");
  presets->add_option("--dir", preset_dir, "preset directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (presets->parsed()) {
    const auto list = ndslab::cli::list_presets(preset_dir);
    std::cout << list.size() << " presets in " << preset_dir << "\n" << ndslab::cli::format_presets(list);
    return 0;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  if (out.empty()) out = "nds_lab_out/" + sub;
  return ndslab::cli::run(sub, config, out, std::cout, std::cerr);
}
