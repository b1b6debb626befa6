#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fpl/cli/config.hpp"
#include "fpl/cli/experiments.hpp"

namespace {

std::string experiment_list() {
  std::string out;
  for (const auto& name : fpl::cli::experiment_names()) out += (out.empty() ? "" : ", ") + name;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale experiments on projections, sections and visibility of fractal sets"};
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::vector<std::string> assignments;
  // Shorthands for the counterexample flags; each maps onto the config key of
  // the same name.
  std::map<std::string, std::string> shorthands;
  app.add_option("experiment", experiment, "one of: " + experiment_list())->required();
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed, "64-bit seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", assignments, "extra key=value assignment (repeatable)");
  for (const char* key : {"n", "s", "rprime", "stages", "lines", "level"})
    app.add_option_function<std::string>(std::string("--") + key,
                                         [&shorthands, key](const std::string& v) { shorthands[key] = v; },
                                         std::string("set config key '") + key + "'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fpl::cli::kExitError;
  }

  try {
    std::map<std::string, std::string> given;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read config file " + config_path);
      given = fpl::cli::parse_config(in);
    }
    for (const auto& a : assignments) {
      const auto eq = a.find('=');
      if (eq == std::string::npos || eq == 0) throw fpl::cli::ConfigError("", "--set expects key=value, got '" + a + "'");
      given[a.substr(0, eq)] = a.substr(eq + 1);
    }
    for (const auto& [key, value] : shorthands) given[key] = value;
    auto config = fpl::cli::resolve_config(experiment, given);
    if (seed) config.seed = *seed;
    config.out_dir = out_dir;
    return fpl::cli::run_experiment(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "fractal-proj-lab: " << e.what() << '\n';
    return fpl::cli::kExitError;
  }
}
