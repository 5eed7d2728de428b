#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "giantatom/config.hpp"
#include "giantatom/runner.hpp"
#include "json.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string output;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_min, grid_max;
  std::optional<int> grid_points;
};

void add_common(CLI::App* cmd, Common& common, bool config_required) {
  auto* opt = cmd->add_option("--config", common.config_path, "JSON config file");
  if (config_required) opt->required();
  cmd->add_option("--output", common.output, "output file (default stdout)");
  cmd->add_option("--format", common.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", common.seed, "random seed override");
  cmd->add_option("--grid-min", common.grid_min, "grid minimum override");
  cmd->add_option("--grid-max", common.grid_max, "grid maximum override");
  cmd->add_option("--grid-points", common.grid_points, "grid point count override");
}

giantatom::cli::RunConfig resolve(const Common& common) {
  giantatom::cli::RunConfig cfg;
  if (!common.config_path.empty()) cfg = giantatom::cli::load_config(common.config_path);
  if (!common.output.empty()) cfg.output = common.output;
  if (common.format == "csv") cfg.format = giantatom::cli::Format::csv;
  if (common.format == "json") cfg.format = giantatom::cli::Format::json;
  if (common.seed) cfg.seed = *common.seed;
  if (common.grid_min || common.grid_max || common.grid_points) {
    giantatom::cli::GridConfig grid =
        cfg.grid ? *cfg.grid : giantatom::cli::GridConfig{0.8, 1.2, 1001, "natural"};
    if (common.grid_min) grid.min = *common.grid_min;
    if (common.grid_max) grid.max = *common.grid_max;
    if (common.grid_points) grid.points = *common.grid_points;
    cfg.grid = grid;
  }
  return cfg;
}

int report_error(const std::string& type, const std::string& path,
                 const std::string& message) {
  nlohmann::json record;
  record["error"] = {{"type", type}, {"path", path}, {"message", message}};
  std::cerr << record.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"giant-atom spectral response, cascaded-network checks, and dynamics"};
  app.require_subcommand(1);

  Common common;
  std::string scenario_name, preset_name;

  add_common(app.add_subcommand("spectrum", "rates and shifts versus frequency"),
             common, true);
  add_common(app.add_subcommand("symmetric", "closed forms for a uniform layout"),
             common, true);
  add_common(app.add_subcommand("mirror", "spectrum with mirror corrections"), common,
             true);
  add_common(app.add_subcommand("simulate", "time evolution of the populations"),
             common, true);
  add_common(app.add_subcommand("steady", "steady-state populations"), common, true);
  add_common(app.add_subcommand("design", "fit a layout to a target response"), common,
             true);
  add_common(app.add_subcommand("slh-check", "network vs continuum equivalence suite"),
             common, false);
  auto* scenario =
      app.add_subcommand("scenario", "prebuilt three-level demonstrations");
  scenario->add_option("name", scenario_name, "inversion | multiphoton | anharmonicity")
      ->required()
      ->check(CLI::IsMember({"inversion", "multiphoton", "anharmonicity"}));
  add_common(scenario, common, false);
  auto* preset = app.add_subcommand("preset", "reference four-point layouts");
  preset->add_option("name", preset_name, "fig3-a | fig3-b | fig3-c")
      ->required()
      ->check(CLI::IsMember({"fig3-a", "fig3-b", "fig3-c", "two-maxima",
                             "flat-maximum", "shallow-minima"}));
  add_common(preset, common, false);

  CLI11_PARSE(app, argc, argv);

  std::string command = app.get_subcommands().front()->get_name();
  if (command == "scenario") command = "scenario:" + scenario_name;
  if (command == "preset") command = "preset:" + preset_name;

  try {
    const giantatom::cli::RunConfig cfg = resolve(common);
    return giantatom::cli::run(command, cfg, std::cout, std::cerr);
  } catch (const giantatom::cli::ConfigError& e) {
    std::string message = e.what();
    const std::string prefix = e.path + ": ";
    if (!e.path.empty() && message.rfind(prefix, 0) == 0)
      message = message.substr(prefix.size());
    return report_error("config", e.path, message);
  } catch (const std::exception& e) {
    return report_error("runtime", "", e.what());
  }
}
