#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "eigensafe/error.hpp"
#include "run_config.hpp"

namespace {

using eigensafe::cli::RunConfig;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

struct FlagSpec {
  std::string flag;  // command-line name
  std::string key;   // RunConfig key it overrides
  std::string help;
};

// Registers --config/--seed/--out plus per-command key overrides, and wires
// the callback that assembles the RunConfig and dispatches. Flag values take
// precedence over config-file entries.
void add_command(CLI::App& app, const std::string& name,
                 const std::string& description,
                 const std::vector<FlagSpec>& flags,
                 void (*fn)(RunConfig, const std::filesystem::path&,
                            std::uint64_t)) {
  auto* cmd = app.add_subcommand(name, description);
  auto common = std::make_shared<CommonArgs>();
  auto values = std::make_shared<std::map<std::string, std::string>>();
  cmd->add_option("--config", common->config_path, "key=value config file");
  cmd->add_option("--seed", common->seed, "64-bit run seed");
  cmd->add_option("--out", common->out_dir, "output directory");
  for (const FlagSpec& spec : flags) {
    const std::string key = spec.key;
    cmd->add_option_function<std::string>(
        "--" + spec.flag,
        [values, key](const std::string& v) { (*values)[key] = v; }, spec.help);
  }
  cmd->callback([common, values, fn] {
    std::optional<std::filesystem::path> config_file;
    if (!common->config_path.empty()) config_file = common->config_path;
    RunConfig config = RunConfig::load(config_file);
    for (const auto& [k, v] : *values) config.set(k, v);
    fn(std::move(config), common->out_dir, common->seed);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Dominant-eigenpair safety analysis: exact tabular backends, offline "
      "learning of the safety eigenfunction and backup policy, and an "
      "eigenfunction-threshold safety filter."};
  app.require_subcommand(1);

  add_command(app, "toy-eigen",
              "Eigenpair and safety-probability curves of a gridworld map",
              {{"map", "map", "map file"},
               {"horizon", "horizon", "DP horizon (default 60)"}},
              eigensafe::cli::run_toy_eigen);
  add_command(app, "collect", "Sample a uniform offline dataset",
              {{"env", "env", "environment id (dint | dubins)"},
               {"n", "n", "number of transitions"},
               {"sigma", "sigma", "noise scale override"},
               {"dt", "dt", "time step override"}},
              eigensafe::cli::run_collect);
  add_command(app, "train", "Train the eigenpair and backup policy offline",
              {{"env", "env", "environment id"},
               {"data", "data", "dataset.csv path"},
               {"n-steps", "n_steps", "gradient steps"}},
              eigensafe::cli::run_train);
  add_command(app, "eval-grid", "Evaluate a trained model on a state grid",
              {{"env", "env", "environment id"},
               {"model", "model", "model directory"},
               {"grid-res", "grid_res", "per-dim grid resolution"}},
              eigensafe::cli::run_eval_grid);
  add_command(app, "filter-eval",
              "Paired-arm safety filter evaluation (filtered vs unfiltered)",
              {{"env", "env", "environment id"},
               {"model-dir", "model", "model directory"},
               {"epsilon", "epsilon", "filter threshold"},
               {"episodes", "episodes", "episode count"},
               {"horizon", "horizon", "episode horizon"},
               {"ref", "ref", "reference policy (random | constant:<a0,...>)"}},
              eigensafe::cli::run_filter_eval);
  add_command(app, "baseline-hj",
              "Discounted-reachability baseline on the discretized system",
              {{"env", "env", "environment id (dint)"},
               {"grid-res", "grid_res", "per-dim grid resolution"},
               {"sigma", "sigma", "noise scale override"}},
              eigensafe::cli::run_baseline_hj);
  add_command(app, "gradcheck",
              "Finite-difference verification of all loss gradients", {},
              eigensafe::cli::run_gradcheck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  } catch (const eigensafe::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const eigensafe::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const eigensafe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
