#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "artifacts.hpp"
#include "eigensafe/dataset_io.hpp"
#include "eigensafe/envs/discretize.hpp"
#include "eigensafe/envs/registry.hpp"
#include "eigensafe/error.hpp"
#include "eigensafe/filter/safety_filter.hpp"
#include "eigensafe/format.hpp"
#include "eigensafe/learn/train.hpp"
#include "eigensafe/tabular/grid_map.hpp"

namespace eigensafe::cli {

namespace fs = std::filesystem;

namespace {

class CommandRun {
 public:
  CommandRun(std::string command, const fs::path& out, std::uint64_t seed)
      : out_(out), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.seed = seed;
    fs::create_directories(out_);
  }

  void resolved(const std::string& key, const std::string& value) {
    manifest_.config[key] = value;
  }
  void resolved(const std::string& key, double value) {
    manifest_.config[key] = format_g17(value);
  }
  void resolved(const std::string& key, std::uint64_t value) {
    manifest_.config[key] = std::to_string(value);
  }

  void emit(const std::string& name, const std::string& content) {
    const fs::path path = out_ / name;
    atomic_write_text(path, content);
    manifest_.add_artifact(path);
  }

  void track(const fs::path& path) { manifest_.add_artifact(path); }

  const fs::path& out() const { return out_; }

  void finish() {
    manifest_.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    manifest_.write(out_);
  }

 private:
  fs::path out_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

void require_file(const fs::path& path, const char* what) {
  if (!fs::exists(path))
    throw UsageError(std::string(what) + " not found: " + path.string());
}

std::vector<std::size_t> parse_grid_res(const std::string& text,
                                        std::size_t state_dim) {
  std::vector<std::size_t> res;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      res.push_back(std::stoull(token));
    } catch (const std::exception&) {
      throw UsageError("bad grid_res entry '" + token + "'");
    }
  }
  if (res.size() == 1) res.assign(state_dim, res.front());
  if (res.size() != state_dim)
    throw UsageError("grid_res needs 1 or " + std::to_string(state_dim) +
                     " comma-separated entries");
  return res;
}

std::string describe_env(const RunConfig& config) {
  std::string env_id = config.get_string("env");
  if (env_id != "dint" && env_id != "dubins" && env_id != "gridworld")
    throw UsageError("unknown env '" + env_id + "'");
  return env_id;
}

}  // namespace

void run_toy_eigen(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys({"map", "horizon", "tol", "max_iters"});
  const fs::path map_path = config.get_string("map");
  require_file(map_path, "map file");
  const std::size_t horizon = config.get_size("horizon", 60);
  const double tol = config.get_double("tol", 1e-12);
  const std::size_t max_iters = config.get_size("max_iters", 100000);

  CommandRun run("toy-eigen", out, seed);
  run.resolved("map", map_path.string());
  run.resolved("horizon", static_cast<std::uint64_t>(horizon));
  run.resolved("tol", tol);
  run.resolved("max_iters", static_cast<std::uint64_t>(max_iters));

  const tabular::GridMap map = tabular::GridMap::load(map_path);
  const tabular::GridworldModel model = tabular::build_gridworld(map);
  const tabular::EigenPair pair =
      tabular::power_iteration(model.mdp, tol, max_iters);
  const auto z = tabular::exact_safety_dp(model.mdp, horizon);

  run.emit("eigenvalue.txt", format_g17(pair.eigenvalue) + "\n");

  std::ostringstream eigfn;
  eigfn << "row,col,value\n";
  for (std::size_t i = 0; i < model.states.size(); ++i)
    eigfn << model.states[i].first << ',' << model.states[i].second << ','
          << format_g17(pair.eigenfunction[i]) << '\n';
  run.emit("eigenfunction.csv", eigfn.str());

  std::ostringstream curves;
  curves << "t,state,z\n";
  for (std::size_t t = 0; t < z.size(); ++t)
    for (std::size_t i = 0; i < model.states.size(); ++i)
      curves << t << ',' << i << ',' << format_g17(z[t][i]) << '\n';
  run.emit("z_curves.csv", curves.str());

  // Slope-convergence diagnostic: late log-decrements against log gamma.
  double worst = 0.0;
  if (horizon >= 2 && pair.eigenvalue > 0.0) {
    const std::size_t t = horizon;
    for (std::size_t i = 0; i < model.states.size(); ++i) {
      if (pair.eigenfunction[i] <= 1e-6) continue;
      const double slope = std::log(z[t][i]) - std::log(z[t - 1][i]);
      worst = std::max(worst, std::abs(slope - std::log(pair.eigenvalue)));
    }
  }
  run.finish();
  std::cout << "gamma " << format_g17(pair.eigenvalue) << " (" << pair.iterations
            << " iterations, residual " << pair.residual << ")\n"
            << "max |dlogZ - log gamma| at t=" << horizon << ": " << worst
            << "\n";
}

void run_collect(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys({"env", "sigma", "dt", "n"});
  const std::string env_id = describe_env(config);
  const std::size_t n = config.get_size("n", 0);
  if (n < 1) throw UsageError("collect needs n >= 1");

  CommandRun run("collect", out, seed);
  run.resolved("env", env_id);
  run.resolved("n", static_cast<std::uint64_t>(n));
  for (const auto& [k, v] : config.env_overrides()) run.resolved(k, v);

  const auto env = envs::make_environment(env_id, config.env_overrides());
  Rng rng(seed);
  const Dataset data = collect_uniform(*env, n, rng);

  std::ostringstream csv;
  write_dataset_csv(csv, data);
  run.emit("dataset.csv", csv.str());
  run.finish();

  std::size_t terminal = 0;
  for (const auto& t : data.tuples) terminal += t.next_state.terminal ? 1 : 0;
  std::cout << "collected " << n << " transitions (" << terminal
            << " terminal)\n";
}

void run_train(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys({"env", "sigma", "dt", "data", "w_lambda", "w_n",
                             "w_plus", "lr_psi", "lr_policy", "batch_size",
                             "n_steps", "lambda_init", "seed", "phi_steps",
                             "lr_phi"});
  const std::string env_id = describe_env(config);
  const fs::path data_path = config.get_string("data");
  require_file(data_path, "dataset");

  learn::TrainConfig train_config;
  for (const auto& [key, value] : config.entries())
    train_config.apply_entry(key, value);
  train_config.seed = seed;
  train_config.validate();
  const std::size_t phi_steps = config.get_size("phi_steps", 0);
  const double lr_phi = config.get_double("lr_phi", 3e-4);

  CommandRun run("train", out, seed);
  run.resolved("env", env_id);
  run.resolved("data", data_path.string());
  for (const auto& [k, v] : config.env_overrides()) run.resolved(k, v);
  run.resolved("w_lambda", train_config.w_lambda);
  run.resolved("w_n", train_config.w_n);
  run.resolved("w_plus", train_config.w_plus);
  run.resolved("lr_psi", train_config.lr_psi);
  run.resolved("lr_policy", train_config.lr_policy);
  run.resolved("batch_size", static_cast<std::uint64_t>(train_config.batch_size));
  run.resolved("n_steps", static_cast<std::uint64_t>(train_config.n_steps));
  run.resolved("lambda_init", train_config.lambda_init);
  run.resolved("phi_steps", static_cast<std::uint64_t>(phi_steps));
  run.resolved("lr_phi", lr_phi);

  const auto env = envs::make_environment(env_id, config.env_overrides());
  Dataset data = read_dataset_csv(data_path, env_id, seed);
  if (data.state_dim() != env->spec().state_dim ||
      data.action_dim() != env->spec().action_dim)
    throw ValidationError("dataset dimensions do not match env '" + env_id + "'");

  learn::TrainResult result =
      learn::train(data, train_config, env->spec().action_bounds);
  if (phi_steps > 0) {
    Rng phi_rng = Rng(train_config.seed).stream(3);
    learn::train_phi(result.model, data, phi_steps, lr_phi,
                     train_config.batch_size, phi_rng);
  }

  const fs::path tmp_model = out / ".model.tmp";
  fs::remove_all(tmp_model);
  result.model.save(tmp_model);
  atomic_replace_dir(tmp_model, out / "model");
  for (const auto& entry : fs::directory_iterator(out / "model"))
    run.track(entry.path());

  const fs::path tmp_log = out / ".train_log.csv.tmp";
  result.log.write_csv(tmp_log);
  fs::rename(tmp_log, out / "train_log.csv");
  run.track(out / "train_log.csv");
  run.finish();

  std::cout << "final lambda " << format_g17(result.model.lambda) << " after "
            << train_config.n_steps << " steps\n";
}

void run_eval_grid(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys({"env", "sigma", "dt", "model", "grid_res"});
  const std::string env_id = describe_env(config);
  const fs::path model_dir = config.get_string("model");
  require_file(model_dir, "model directory");
  const auto env = envs::make_environment(env_id, config.env_overrides());
  const auto grid_res =
      parse_grid_res(config.get_string("grid_res", "101"), env->spec().state_dim);

  CommandRun run("eval-grid", out, seed);
  run.resolved("env", env_id);
  run.resolved("model", model_dir.string());
  run.resolved("grid_res", config.get_string("grid_res", "101"));
  for (const auto& [k, v] : config.env_overrides()) run.resolved(k, v);

  const learn::EigenModel model = learn::EigenModel::load(model_dir);
  const EnvSpec& spec = env->spec();
  if (model.state_dim() != spec.state_dim ||
      model.action_dim() != spec.action_dim)
    throw ValidationError("model dimensions do not match env '" + env_id + "'");

  std::ostringstream psi_csv, phi_csv;
  for (std::size_t d = 0; d < spec.state_dim; ++d) {
    psi_csv << 's' << d << ',';
    phi_csv << 's' << d << ',';
  }
  for (std::size_t d = 0; d < spec.action_dim; ++d) psi_csv << 'a' << d << ',';
  psi_csv << "value\n";
  phi_csv << "value\n";

  std::size_t n_cells = 1;
  for (std::size_t r : grid_res) n_cells *= r;
  std::vector<double> x(spec.state_dim);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    std::size_t rem = cell;
    for (std::size_t d = spec.state_dim; d-- > 0;) {
      const std::size_t idx = rem % grid_res[d];
      rem /= grid_res[d];
      const Interval& b = spec.sample_bounds[d];
      x[d] = b.lo + (static_cast<double>(idx) + 0.5) * b.width() /
                        static_cast<double>(grid_res[d]);
    }
    const ActionVector a = model.policy(x);
    const double psi = model.psi(x, a.coords);
    for (double c : x) psi_csv << format_g17(c) << ',';
    for (double c : a.coords) psi_csv << format_g17(c) << ',';
    psi_csv << format_g17(psi) << '\n';
    for (double c : x) phi_csv << format_g17(c) << ',';
    phi_csv << format_g17(model.phi(x)) << '\n';
  }
  run.emit("psi_grid.csv", psi_csv.str());
  run.emit("phi_grid.csv", phi_csv.str());
  run.finish();
  std::cout << "evaluated " << n_cells << " grid points\n";
}

void run_filter_eval(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys(
      {"env", "sigma", "dt", "model", "epsilon", "episodes", "horizon", "ref"});
  const std::string env_id = describe_env(config);
  const fs::path model_dir = config.get_string("model");
  require_file(model_dir, "model directory");
  filter::FilterConfig filter_config;
  filter_config.epsilon = config.get_double("epsilon", 0.2);
  filter_config.validate();
  const std::size_t episodes = config.get_size("episodes", 100);
  const std::size_t horizon = config.get_size("horizon", 200);
  const std::string ref_id = config.get_string("ref", "random");

  CommandRun run("filter-eval", out, seed);
  run.resolved("env", env_id);
  run.resolved("model", model_dir.string());
  run.resolved("epsilon", filter_config.epsilon);
  run.resolved("episodes", static_cast<std::uint64_t>(episodes));
  run.resolved("horizon", static_cast<std::uint64_t>(horizon));
  run.resolved("ref", ref_id);
  for (const auto& [k, v] : config.env_overrides()) run.resolved(k, v);

  const auto env = envs::make_environment(env_id, config.env_overrides());
  const learn::EigenModel model = learn::EigenModel::load(model_dir);

  filter::ReferencePolicy reference;
  if (ref_id == "random") {
    reference = filter::uniform_random_reference(env->spec());
  } else if (ref_id.rfind("constant:", 0) == 0) {
    ActionVector a;
    std::stringstream ss(ref_id.substr(9));
    std::string token;
    while (std::getline(ss, token, ','))
      a.coords.push_back(parse_double(token));
    if (a.dim() != env->spec().action_dim)
      throw UsageError("constant reference has wrong action dimension");
    reference = filter::constant_reference(a);
  } else {
    throw UsageError("unknown reference policy '" + ref_id +
                     "' (use random or constant:<a0,...>)");
  }

  Rng rng(seed);
  const filter::FilterEvalResult result = filter::evaluate_filter(
      *env, model, filter_config, reference, episodes, horizon, rng);
  const filter::FilterReport& r = result.report;

  std::ostringstream report_csv;
  report_csv << "n_episodes,horizon,violations_filtered,violations_unfiltered,"
                "intervention_rate,mean_survival_filtered,mean_survival_"
                "unfiltered\n"
             << r.n_episodes << ',' << r.horizon << ',' << r.violations_filtered
             << ',' << r.violations_unfiltered << ','
             << format_g17(r.intervention_rate) << ','
             << format_g17(r.mean_survival_filtered) << ','
             << format_g17(r.mean_survival_unfiltered) << '\n';
  run.emit("report.csv", report_csv.str());

  std::ostringstream trace_csv;
  trace_csv << "episode,t,phi,intervened\n";
  for (const auto& e : result.trace)
    trace_csv << e.episode << ',' << e.t << ',' << format_g17(e.phi) << ','
              << (e.intervened ? 1 : 0) << '\n';
  run.emit("phi_trace.csv", trace_csv.str());
  run.finish();

  std::cout << "violations filtered/unfiltered: " << r.violations_filtered
            << "/" << r.violations_unfiltered << ", intervention rate "
            << r.intervention_rate << "\n";
}

void run_baseline_hj(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys({"env", "sigma", "dt", "grid_res", "action_res",
                             "n_mc", "gamma_d", "tol", "max_iters"});
  const std::string env_id = describe_env(config);
  if (env_id != "dint")
    throw UsageError("baseline-hj is defined for the dint environment");
  const auto env = envs::make_environment(env_id, config.env_overrides());
  const auto grid_res =
      parse_grid_res(config.get_string("grid_res", "101"), env->spec().state_dim);
  const std::size_t action_res = config.get_size("action_res", 11);
  const std::size_t n_mc = config.get_size("n_mc", 1000);
  const double gamma_d = config.get_double("gamma_d", 0.99);
  const double tol = config.get_double("tol", 1e-6);
  const std::size_t max_iters = config.get_size("max_iters", 20000);

  CommandRun run("baseline-hj", out, seed);
  run.resolved("env", env_id);
  run.resolved("grid_res", config.get_string("grid_res", "101"));
  run.resolved("action_res", static_cast<std::uint64_t>(action_res));
  run.resolved("n_mc", static_cast<std::uint64_t>(n_mc));
  run.resolved("gamma_d", gamma_d);
  run.resolved("tol", tol);
  run.resolved("max_iters", static_cast<std::uint64_t>(max_iters));
  for (const auto& [k, v] : config.env_overrides()) run.resolved(k, v);

  Rng rng(seed);
  const envs::DiscretizedSystem system =
      envs::discretize(*env, grid_res, action_res, n_mc, rng);

  // Margin with super-zero level set equal to the safe box.
  std::vector<double> margin(system.n_states());
  for (std::size_t s = 0; s < system.n_states(); ++s) {
    double linf = 0.0;
    for (double c : system.states[s]) linf = std::max(linf, std::abs(c));
    margin[s] = 1.0 - linf;
  }
  const std::vector<double> value = envs::discounted_reachability_vi(
      system, margin, gamma_d, tol, max_iters);

  std::size_t super_zero = 0;
  std::ostringstream csv;
  for (std::size_t d = 0; d < env->spec().state_dim; ++d) csv << 's' << d << ',';
  csv << "value\n";
  for (std::size_t s = 0; s < system.n_states(); ++s) {
    for (double c : system.states[s]) csv << format_g17(c) << ',';
    csv << format_g17(value[s]) << '\n';
    if (value[s] > 0.0) ++super_zero;
  }
  run.emit("value_grid.csv", csv.str());
  run.finish();

  const double fraction =
      static_cast<double>(super_zero) / static_cast<double>(system.n_states());
  std::cout << "super-zero set: " << super_zero << " of " << system.n_states()
            << " cells (" << fraction << ")\n";
}

void run_gradcheck(RunConfig config, const fs::path& out, std::uint64_t seed) {
  config.require_known_keys({"rounds", "h"});
  const std::size_t rounds = config.get_size("rounds", 10);
  const double h = config.get_double("h", 1e-5);

  CommandRun run("gradcheck", out, seed);
  run.resolved("rounds", static_cast<std::uint64_t>(rounds));
  run.resolved("h", h);

  const learn::LossGradCheckReport report =
      learn::check_loss_gradients(seed, rounds, h);

  std::ostringstream txt;
  txt << "j_eig " << format_g17(report.eig) << "\nj_plus " << format_g17(report.pos)
      << "\nj_policy " << format_g17(report.policy) << "\nj_phi "
      << format_g17(report.phi) << "\nmax " << format_g17(report.overall) << "\n";
  run.emit("gradcheck.txt", txt.str());
  run.finish();

  std::cout << "max relative gradient error " << format_g17(report.overall)
            << " over " << rounds << " rounds\n";
  if (!(report.overall < 1e-4))
    throw NumericalError("gradient check failed: max relative error " +
                         format_g17(report.overall));
}

}  // namespace eigensafe::cli
