#include "eigensafe/learn/losses.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "eigensafe/error.hpp"
#include "eigensafe/format.hpp"

namespace eigensafe::learn {

void TrainConfig::validate() const {
  if (w_lambda < 0.0 || w_n < 0.0 || w_plus < 0.0)
    throw ValidationError("loss weights must be nonnegative");
  if (!(lr_psi > 0.0) || !(lr_policy > 0.0))
    throw ValidationError("learning rates must be positive");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(lambda_init > 0.0)) throw ValidationError("lambda_init must be positive");
}

bool TrainConfig::apply_entry(const std::string& key, const std::string& value) {
  if (key == "w_lambda") w_lambda = parse_double(value);
  else if (key == "w_n") w_n = parse_double(value);
  else if (key == "w_plus") w_plus = parse_double(value);
  else if (key == "lr_psi") lr_psi = parse_double(value);
  else if (key == "lr_policy") lr_policy = parse_double(value);
  else if (key == "batch_size") batch_size = static_cast<std::size_t>(std::stoull(value));
  else if (key == "n_steps") n_steps = static_cast<std::size_t>(std::stoull(value));
  else if (key == "lambda_init") lambda_init = parse_double(value);
  else if (key == "seed") seed = std::stoull(value);
  else return false;
  return true;
}

TrainConfig TrainConfig::from_entries(
    const std::map<std::string, std::string>& entries) {
  TrainConfig config;
  for (const auto& [key, value] : entries)
    if (!config.apply_entry(key, value))
      throw ValidationError("unknown training config key '" + key + "'");
  config.validate();
  return config;
}

TrainConfig TrainConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::string key, value;
    std::istringstream ls(line);
    if (!std::getline(ls, key, '=')) continue;
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    if (key.empty()) continue;
    if (!std::getline(ls, value))
      throw ValidationError("config line " + std::to_string(line_no) +
                            " has no '=' separator");
    trim(value);
    entries[key] = value;
  }
  return from_entries(entries);
}

namespace {

void check_batch(Batch batch, const EigenModel& model) {
  if (batch.empty()) throw ContractError("empty minibatch");
  const std::size_t sd = model.state_dim();
  const std::size_t ad = model.action_dim();
  if (batch.front().state.dim() != sd || batch.front().action.dim() != ad)
    throw ContractError("batch dimensions do not match the model");
}

void concat(std::span<const double> a, std::span<const double> b,
            std::vector<double>& out) {
  out.assign(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
}

}  // namespace

EigLossResult eig_loss(const EigenModel& model, Batch batch,
                       const TrainConfig& config) {
  check_batch(batch, model);
  const double n = static_cast<double>(batch.size());
  const double res_scale = config.w_lambda / n;

  EigLossResult result;
  result.psi_grads.assign(model.psi_net.n_params(), 0.0);

  nn::Mlp::Workspace psi_ws, target_ws;
  std::vector<double> xu, target_xu, squashed(model.action_dim());
  double residual_sum = 0.0;
  double max_psi = -std::numeric_limits<double>::infinity();
  std::vector<double> max_xu;

  for (const TransitionTuple& t : batch) {
    // Bootstrapped target, constant under differentiation; zero at the
    // absorbing state.
    double target = 0.0;
    if (!t.next_state.terminal) {
      const auto raw = model.policy_net.forward(t.next_state.coords, target_ws);
      squash_action(raw, model.action_bounds, squashed);
      concat(t.next_state.coords, squashed, target_xu);
      target = model.psi_net.forward(target_xu, target_ws)[0];
    }
    concat(t.state.coords, t.action.coords, xu);
    const double psi = model.psi_net.forward(xu, psi_ws)[0];
    const double r = target - model.lambda * psi;
    residual_sum += r * r;
    result.d_lambda += res_scale * (-2.0) * r * psi;
    const double upstream = res_scale * (-2.0) * r * model.lambda;
    model.psi_net.backward(psi_ws, std::span{&upstream, 1}, result.psi_grads);
    if (psi > max_psi) {
      max_psi = psi;
      max_xu = xu;
    }
  }

  result.value = res_scale * residual_sum +
                 config.w_n * (max_psi - 1.0) * (max_psi - 1.0);
  // Normalization pressure flows through the batch maximum only.
  if (config.w_n != 0.0) {
    model.psi_net.forward(max_xu, psi_ws);
    const double upstream = config.w_n * 2.0 * (max_psi - 1.0);
    model.psi_net.backward(psi_ws, std::span{&upstream, 1}, result.psi_grads);
  }
  if (!std::isfinite(result.value))
    throw NumericalError("eig_loss is non-finite");
  return result;
}

PosLossResult pos_loss(const EigenModel& model, Batch batch,
                       const TrainConfig& config) {
  check_batch(batch, model);
  const double scale = config.w_plus / static_cast<double>(batch.size());

  PosLossResult result;
  result.psi_grads.assign(model.psi_net.n_params(), 0.0);
  nn::Mlp::Workspace ws;
  std::vector<double> xu;
  for (const TransitionTuple& t : batch) {
    concat(t.state.coords, t.action.coords, xu);
    const double psi = model.psi_net.forward(xu, ws)[0];
    if (psi < 0.0) {
      result.value += scale * (-psi);
      const double upstream = -scale;
      model.psi_net.backward(ws, std::span{&upstream, 1}, result.psi_grads);
    }
  }
  if (!std::isfinite(result.value))
    throw NumericalError("pos_loss is non-finite");
  return result;
}

PolicyLossResult policy_loss(const EigenModel& model, Batch batch) {
  check_batch(batch, model);
  const std::size_t sd = model.state_dim();
  const std::size_t ad = model.action_dim();
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  PolicyLossResult result;
  result.policy_grads.assign(model.policy_net.n_params(), 0.0);
  nn::Mlp::Workspace policy_ws, psi_ws;
  std::vector<double> xu, squash_slope(ad), upstream_policy(ad);
  std::vector<double> psi_input_grad(sd + ad);

  for (const TransitionTuple& t : batch) {
    const auto raw = model.policy_net.forward(t.state.coords, policy_ws);
    xu.assign(t.state.coords.begin(), t.state.coords.end());
    xu.resize(sd + ad);
    for (std::size_t j = 0; j < ad; ++j) {
      const double denom = 1.0 + std::abs(raw[j]);
      xu[sd + j] = model.action_bounds[j].center() +
                   model.action_bounds[j].half_width() * raw[j] / denom;
      squash_slope[j] = model.action_bounds[j].half_width() / (denom * denom);
    }
    const double psi = model.psi_net.forward(xu, psi_ws)[0];
    result.value += -psi * inv_n;
    // d(-psi)/d raw = -dpsi/du * du/draw; psi parameters stay untouched.
    const double upstream_psi = -inv_n;
    model.psi_net.backward_input_only(psi_ws, std::span{&upstream_psi, 1},
                                      psi_input_grad);
    for (std::size_t j = 0; j < ad; ++j)
      upstream_policy[j] = psi_input_grad[sd + j] * squash_slope[j];
    model.policy_net.backward(policy_ws, upstream_policy, result.policy_grads);
  }
  if (!std::isfinite(result.value))
    throw NumericalError("policy_loss is non-finite");
  return result;
}

PhiLossResult phi_loss(const EigenModel& model, Batch batch) {
  if (!model.phi_net) throw ContractError("phi_loss requires a phi network");
  check_batch(batch, model);
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  PhiLossResult result;
  result.phi_grads.assign(model.phi_net->n_params(), 0.0);
  nn::Mlp::Workspace ws;
  for (const TransitionTuple& t : batch) {
    const ActionVector a = model.policy(t.state.coords);
    const double target = model.psi(t.state.coords, a.coords);
    const double value = model.phi_net->forward(t.state.coords, ws)[0];
    const double diff = value - target;
    result.value += diff * diff * inv_n;
    const double upstream = 2.0 * diff * inv_n;
    model.phi_net->backward(ws, std::span{&upstream, 1}, result.phi_grads);
  }
  if (!std::isfinite(result.value))
    throw NumericalError("phi_loss is non-finite");
  return result;
}

}  // namespace eigensafe::learn
