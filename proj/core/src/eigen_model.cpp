#include "eigensafe/learn/eigen_model.hpp"

#include <cmath>

#include "eigensafe/error.hpp"
#include "eigensafe/nn/model_io.hpp"

namespace eigensafe::learn {

void squash_action(std::span<const double> raw,
                   std::span<const Interval> bounds, std::span<double> out) {
  // Softsign rather than tanh: its polynomially decaying slope lets the
  // policy escape a saturated rail within the fixed step budget.
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = bounds[i].center() +
             bounds[i].half_width() * raw[i] / (1.0 + std::abs(raw[i]));
}

double EigenModel::psi(std::span<const double> state,
                       std::span<const double> action) const {
  if (state.size() + action.size() != psi_net.input_dim())
    throw ContractError("psi: state/action dimensions do not match the network");
  thread_local std::vector<double> xu;
  xu.assign(state.begin(), state.end());
  xu.insert(xu.end(), action.begin(), action.end());
  return psi_net.forward_scalar(xu);
}

ActionVector EigenModel::policy(std::span<const double> state) const {
  const std::vector<double> raw = policy_net.forward(state);
  ActionVector a;
  a.coords.resize(raw.size());
  squash_action(raw, action_bounds, a.coords);
  return a;
}

double EigenModel::phi(std::span<const double> state) const {
  if (phi_net) return phi_net->forward_scalar(state);
  const ActionVector a = policy(state);
  return psi(state, a.coords);
}

EigenModel EigenModel::init(std::size_t state_dim, std::size_t action_dim,
                            std::span<const Interval> action_bounds,
                            double lambda_init, Rng& rng,
                            std::size_t psi_hidden, std::size_t policy_hidden) {
  if (action_bounds.size() != action_dim)
    throw ContractError("action bounds do not match action dimension");
  EigenModel model;
  model.lambda = lambda_init;
  Rng psi_rng = rng.stream(0);
  Rng policy_rng = rng.stream(1);
  model.psi_net = nn::Mlp::he_init({state_dim + action_dim, psi_hidden, 1}, psi_rng);
  model.policy_net = nn::Mlp::he_init({state_dim, policy_hidden, action_dim}, policy_rng);
  model.action_bounds.assign(action_bounds.begin(), action_bounds.end());
  return model;
}

void EigenModel::save(const std::filesystem::path& dir) const {
  if (!(lambda > 0.0)) throw ValidationError("model lambda must be positive");
  std::filesystem::create_directories(dir);
  nn::save_mlp(dir / "psi_net.txt", psi_net);
  nn::save_mlp(dir / "policy_net.txt", policy_net, action_bounds);
  nn::save_scalar(dir / "lambda.txt", lambda);
  if (phi_net) nn::save_mlp(dir / "phi_net.txt", *phi_net);
}

EigenModel EigenModel::load(const std::filesystem::path& dir) {
  EigenModel model;
  model.psi_net = nn::load_mlp(dir / "psi_net.txt").net;
  auto policy = nn::load_mlp(dir / "policy_net.txt");
  if (policy.squash.empty())
    throw ValidationError("policy network file is missing squash bounds");
  model.policy_net = std::move(policy.net);
  model.action_bounds = std::move(policy.squash);
  model.lambda = nn::load_scalar(dir / "lambda.txt");
  if (!(model.lambda > 0.0))
    throw ValidationError("model lambda must be positive");
  if (std::filesystem::exists(dir / "phi_net.txt"))
    model.phi_net = nn::load_mlp(dir / "phi_net.txt").net;
  if (model.psi_net.input_dim() !=
      model.policy_net.input_dim() + model.policy_net.output_dim())
    throw ValidationError("psi and policy network dimensions are inconsistent");
  return model;
}

}  // namespace eigensafe::learn
