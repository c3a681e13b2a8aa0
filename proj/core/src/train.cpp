#include "eigensafe/learn/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "eigensafe/error.hpp"
#include "eigensafe/format.hpp"
#include "eigensafe/nn/adam.hpp"

namespace eigensafe::learn {

void TrainLog::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "step,j_eig,j_plus,j_policy,lambda\n";
  for (const TrainRecord& r : records)
    out << r.step << ',' << format_g17(r.j_eig) << ',' << format_g17(r.j_plus)
        << ',' << format_g17(r.j_policy) << ',' << format_g17(r.lambda) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::vector<TransitionTuple> sample_batch(const Dataset& dataset,
                                          std::size_t batch_size, Rng& rng) {
  std::vector<TransitionTuple> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i)
    batch.push_back(dataset.tuples[rng.uniform_index(dataset.size())]);
  return batch;
}

}  // namespace

TrainResult train(const Dataset& dataset, const TrainConfig& config,
                  std::span<const Interval> action_bounds) {
  config.validate();
  dataset.validate();

  Rng rng(config.seed);
  TrainResult result;
  result.model = EigenModel::init(dataset.state_dim(), dataset.action_dim(),
                                  action_bounds, config.lambda_init, rng);
  EigenModel& model = result.model;
  Rng batch_rng = rng.stream(2);

  const std::size_t n_psi = model.psi_net.n_params();
  // One Adam instance covers the psi parameters plus lambda as the last slot.
  nn::AdamState adam_psi(n_psi + 1, config.lr_psi);
  nn::AdamState adam_policy(model.policy_net.n_params(), config.lr_policy);
  std::vector<double> psi_params(n_psi + 1, 0.0);
  std::vector<double> psi_grads(n_psi + 1, 0.0);

  for (std::size_t step = 0; step <= config.n_steps; ++step) {
    const auto batch = sample_batch(dataset, config.batch_size, batch_rng);
    EigLossResult eig = eig_loss(model, batch, config);
    PosLossResult pos = pos_loss(model, batch, config);

    if (step > 0) {
      auto params = model.psi_net.params();
      std::copy(params.begin(), params.end(), psi_params.begin());
      psi_params[n_psi] = model.lambda;
      for (std::size_t i = 0; i < n_psi; ++i)
        psi_grads[i] = eig.psi_grads[i] + pos.psi_grads[i];
      psi_grads[n_psi] = eig.d_lambda;
      try {
        adam_psi.apply(psi_params, psi_grads);
      } catch (const NumericalError& e) {
        throw NumericalError("training step " + std::to_string(step) + ": " +
                             e.what());
      }
      std::copy(psi_params.begin(), psi_params.begin() + n_psi, params.begin());
      model.lambda = psi_params[n_psi];
    }

    PolicyLossResult pol = policy_loss(model, batch);
    if (step > 0) {
      try {
        adam_policy.apply(model.policy_net.params(), pol.policy_grads);
      } catch (const NumericalError& e) {
        throw NumericalError("training step " + std::to_string(step) + ": " +
                             e.what());
      }
    }

    if (!std::isfinite(eig.value) || !std::isfinite(pos.value) ||
        !std::isfinite(pol.value) || !std::isfinite(model.lambda))
      throw NumericalError("non-finite loss at training step " +
                           std::to_string(step));
    result.log.records.push_back(
        {step, eig.value, pos.value, pol.value, model.lambda});
  }
  return result;
}

double train_phi(EigenModel& model, const Dataset& dataset, std::size_t n_steps,
                 double lr, std::size_t batch_size, Rng& rng) {
  dataset.validate();
  if (batch_size < 1) throw ContractError("batch_size must be >= 1");
  if (!(lr > 0.0)) throw ContractError("learning rate must be positive");
  if (!model.phi_net) {
    Rng init_rng = rng.stream(0);
    model.phi_net = nn::Mlp::he_init({model.state_dim(), 128, 1}, init_rng);
  }
  Rng batch_rng = rng.stream(1);
  nn::AdamState adam(model.phi_net->n_params(), lr);
  double last = 0.0;
  for (std::size_t step = 0; step < n_steps; ++step) {
    const auto batch = sample_batch(dataset, batch_size, batch_rng);
    PhiLossResult loss = phi_loss(model, batch);
    adam.apply(model.phi_net->params(), loss.phi_grads);
    last = loss.value;
  }
  return last;
}

}  // namespace eigensafe::learn
