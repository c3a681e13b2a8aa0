#include <algorithm>
#include <cmath>
#include <vector>

#include "eigensafe/learn/losses.hpp"
#include "eigensafe/nn/grad_check.hpp"
#include "eigensafe/rng.hpp"

namespace eigensafe::learn {

namespace {

std::vector<TransitionTuple> random_batch(std::size_t n, std::size_t sd,
                                          std::span<const Interval> bounds,
                                          Rng& rng) {
  std::vector<TransitionTuple> batch(n);
  for (auto& t : batch) {
    t.state.coords.resize(sd);
    for (double& c : t.state.coords) c = rng.normal();
    t.action.coords.resize(bounds.size());
    for (std::size_t j = 0; j < bounds.size(); ++j)
      t.action.coords[j] = rng.uniform(bounds[j].lo, bounds[j].hi);
    if (rng.uniform() < 0.25) {
      t.next_state = StateVector::unsafe(sd);
    } else {
      t.next_state.coords.resize(sd);
      for (double& c : t.next_state.coords) c = rng.normal();
    }
  }
  return batch;
}

// J_eig with the bootstrapped targets held constant, as the semi-gradient
// differentiates it.
double eig_objective_frozen(const EigenModel& model, Batch batch,
                            const TrainConfig& config,
                            std::span<const double> targets) {
  std::vector<double> xu;
  double residual_sum = 0.0;
  double max_psi = -1e300;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    xu.assign(batch[i].state.coords.begin(), batch[i].state.coords.end());
    xu.insert(xu.end(), batch[i].action.coords.begin(),
              batch[i].action.coords.end());
    const double psi = model.psi_net.forward_scalar(xu);
    const double r = targets[i] - model.lambda * psi;
    residual_sum += r * r;
    max_psi = std::max(max_psi, psi);
  }
  const double n = static_cast<double>(batch.size());
  return config.w_lambda / n * residual_sum +
         config.w_n * (max_psi - 1.0) * (max_psi - 1.0);
}

}  // namespace

LossGradCheckReport check_loss_gradients(std::uint64_t seed, std::size_t rounds,
                                         double h) {
  LossGradCheckReport report;
  Rng root(seed);
  for (std::size_t round = 0; round < rounds; ++round) {
    Rng rng = root.stream(round);
    const std::size_t sd = 2 + round % 2;
    const std::size_t ad = 1 + round % 2;
    std::vector<Interval> bounds(ad);
    for (auto& b : bounds) {
      const double half = rng.uniform(0.5, 1.5);
      b = {-half, half};
    }
    Rng init_rng = rng.stream(0);
    EigenModel model = EigenModel::init(sd, ad, bounds,
                                        rng.uniform(0.8, 1.2), init_rng,
                                        /*psi_hidden=*/12, /*policy_hidden=*/6);
    Rng phi_rng = rng.stream(1);
    model.phi_net = nn::Mlp::he_init({sd, 12, 1}, phi_rng);
    // Push roughly half the psi values negative so the hinge loss is active.
    if (round % 2 == 0) model.psi_net.bias(1)[0] = -0.5;

    Rng batch_rng = rng.stream(2);
    const auto batch = random_batch(8, sd, bounds, batch_rng);
    TrainConfig config;
    config.w_lambda = rng.uniform(1.0, 4.0);
    config.w_n = rng.uniform(0.5, 2.0);
    config.w_plus = rng.uniform(0.5, 2.0);

    // J_eig: psi parameters, then the exact lambda derivative.
    {
      std::vector<double> targets(batch.size(), 0.0);
      std::vector<double> xu;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        if (batch[i].next_state.terminal) continue;
        const ActionVector u_next = model.policy(batch[i].next_state.coords);
        targets[i] = model.psi(batch[i].next_state.coords, u_next.coords);
      }
      const EigLossResult analytic = eig_loss(model, batch, config);
      const auto objective = [&] {
        return eig_objective_frozen(model, batch, config, targets);
      };
      report.eig = std::max(report.eig,
                            nn::grad_check(model.psi_net.params(), objective,
                                           analytic.psi_grads, h));
      const double saved = model.lambda;
      model.lambda = saved + h;
      const double above = objective();
      model.lambda = saved - h;
      const double below = objective();
      model.lambda = saved;
      const double numeric = (above - below) / (2.0 * h);
      report.eig = std::max(
          report.eig, std::abs(analytic.d_lambda - numeric) /
                          std::max(1e-8, std::abs(analytic.d_lambda) +
                                             std::abs(numeric)));
    }

    {
      const PosLossResult analytic = pos_loss(model, batch, config);
      const auto objective = [&] {
        return pos_loss(model, batch, config).value;
      };
      report.pos = std::max(report.pos,
                            nn::grad_check(model.psi_net.params(), objective,
                                           analytic.psi_grads, h));
    }

    {
      const PolicyLossResult analytic = policy_loss(model, batch);
      const auto objective = [&] { return policy_loss(model, batch).value; };
      report.policy = std::max(
          report.policy, nn::grad_check(model.policy_net.params(), objective,
                                        analytic.policy_grads, h));
    }

    {
      const PhiLossResult analytic = phi_loss(model, batch);
      const auto objective = [&] { return phi_loss(model, batch).value; };
      report.phi = std::max(report.phi,
                            nn::grad_check(model.phi_net->params(), objective,
                                           analytic.phi_grads, h));
    }
  }
  report.overall = std::max({report.eig, report.pos, report.policy, report.phi});
  return report;
}

}  // namespace eigensafe::learn
