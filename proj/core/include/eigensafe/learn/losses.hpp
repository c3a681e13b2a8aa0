#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "eigensafe/learn/eigen_model.hpp"
#include "eigensafe/nn/mlp.hpp"
#include "eigensafe/types.hpp"

namespace eigensafe::learn {

struct TrainConfig {
  double w_lambda = 3.0;
  double w_n = 1.0;
  double w_plus = 1.0;
  double lr_psi = 3e-4;
  double lr_policy = 2e-3;
  std::size_t batch_size = 2048;
  std::size_t n_steps = 4000;
  double lambda_init = 1.0;
  std::uint64_t seed = 0;

  void validate() const;

  // Returns false when the key is not a TrainConfig key.
  bool apply_entry(const std::string& key, const std::string& value);

  // Flat key=value text ('#' comments allowed); unknown keys are errors.
  static TrainConfig from_entries(const std::map<std::string, std::string>& entries);
  static TrainConfig from_file(const std::filesystem::path& path);
};

using Batch = std::span<const TransitionTuple>;

// Eigenpair residual loss:
//   (w_lambda/|B|) sum (psi(x+, pi(x+)) - lambda psi(x, u))^2
//     + w_n (max_B psi(x, u) - 1)^2
// The bootstrapped target psi(x+, pi(x+)) is treated as a constant
// (semi-gradient); it is zero for terminal successors. The normalization max
// runs over the minibatch and its gradient flows through the first argmax
// element only. The lambda gradient is exact.
struct EigLossResult {
  double value = 0.0;
  double d_lambda = 0.0;
  nn::GradBuffer psi_grads;
};
EigLossResult eig_loss(const EigenModel& model, Batch batch,
                       const TrainConfig& config);

// (w_plus/|B|) sum ReLU(-psi(x, u)); zero subgradient at psi = 0.
struct PosLossResult {
  double value = 0.0;
  nn::GradBuffer psi_grads;
};
PosLossResult pos_loss(const EigenModel& model, Batch batch,
                       const TrainConfig& config);

// -(1/|B|) sum psi(x, pi(x)); the gradient reaches the policy parameters
// through the action input of psi, and psi parameters receive none.
struct PolicyLossResult {
  double value = 0.0;
  nn::GradBuffer policy_grads;
};
PolicyLossResult policy_loss(const EigenModel& model, Batch batch);

// (1/|B|) sum (phi(x) - psi(x, pi(x)))^2 with psi and pi frozen.
struct PhiLossResult {
  double value = 0.0;
  nn::GradBuffer phi_grads;
};
PhiLossResult phi_loss(const EigenModel& model, Batch batch);

// Central-difference verification of all four loss gradients on randomly
// drawn models and minibatches. For J_eig the finite-difference objective
// freezes the bootstrapped targets, matching the semi-gradient definition.
struct LossGradCheckReport {
  double eig = 0.0;     // includes the lambda derivative
  double pos = 0.0;
  double policy = 0.0;
  double phi = 0.0;
  double overall = 0.0;
};
LossGradCheckReport check_loss_gradients(std::uint64_t seed,
                                         std::size_t rounds = 10,
                                         double h = 1e-5);

}  // namespace eigensafe::learn
