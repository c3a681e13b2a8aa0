#pragma once

#include <filesystem>
#include <vector>

#include "eigensafe/learn/losses.hpp"

namespace eigensafe::learn {

struct TrainRecord {
  std::size_t step = 0;
  double j_eig = 0.0;
  double j_plus = 0.0;
  double j_policy = 0.0;
  double lambda = 0.0;
};

struct TrainLog {
  // Record 0 holds the pre-training losses; record k the step-k minibatch
  // losses with lambda after the update.
  std::vector<TrainRecord> records;

  void write_csv(const std::filesystem::path& path) const;
};

struct TrainResult {
  EigenModel model;
  TrainLog log;
};

// Joint offline training. Each step samples a minibatch uniformly with
// replacement, updates (lambda, psi) with one Adam instance on
// J_eig + J_plus, then updates the policy on J_policy against the freshly
// updated psi. Deterministic under config.seed.
TrainResult train(const Dataset& dataset, const TrainConfig& config,
                  std::span<const Interval> action_bounds);

// Regression of a state eigenfunction network onto psi(x, pi(x)) with psi and
// the policy frozen; initializes model.phi_net when absent. Returns the final
// minibatch loss.
double train_phi(EigenModel& model, const Dataset& dataset, std::size_t n_steps,
                 double lr, std::size_t batch_size, Rng& rng);

}  // namespace eigensafe::learn
