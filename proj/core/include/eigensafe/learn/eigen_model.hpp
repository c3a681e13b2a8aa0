#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "eigensafe/nn/mlp.hpp"
#include "eigensafe/types.hpp"

namespace eigensafe::learn {

// The learned triple: eigenvalue estimate lambda, state-action eigenfunction
// network psi, deterministic backup policy network, and optionally a state
// eigenfunction network phi. The policy network's raw output is squashed into
// the action bounds with a scaled tanh, so emitted actions are always valid.
struct EigenModel {
  double lambda = 1.0;
  nn::Mlp psi_net;     // (state_dim + action_dim) -> 1
  nn::Mlp policy_net;  // state_dim -> action_dim, squashed output
  std::vector<Interval> action_bounds;
  std::optional<nn::Mlp> phi_net;  // state_dim -> 1

  std::size_t state_dim() const { return policy_net.input_dim(); }
  std::size_t action_dim() const { return policy_net.output_dim(); }

  double psi(std::span<const double> state, std::span<const double> action) const;
  ActionVector policy(std::span<const double> state) const;
  // State safety value: phi_net when present, else psi(x, policy(x)).
  double phi(std::span<const double> state) const;

  static EigenModel init(std::size_t state_dim, std::size_t action_dim,
                         std::span<const Interval> action_bounds,
                         double lambda_init, Rng& rng,
                         std::size_t psi_hidden = 128,
                         std::size_t policy_hidden = 16);

  // Model directory layout: psi_net.txt, policy_net.txt (with squash bounds),
  // lambda.txt, and phi_net.txt when present.
  void save(const std::filesystem::path& dir) const;
  static EigenModel load(const std::filesystem::path& dir);
};

// out = center + half_width * tanh(raw), per dimension.
void squash_action(std::span<const double> raw,
                   std::span<const Interval> bounds, std::span<double> out);

}  // namespace eigensafe::learn
