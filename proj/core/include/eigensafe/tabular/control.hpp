#pragma once

#include <span>
#include <vector>

#include "eigensafe/matrix.hpp"
#include "eigensafe/tabular/finite_mdp.hpp"

namespace eigensafe::tabular {

// Controlled transition kernel P(y | x, u) over the safe states plus the
// absorbing unsafe state. Row (x, u) has n_states + 1 entries; the last one
// is the unsafe-state mass.
struct TabularKernel {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::vector<double> p;

  TabularKernel() = default;
  TabularKernel(std::size_t states, std::size_t actions)
      : n_states(states),
        n_actions(actions),
        p(states * actions * (states + 1), 0.0) {}

  double& prob(std::size_t x, std::size_t u, std::size_t y) {
    return p[(x * n_actions + u) * (n_states + 1) + y];
  }
  double prob(std::size_t x, std::size_t u, std::size_t y) const {
    return p[(x * n_actions + u) * (n_states + 1) + y];
  }
  double unsafe_prob(std::size_t x, std::size_t u) const {
    return prob(x, u, n_states);
  }
  std::span<const double> row(std::size_t x, std::size_t u) const {
    return {p.data() + (x * n_actions + u) * (n_states + 1), n_states + 1};
  }

  // Rows stochastic over S including the unsafe state, within tol.
  void validate(double tol = 1e-12) const;
};

// Per-state distribution over actions; rows of `probs` sum to 1.
struct TabularPolicy {
  Matrix probs;

  std::size_t n_states() const { return probs.rows(); }
  std::size_t n_actions() const { return probs.cols(); }

  static TabularPolicy deterministic(std::span<const std::size_t> actions,
                                     std::size_t n_actions);
  static TabularPolicy uniform(std::size_t n_states, std::size_t n_actions);

  void validate(double tol = 1e-12) const;
};

// Restriction of the closed-loop kernel sum_u pi(u|x) P(y|x,u) to the safe set.
FiniteMdp closed_loop_matrix(const TabularKernel& kernel,
                             const TabularPolicy& policy);

// The one-step operator on state-action pairs, indexed x * n_actions + u:
// entry ((x,u), (y,v)) = P(y|x,u) pi(v|y).
FiniteMdp augmented_mdp(const TabularKernel& kernel,
                        const TabularPolicy& policy);

// Dominant eigenpair of the state-action operator; its eigenvalue matches the
// closed-loop operator's and averaging the eigenfunction over the policy
// recovers the state eigenfunction up to scale.
EigenPair state_action_eigpair(const TabularKernel& kernel,
                               const TabularPolicy& policy, double tol = 1e-12,
                               std::size_t max_iters = 100000);

// Greedy deterministic improvement: argmax_u psi(x, u), ties to the lowest
// action index. `psi` is indexed x * n_actions + u.
std::vector<std::size_t> greedy_improve(std::span<const double> psi,
                                        std::size_t n_states,
                                        std::size_t n_actions);

// Discounted-reachability value iteration baseline:
//   V(x) = (1 - gamma_d) l(x) + gamma_d min{ l(x), max_u E[V(x+)] }.
// The unsafe state's value is pinned to -max|l| so one-step exits carry a
// strictly negative signal into the recursion.
std::vector<double> discounted_reachability_vi(const TabularKernel& kernel,
                                               std::span<const double> margin,
                                               double gamma_discount,
                                               double tol,
                                               std::size_t max_iters);

}  // namespace eigensafe::tabular
