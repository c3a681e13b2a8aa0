#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eigensafe/environment.hpp"
#include "eigensafe/tabular/finite_mdp.hpp"

namespace eigensafe::envs {

// Finite absorbing-chain model of an environment on a cell-centered grid:
// per (state, action) one sparse transition row estimated from Monte-Carlo
// draws with nearest-cell assignment. Cells whose center is unsafe are
// dropped; mass landing in them or on the terminal state is absorbed.
struct DiscretizedSystem {
  std::vector<std::size_t> grid_res;
  std::vector<Interval> grid_bounds;
  std::vector<double> cell_width;

  std::vector<ActionVector> actions;
  std::vector<std::vector<double>> states;  // compact id -> cell center
  std::vector<std::int64_t> cell_to_state;  // full-grid cell -> id or -1

  // CSR rows ordered state-major, action-minor.
  std::vector<std::uint64_t> row_offset;
  std::vector<std::uint32_t> col;
  std::vector<double> prob;
  std::vector<double> to_unsafe;

  std::size_t n_states() const { return states.size(); }
  std::size_t n_actions() const { return actions.size(); }
  std::size_t n_rows() const { return to_unsafe.size(); }
  std::size_t row_id(std::size_t state, std::size_t action) const {
    return state * actions.size() + action;
  }

  // Nearest compact state of in-bounds coordinates, or -1 for dropped cells.
  std::int64_t state_of(std::span<const double> coords) const;

  // sum_y P(y|x,u) value[y] over the sparse row.
  double row_expectation(std::size_t row, std::span<const double> value) const;
};

// Builds the grid model with n_mc Monte-Carlo draws per (cell, action) and a
// uniformly spaced action grid including the interval endpoints. Rows sum to
// one exactly by construction. Refuses up front when the worst-case sparse
// storage estimate exceeds memory_cap_bytes.
DiscretizedSystem discretize(const Environment& env,
                             std::span<const std::size_t> grid_res,
                             std::size_t action_res, std::size_t n_mc,
                             Rng& rng,
                             std::size_t memory_cap_bytes = std::size_t{8} << 30);

// Dominant eigenpair of the closed loop under a fixed deterministic policy
// (one action index per state).
tabular::EigenPair closed_loop_eigpair(const DiscretizedSystem& system,
                                       std::span<const std::size_t> policy,
                                       double tol = 1e-10,
                                       std::size_t max_iters = 100000);

struct OptimalSafetyResult {
  double gamma = 0.0;
  std::vector<double> phi;            // state eigenfunction, sup-norm 1
  std::vector<std::size_t> policy;    // greedy-stable deterministic policy
  std::size_t improvement_rounds = 0;
};

// Greedy eigen-policy iteration: alternate the closed-loop dominant eigenpair
// with argmax_u E[phi(x+) | x, u] until the policy is stable. The eigenvalue
// sequence is non-decreasing.
OptimalSafetyResult optimal_safety_policy(const DiscretizedSystem& system,
                                          double tol = 1e-10,
                                          std::size_t max_rounds = 100);

// Sparse-row variant of the discounted-reachability baseline.
std::vector<double> discounted_reachability_vi(const DiscretizedSystem& system,
                                               std::span<const double> margin,
                                               double gamma_discount,
                                               double tol,
                                               std::size_t max_iters);

}  // namespace eigensafe::envs
