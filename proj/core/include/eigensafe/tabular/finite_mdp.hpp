#pragma once

#include <functional>
#include <span>
#include <vector>

#include "eigensafe/matrix.hpp"

namespace eigensafe::tabular {

// Closed-loop transition kernel restricted to the safe set: a sub-stochastic
// matrix plus the per-state mass escaping to the absorbing unsafe state.
struct FiniteMdp {
  Matrix transition;
  std::vector<double> to_unsafe;

  std::size_t n_states() const { return transition.rows(); }

  // Entries nonnegative, every row sum + escape mass equal to 1 within tol.
  void validate(double tol = 1e-12) const;
};

struct EigenPair {
  double eigenvalue = 0.0;
  // Nonnegative, sup-norm 1.
  std::vector<double> eigenfunction;
  std::size_t iterations = 0;
  double residual = 0.0;
};

// out = M x for the linear operator being iterated.
using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

// Power iteration with sup-norm normalization. Convergence is declared on the
// residual ||M v - lambda v||_inf <= tol; non-convergence raises
// NumericalError carrying the last residual (a symptom of a near-degenerate
// dominant eigenvalue). `init` defaults to all-ones.
EigenPair power_iteration(const ApplyFn& apply, std::size_t n, double tol,
                          std::size_t max_iters,
                          std::span<const double> init = {});

EigenPair power_iteration(const FiniteMdp& mdp, double tol = 1e-12,
                          std::size_t max_iters = 100000,
                          std::span<const double> init = {});

// Safety-probability dynamic programming: Z(0) = 1, Z(t+1) = M Z(t).
// Returns horizon + 1 vectors.
std::vector<std::vector<double>> exact_safety_dp(const FiniteMdp& mdp,
                                                 std::size_t horizon);

}  // namespace eigensafe::tabular
