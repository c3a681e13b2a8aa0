#include "eigensafe/tabular/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eigensafe/error.hpp"

namespace eigensafe::tabular {

void TabularKernel::validate(double tol) const {
  if (p.size() != n_states * n_actions * (n_states + 1))
    throw ValidationError("kernel storage has wrong size");
  for (std::size_t x = 0; x < n_states; ++x)
    for (std::size_t u = 0; u < n_actions; ++u) {
      double sum = 0.0;
      for (double v : row(x, u)) {
        if (v < 0.0) throw ValidationError("negative kernel probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol)
        throw ValidationError("kernel row (" + std::to_string(x) + ", " +
                              std::to_string(u) + ") sums to " +
                              std::to_string(sum));
    }
}

TabularPolicy TabularPolicy::deterministic(std::span<const std::size_t> actions,
                                           std::size_t n_actions) {
  TabularPolicy policy;
  policy.probs = Matrix(actions.size(), n_actions);
  for (std::size_t x = 0; x < actions.size(); ++x) {
    if (actions[x] >= n_actions)
      throw ContractError("policy action index out of range");
    policy.probs(x, actions[x]) = 1.0;
  }
  return policy;
}

TabularPolicy TabularPolicy::uniform(std::size_t n_states,
                                     std::size_t n_actions) {
  TabularPolicy policy;
  policy.probs = Matrix(n_states, n_actions, 1.0 / static_cast<double>(n_actions));
  return policy;
}

void TabularPolicy::validate(double tol) const {
  for (std::size_t x = 0; x < n_states(); ++x) {
    double sum = 0.0;
    for (double v : probs.row(x)) {
      if (v < 0.0) throw ValidationError("negative policy probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError("policy row " + std::to_string(x) + " sums to " +
                            std::to_string(sum));
  }
}

FiniteMdp closed_loop_matrix(const TabularKernel& kernel,
                             const TabularPolicy& policy) {
  kernel.validate();
  policy.validate();
  if (policy.n_states() != kernel.n_states ||
      policy.n_actions() != kernel.n_actions)
    throw ContractError("policy shape does not match kernel");
  const std::size_t n = kernel.n_states;
  FiniteMdp mdp;
  mdp.transition = Matrix(n, n);
  mdp.to_unsafe.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t u = 0; u < kernel.n_actions; ++u) {
      const double w = policy.probs(x, u);
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < n; ++y)
        mdp.transition(x, y) += w * kernel.prob(x, u, y);
      mdp.to_unsafe[x] += w * kernel.unsafe_prob(x, u);
    }
  }
  mdp.validate(1e-9);
  return mdp;
}

FiniteMdp augmented_mdp(const TabularKernel& kernel,
                        const TabularPolicy& policy) {
  kernel.validate();
  policy.validate();
  if (policy.n_states() != kernel.n_states ||
      policy.n_actions() != kernel.n_actions)
    throw ContractError("policy shape does not match kernel");
  const std::size_t n = kernel.n_states;
  const std::size_t m = kernel.n_actions;
  FiniteMdp mdp;
  mdp.transition = Matrix(n * m, n * m);
  mdp.to_unsafe.assign(n * m, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t u = 0; u < m; ++u) {
      const std::size_t i = x * m + u;
      for (std::size_t y = 0; y < n; ++y) {
        const double py = kernel.prob(x, u, y);
        if (py == 0.0) continue;
        for (std::size_t v = 0; v < m; ++v)
          mdp.transition(i, y * m + v) += py * policy.probs(y, v);
      }
      mdp.to_unsafe[i] = kernel.unsafe_prob(x, u);
    }
  mdp.validate(1e-9);
  return mdp;
}

EigenPair state_action_eigpair(const TabularKernel& kernel,
                               const TabularPolicy& policy, double tol,
                               std::size_t max_iters) {
  return power_iteration(augmented_mdp(kernel, policy), tol, max_iters);
}

std::vector<std::size_t> greedy_improve(std::span<const double> psi,
                                        std::size_t n_states,
                                        std::size_t n_actions) {
  if (psi.size() != n_states * n_actions)
    throw ContractError("psi table has wrong size");
  for (double v : psi)
    if (!std::isfinite(v)) throw ContractError("psi table has non-finite entry");
  std::vector<std::size_t> actions(n_states, 0);
  for (std::size_t x = 0; x < n_states; ++x) {
    std::size_t best = 0;
    double best_v = psi[x * n_actions];
    for (std::size_t u = 1; u < n_actions; ++u)
      if (psi[x * n_actions + u] > best_v) {
        best_v = psi[x * n_actions + u];
        best = u;
      }
    actions[x] = best;
  }
  return actions;
}

std::vector<double> discounted_reachability_vi(const TabularKernel& kernel,
                                               std::span<const double> margin,
                                               double gamma_discount,
                                               double tol,
                                               std::size_t max_iters) {
  kernel.validate();
  const std::size_t n = kernel.n_states;
  if (margin.size() != n)
    throw ContractError("margin function has wrong length");
  for (double v : margin)
    if (!std::isfinite(v)) throw ContractError("margin has non-finite entry");
  if (!(gamma_discount > 0.0 && gamma_discount < 1.0))
    throw ContractError("discount must lie in (0, 1)");

  double unsafe_value = 0.0;
  for (double v : margin) unsafe_value = std::max(unsafe_value, std::abs(v));
  unsafe_value = -unsafe_value;

  std::vector<double> value(margin.begin(), margin.end());
  std::vector<double> next(n, 0.0);
  double residual = 0.0;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    for (std::size_t x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < kernel.n_actions; ++u) {
        double exp_v = kernel.unsafe_prob(x, u) * unsafe_value;
        for (std::size_t y = 0; y < n; ++y)
          exp_v += kernel.prob(x, u, y) * value[y];
        best = std::max(best, exp_v);
      }
      next[x] = (1.0 - gamma_discount) * margin[x] +
                gamma_discount * std::min(margin[x], best);
    }
    residual = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      residual = std::max(residual, std::abs(next[x] - value[x]));
    value.swap(next);
    if (residual <= tol) return value;
  }
  throw NumericalError("discounted reachability VI did not converge in " +
                       std::to_string(max_iters) + " sweeps (residual " +
                       std::to_string(residual) + ")");
}

}  // namespace eigensafe::tabular
