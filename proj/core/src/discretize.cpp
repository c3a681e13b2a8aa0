#include "eigensafe/envs/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "eigensafe/error.hpp"

namespace eigensafe::envs {

namespace {

// Static row partition over hardware threads; each chunk only writes its own
// slots, so the result is identical to the serial pass.
template <typename Fn>
void parallel_rows(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min(hw, n);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  const std::size_t chunk = (n + n_threads - 1) / n_threads;
  for (std::size_t t = 0; t < n_threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace

std::int64_t DiscretizedSystem::state_of(std::span<const double> coords) const {
  std::size_t cell = 0;
  for (std::size_t d = 0; d < grid_res.size(); ++d) {
    const double rel = (coords[d] - grid_bounds[d].lo) / cell_width[d];
    auto idx = static_cast<std::int64_t>(std::floor(rel));
    idx = std::clamp<std::int64_t>(idx, 0,
                                   static_cast<std::int64_t>(grid_res[d]) - 1);
    cell = cell * grid_res[d] + static_cast<std::size_t>(idx);
  }
  return cell_to_state[cell];
}

double DiscretizedSystem::row_expectation(std::size_t row,
                                          std::span<const double> value) const {
  double acc = 0.0;
  for (std::uint64_t k = row_offset[row]; k < row_offset[row + 1]; ++k)
    acc += prob[k] * value[col[k]];
  return acc;
}

DiscretizedSystem discretize(const Environment& env,
                             std::span<const std::size_t> grid_res,
                             std::size_t action_res, std::size_t n_mc,
                             Rng& rng, std::size_t memory_cap_bytes) {
  const EnvSpec& spec = env.spec();
  if (grid_res.size() != spec.state_dim)
    throw ContractError("grid resolution must give one entry per state dim");
  for (std::size_t r : grid_res)
    if (r < 2) throw ContractError("grid resolution must be >= 2 per dim");
  if (action_res < 2) throw ContractError("action resolution must be >= 2");
  if (spec.action_dim != 1)
    throw ContractError("discretize supports scalar-action environments");
  if (n_mc < 1) throw ContractError("n_mc must be >= 1");

  DiscretizedSystem sys;
  sys.grid_res.assign(grid_res.begin(), grid_res.end());
  sys.grid_bounds = spec.sample_bounds;
  sys.cell_width.resize(spec.state_dim);
  std::size_t n_cells = 1;
  for (std::size_t d = 0; d < spec.state_dim; ++d) {
    sys.cell_width[d] = spec.sample_bounds[d].width() / static_cast<double>(grid_res[d]);
    n_cells *= grid_res[d];
  }

  // Compact enumeration of cells whose center is safe.
  sys.cell_to_state.assign(n_cells, -1);
  std::vector<double> center(spec.state_dim);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    std::size_t rem = cell;
    for (std::size_t d = spec.state_dim; d-- > 0;) {
      const std::size_t idx = rem % grid_res[d];
      rem /= grid_res[d];
      center[d] = spec.sample_bounds[d].lo +
                  (static_cast<double>(idx) + 0.5) * sys.cell_width[d];
    }
    if (env.is_safe(center)) {
      sys.cell_to_state[cell] = static_cast<std::int64_t>(sys.states.size());
      sys.states.push_back(center);
    }
  }
  if (sys.states.empty()) throw ValidationError("no safe grid cells");

  const Interval action_interval = spec.action_bounds[0];
  for (std::size_t j = 0; j < action_res; ++j) {
    const double a = action_interval.lo +
                     action_interval.width() * static_cast<double>(j) /
                         static_cast<double>(action_res - 1);
    sys.actions.push_back(ActionVector{{a}});
  }

  const std::size_t n_rows = sys.states.size() * action_res;
  const std::size_t worst_entries = n_rows * std::min(n_mc, sys.states.size());
  const std::size_t estimate =
      worst_entries * (sizeof(std::uint32_t) + sizeof(double));
  if (estimate > memory_cap_bytes)
    throw ValidationError(
        "discretize: worst-case kernel storage estimate " +
        std::to_string(estimate) + " bytes exceeds the cap of " +
        std::to_string(memory_cap_bytes) +
        " bytes; lower the resolution or raise the cap");

  const Rng key(rng.next_u64());
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n_rows);
  std::vector<double> unsafe_mass(n_rows, 0.0);

  parallel_rows(n_rows, [&](std::size_t row) {
    const std::size_t state = row / action_res;
    const std::size_t action = row % action_res;
    Rng stream = key.stream(row);
    const StateVector x{sys.states[state], false};
    std::vector<std::uint32_t> hits;
    hits.reserve(n_mc);
    std::size_t terminal_hits = 0;
    for (std::size_t k = 0; k < n_mc; ++k) {
      const StateVector next = env.step(x, sys.actions[action], stream);
      if (next.terminal) {
        ++terminal_hits;
        continue;
      }
      const std::int64_t target = sys.state_of(next.coords);
      if (target < 0)
        ++terminal_hits;  // nearest cell was dropped as unsafe
      else
        hits.push_back(static_cast<std::uint32_t>(target));
    }
    std::sort(hits.begin(), hits.end());
    auto& entries = rows[row];
    const double inv = 1.0 / static_cast<double>(n_mc);
    for (std::size_t k = 0; k < hits.size();) {
      std::size_t j = k;
      while (j < hits.size() && hits[j] == hits[k]) ++j;
      entries.emplace_back(hits[k], static_cast<double>(j - k) * inv);
      k = j;
    }
    unsafe_mass[row] = static_cast<double>(terminal_hits) * inv;
  });

  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  sys.row_offset.resize(n_rows + 1);
  sys.col.reserve(total);
  sys.prob.reserve(total);
  sys.to_unsafe = std::move(unsafe_mass);
  for (std::size_t row = 0; row < n_rows; ++row) {
    sys.row_offset[row] = sys.col.size();
    for (const auto& [c, p] : rows[row]) {
      sys.col.push_back(c);
      sys.prob.push_back(p);
    }
  }
  sys.row_offset[n_rows] = sys.col.size();
  return sys;
}

tabular::EigenPair closed_loop_eigpair(const DiscretizedSystem& system,
                                       std::span<const std::size_t> policy,
                                       double tol, std::size_t max_iters) {
  const std::size_t n = system.n_states();
  if (policy.size() != n)
    throw ContractError("policy must give one action per state");
  return tabular::power_iteration(
      [&](std::span<const double> x, std::span<double> out) {
        for (std::size_t s = 0; s < n; ++s)
          out[s] = system.row_expectation(system.row_id(s, policy[s]), x);
      },
      n, tol, max_iters);
}

OptimalSafetyResult optimal_safety_policy(const DiscretizedSystem& system,
                                          double tol, std::size_t max_rounds) {
  const std::size_t n = system.n_states();
  const std::size_t m = system.n_actions();
  OptimalSafetyResult result;
  result.policy.assign(n, m / 2);  // start near the middle of the action range
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    const tabular::EigenPair pair =
        closed_loop_eigpair(system, result.policy, tol);
    result.gamma = pair.eigenvalue;
    result.phi = pair.eigenfunction;
    result.improvement_rounds = round;
    // Greedy improvement against the state eigenfunction: one-step expected
    // phi ranks actions the same way the state-action eigenfunction does.
    std::vector<std::size_t> improved(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t best = 0;
      double best_v = system.row_expectation(system.row_id(s, 0), result.phi);
      for (std::size_t u = 1; u < m; ++u) {
        const double v = system.row_expectation(system.row_id(s, u), result.phi);
        if (v > best_v) {
          best_v = v;
          best = u;
        }
      }
      improved[s] = best;
    }
    if (improved == result.policy) return result;
    result.policy = std::move(improved);
  }
  throw NumericalError("greedy eigen-policy iteration did not stabilize in " +
                       std::to_string(max_rounds) + " rounds");
}

std::vector<double> discounted_reachability_vi(const DiscretizedSystem& system,
                                               std::span<const double> margin,
                                               double gamma_discount,
                                               double tol, std::size_t max_iters) {
  const std::size_t n = system.n_states();
  const std::size_t m = system.n_actions();
  if (margin.size() != n) throw ContractError("margin has wrong length");
  if (!(gamma_discount > 0.0 && gamma_discount < 1.0))
    throw ContractError("discount must lie in (0, 1)");

  double unsafe_value = 0.0;
  for (double v : margin) unsafe_value = std::max(unsafe_value, std::abs(v));
  unsafe_value = -unsafe_value;

  std::vector<double> value(margin.begin(), margin.end());
  std::vector<double> next(n, 0.0);
  double residual = 0.0;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    parallel_rows(n, [&](std::size_t s) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < m; ++u) {
        const std::size_t row = system.row_id(s, u);
        const double exp_v = system.row_expectation(row, value) +
                             system.to_unsafe[row] * unsafe_value;
        best = std::max(best, exp_v);
      }
      next[s] = (1.0 - gamma_discount) * margin[s] +
                gamma_discount * std::min(margin[s], best);
    });
    residual = 0.0;
    for (std::size_t s = 0; s < n; ++s)
      residual = std::max(residual, std::abs(next[s] - value[s]));
    value.swap(next);
    if (residual <= tol) return value;
  }
  throw NumericalError("discounted reachability VI did not converge in " +
                       std::to_string(max_iters) + " sweeps (residual " +
                       std::to_string(residual) + ")");
}

}  // namespace eigensafe::envs
