#include "eigensafe/environment.hpp"

#include <string>

#include "eigensafe/error.hpp"

namespace eigensafe {

bool Environment::is_safe(std::span<const double> coords) const {
  if (coords.size() != spec().state_dim)
    throw ContractError("is_safe: expected " +
                        std::to_string(spec().state_dim) + " coordinates, got " +
                        std::to_string(coords.size()));
  return unchecked_is_safe(coords);
}

StateVector Environment::step(const StateVector& state,
                              const ActionVector& action, Rng& rng) const {
  const EnvSpec& s = spec();
  if (state.terminal)
    throw ContractError("step: cannot step from the terminal state");
  if (state.dim() != s.state_dim)
    throw ContractError("step: state has dimension " +
                        std::to_string(state.dim()) + ", expected " +
                        std::to_string(s.state_dim));
  if (action.dim() != s.action_dim)
    throw ContractError("step: action has dimension " +
                        std::to_string(action.dim()) + ", expected " +
                        std::to_string(s.action_dim));
  for (std::size_t i = 0; i < action.dim(); ++i)
    if (!s.action_bounds[i].contains(action.coords[i]))
      throw ContractError("step: action coordinate " + std::to_string(i) +
                          " = " + std::to_string(action.coords[i]) +
                          " outside [" + std::to_string(s.action_bounds[i].lo) +
                          ", " + std::to_string(s.action_bounds[i].hi) + "]");
  return unchecked_step(state, action, rng);
}

StateVector sample_safe_state(const Environment& env, Rng& rng) {
  const EnvSpec& s = env.spec();
  StateVector x;
  x.coords.resize(s.state_dim);
  while (true) {
    for (std::size_t d = 0; d < s.state_dim; ++d)
      x.coords[d] = rng.uniform(s.sample_bounds[d].lo, s.sample_bounds[d].hi);
    if (env.is_safe(x.coords)) return x;
  }
}

ActionVector sample_action(const EnvSpec& spec, Rng& rng) {
  ActionVector a;
  a.coords.resize(spec.action_dim);
  for (std::size_t d = 0; d < spec.action_dim; ++d)
    a.coords[d] = rng.uniform(spec.action_bounds[d].lo, spec.action_bounds[d].hi);
  return a;
}

std::vector<StateVector> rollout(const Environment& env, const PolicyFn& policy,
                                 const StateVector& x0, std::size_t horizon,
                                 Rng& rng) {
  if (x0.terminal) throw ContractError("rollout: initial state is terminal");
  std::vector<StateVector> trajectory;
  trajectory.reserve(horizon + 1);
  trajectory.push_back(x0);
  for (std::size_t t = 0; t < horizon; ++t) {
    const StateVector& x = trajectory.back();
    StateVector next = env.step(x, policy(x), rng);
    trajectory.push_back(std::move(next));
    if (trajectory.back().terminal) break;
  }
  return trajectory;
}

Dataset collect_uniform(const Environment& env, std::size_t n, Rng& rng) {
  if (n < 1) throw ContractError("collect_uniform: n must be >= 1");
  const Rng key(rng.next_u64());
  Dataset data;
  data.env_id = env.id();
  data.seed = rng.seed();
  data.tuples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng stream = key.stream(i);
    TransitionTuple& t = data.tuples[i];
    t.state = sample_safe_state(env, stream);
    t.action = sample_action(env.spec(), stream);
    t.next_state = env.step(t.state, t.action, stream);
  }
  return data;
}

std::vector<double> estimate_safety_probability(const Environment& env,
                                                const PolicyFn& policy,
                                                const StateVector& x0,
                                                std::size_t horizon,
                                                std::size_t n_episodes,
                                                Rng& rng) {
  if (n_episodes < 1)
    throw ContractError("estimate_safety_probability: n_episodes must be >= 1");
  const Rng key(rng.next_u64());
  std::vector<std::size_t> alive(horizon + 1, 0);
  for (std::size_t e = 0; e < n_episodes; ++e) {
    Rng stream = key.stream(e);
    const auto traj = rollout(env, policy, x0, horizon, stream);
    // Trajectory entries up to the first terminal one; survival at step t
    // means entry t exists and is live.
    for (std::size_t t = 0; t < traj.size(); ++t)
      if (!traj[t].terminal) ++alive[t];
  }
  std::vector<double> freq(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t)
    freq[t] = static_cast<double>(alive[t]) / static_cast<double>(n_episodes);
  return freq;
}

}  // namespace eigensafe
