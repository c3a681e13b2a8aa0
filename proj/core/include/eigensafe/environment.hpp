#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eigensafe/rng.hpp"
#include "eigensafe/types.hpp"

namespace eigensafe {

// A stochastic safety-critical system: a transition sampler plus the analytic
// safe-set predicate. Leaving the safe set is permanent; step() reports it by
// returning the absorbing unsafe state.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual const std::string& id() const = 0;

  // Safe-set membership for raw coordinates.
  bool is_safe(std::span<const double> coords) const;

  // One transition sample. Preconditions: live state of the right dimension,
  // action inside the declared bounds (out-of-bounds actions are rejected,
  // never clipped). Deterministic given the generator state.
  StateVector step(const StateVector& state, const ActionVector& action,
                   Rng& rng) const;

 protected:
  virtual bool unchecked_is_safe(std::span<const double> coords) const = 0;
  virtual StateVector unchecked_step(const StateVector& state,
                                     const ActionVector& action,
                                     Rng& rng) const = 0;
};

// Uniform draw from C x A: rejection sampling of the state against the safe
// predicate, direct sampling of the action box.
StateVector sample_safe_state(const Environment& env, Rng& rng);
ActionVector sample_action(const EnvSpec& spec, Rng& rng);

using PolicyFn = std::function<ActionVector(const StateVector&)>;

// Closed-loop trajectory of at most horizon steps. The trajectory starts at
// x0 and stops at the first terminal entry; nothing is emitted past it.
std::vector<StateVector> rollout(const Environment& env, const PolicyFn& policy,
                                 const StateVector& x0, std::size_t horizon,
                                 Rng& rng);

// n transitions with (x, u) uniform over C x A and x+ sampled from the
// dynamics. Episode i uses a stream derived from (rng draw, i), so the result
// is reproducible and order-independent.
Dataset collect_uniform(const Environment& env, std::size_t n, Rng& rng);

// Entry t = fraction of episodes still safe at step t; length horizon + 1.
std::vector<double> estimate_safety_probability(const Environment& env,
                                                const PolicyFn& policy,
                                                const StateVector& x0,
                                                std::size_t horizon,
                                                std::size_t n_episodes,
                                                Rng& rng);

}  // namespace eigensafe
