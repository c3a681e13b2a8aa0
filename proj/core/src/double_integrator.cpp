#include "eigensafe/envs/double_integrator.hpp"

#include <array>
#include <cmath>

#include "eigensafe/error.hpp"

namespace eigensafe::envs {

DoubleIntegratorEnv::DoubleIntegratorEnv(DoubleIntegratorParams params)
    : params_(params) {
  if (!(params_.dt > 0.0)) throw ValidationError("dt must be positive");
  if (params_.sigma < 0.0) throw ValidationError("sigma must be nonnegative");
  spec_.state_dim = 2;
  spec_.action_dim = 1;
  spec_.action_bounds = {{-params_.action_limit, params_.action_limit}};
  spec_.dt = params_.dt;
  spec_.sample_bounds = {{-params_.box_limit, params_.box_limit},
                         {-params_.box_limit, params_.box_limit}};
  spec_.validate();
}

bool DoubleIntegratorEnv::unchecked_is_safe(std::span<const double> coords) const {
  return std::abs(coords[0]) <= params_.box_limit &&
         std::abs(coords[1]) <= params_.box_limit;
}

StateVector DoubleIntegratorEnv::unchecked_step(const StateVector& state,
                                                const ActionVector& action,
                                                Rng& rng) const {
  const double dt = params_.dt;
  const double p = state.coords[0];
  const double v = state.coords[1];
  const double a = action.coords[0];
  const double w = rng.normal();
  const double p_next = p + dt * v + 0.5 * dt * dt * a + 0.5 * params_.sigma * dt * w;
  const double v_next = v + dt * a + params_.sigma * std::sqrt(dt) * w;
  if (!unchecked_is_safe(std::array{p_next, v_next}))
    return StateVector::unsafe(2);
  return StateVector{{p_next, v_next}, false};
}

double dint_braking_travel(double speed, const DoubleIntegratorParams& params) {
  const double dt = params.dt;
  const double a_max = params.action_limit;
  double travel = 0.0;
  double v = speed;
  // Max braking until the remaining speed can be zeroed within one step.
  while (v > a_max * dt) {
    travel += dt * v - 0.5 * dt * dt * a_max;
    v -= a_max * dt;
  }
  if (v > 0.0) travel += 0.5 * dt * v;  // a = -v/dt stops exactly
  return travel;
}

bool dint_invariant_set(double position, double velocity,
                        const DoubleIntegratorParams& params) {
  if (std::abs(position) > params.box_limit ||
      std::abs(velocity) > params.box_limit)
    return false;
  // While braking, the position moves monotonically toward the wall ahead;
  // only the overshoot constraint in the motion direction binds.
  if (velocity >= 0.0)
    return position + dint_braking_travel(velocity, params) <= params.box_limit;
  return position - dint_braking_travel(-velocity, params) >= -params.box_limit;
}

}  // namespace eigensafe::envs
