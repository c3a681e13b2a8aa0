#include "eigensafe/envs/dubins.hpp"

#include <array>
#include <cmath>

#include "eigensafe/error.hpp"

namespace eigensafe::envs {

double wrap(double value, const Interval& interval) {
  const double length = interval.width();
  double wrapped = value - length * std::floor((value - interval.lo) / length);
  // Guard the rounding edge cases of the floor-based reduction.
  if (wrapped >= interval.hi) wrapped -= length;
  if (wrapped < interval.lo) wrapped += length;
  return wrapped;
}

DubinsCarEnv::DubinsCarEnv(DubinsParams params) : params_(params) {
  if (!(params_.dt > 0.0)) throw ValidationError("dt must be positive");
  if (params_.noise_std < 0.0)
    throw ValidationError("noise std must be nonnegative");
  if (!(params_.position_wrap.lo < params_.position_wrap.hi) ||
      !(params_.heading_wrap.lo < params_.heading_wrap.hi))
    throw ValidationError("degenerate wrap interval");
  spec_.state_dim = 3;
  spec_.action_dim = 1;
  spec_.action_bounds = {{-params_.action_limit, params_.action_limit}};
  spec_.dt = params_.dt;
  spec_.sample_bounds = {params_.position_wrap, params_.position_wrap,
                         params_.heading_wrap};
  spec_.validate();
}

bool DubinsCarEnv::unchecked_is_safe(std::span<const double> coords) const {
  const double x = coords[0];
  const double y = coords[1];
  return x * x + y * y >= params_.obstacle_radius * params_.obstacle_radius;
}

StateVector DubinsCarEnv::unchecked_step(const StateVector& state,
                                         const ActionVector& action,
                                         Rng& rng) const {
  const double dt = params_.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double x = state.coords[0];
  const double y = state.coords[1];
  const double heading = state.coords[2];
  const double z1 = params_.noise_std * rng.normal();
  const double z2 = params_.noise_std * rng.normal();
  const double z3 = params_.noise_std * rng.normal();
  const double x_next =
      wrap(x + std::cos(heading) * dt + z1 * sqrt_dt, params_.position_wrap);
  const double y_next =
      wrap(y + std::sin(heading) * dt + z2 * sqrt_dt, params_.position_wrap);
  const double heading_next =
      wrap(heading + action.coords[0] * dt + z3 * sqrt_dt, params_.heading_wrap);
  if (!unchecked_is_safe(std::array{x_next, y_next, heading_next}))
    return StateVector::unsafe(3);
  return StateVector{{x_next, y_next, heading_next}, false};
}

}  // namespace eigensafe::envs
