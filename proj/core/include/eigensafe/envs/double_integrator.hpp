#pragma once

#include <string>

#include "eigensafe/environment.hpp"

namespace eigensafe::envs {

struct DoubleIntegratorParams {
  double dt = 0.05;
  double sigma = 1.0;          // 0 = deterministic, 1 = stochastic benchmark
  double action_limit = 0.5;   // A = [-action_limit, action_limit]
  double box_limit = 1.0;      // C = [-box_limit, box_limit]^2
};

// Discrete-time double integrator with one shared standard-normal draw per
// step scaling both noise rows:
//   p+ = p + dt v + dt^2/2 a + sigma dt/2 w
//   v+ = v + dt a + sigma sqrt(dt) w
class DoubleIntegratorEnv final : public Environment {
 public:
  explicit DoubleIntegratorEnv(DoubleIntegratorParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  const std::string& id() const override { return id_; }
  const DoubleIntegratorParams& params() const { return params_; }

 protected:
  bool unchecked_is_safe(std::span<const double> coords) const override;
  StateVector unchecked_step(const StateVector& state,
                             const ActionVector& action,
                             Rng& rng) const override;

 private:
  DoubleIntegratorParams params_;
  EnvSpec spec_;
  std::string id_ = "dint";
};

// Membership in the maximal control-invariant subset of the box for the
// deterministic dynamics. Uses the discrete-time stopping sequence (max
// braking, then an exact velocity-zeroing step), which differs from the
// continuous-time braking parabola by the per-step overshoot.
bool dint_invariant_set(double position, double velocity,
                        const DoubleIntegratorParams& params = {});

// Forward travel of the stopping sequence from speed v >= 0.
double dint_braking_travel(double speed, const DoubleIntegratorParams& params = {});

}  // namespace eigensafe::envs
