#pragma once

#include <numbers>
#include <string>

#include "eigensafe/environment.hpp"

namespace eigensafe::envs {

// Projects a value into the half-open interval [lo, hi) by shifting integer
// multiples of the interval length.
double wrap(double value, const Interval& interval);

struct DubinsParams {
  double dt = 0.05;
  double noise_std = 0.5;      // per-component N(0, noise_std^2)
  double action_limit = 1.0;   // turn rate, A = [-1, 1]
  Interval position_wrap{-3.0, 3.0};
  Interval heading_wrap{-std::numbers::pi, std::numbers::pi};
  double obstacle_radius = 1.0;
};

// Constant-speed Dubins car on a torus with a circular obstacle at the
// origin; the safe set is x^2 + y^2 >= r^2. Positions and heading wrap, with
// three independent noise draws per step (x, y, heading order):
//   x+  = wrap(x + cos(th) dt + z1 sqrt(dt))
//   y+  = wrap(y + sin(th) dt + z2 sqrt(dt))
//   th+ = wrap(th + a dt + z3 sqrt(dt))
// The successor is wrapped first, then checked against the obstacle.
class DubinsCarEnv final : public Environment {
 public:
  explicit DubinsCarEnv(DubinsParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  const std::string& id() const override { return id_; }
  const DubinsParams& params() const { return params_; }

 protected:
  bool unchecked_is_safe(std::span<const double> coords) const override;
  StateVector unchecked_step(const StateVector& state,
                             const ActionVector& action,
                             Rng& rng) const override;

 private:
  DubinsParams params_;
  EnvSpec spec_;
  std::string id_ = "dubins";
};

}  // namespace eigensafe::envs
