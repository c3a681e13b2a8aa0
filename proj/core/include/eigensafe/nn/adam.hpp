#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace eigensafe::nn {

// Adam with bias correction. The paper's tables fix only the learning rates;
// beta1/beta2/epsilon stay at the usual defaults.
struct AdamState {
  double lr;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step_count = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  AdamState(std::size_t n_params, double learning_rate)
      : lr(learning_rate), first_moment(n_params, 0.0),
        second_moment(n_params, 0.0) {}

  // One update in place. Throws NumericalError on non-finite gradients so
  // training aborts loudly instead of silently corrupting parameters.
  void apply(std::span<double> params, std::span<const double> grads);
};

}  // namespace eigensafe::nn
