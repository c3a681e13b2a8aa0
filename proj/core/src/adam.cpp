#include "eigensafe/nn/adam.hpp"

#include <cmath>
#include <string>

#include "eigensafe/error.hpp"

namespace eigensafe::nn {

void AdamState::apply(std::span<double> params, std::span<const double> grads) {
  if (params.size() != first_moment.size() || grads.size() != params.size())
    throw ContractError("adam: parameter/gradient size mismatch");
  ++step_count;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g))
      throw NumericalError("adam: non-finite gradient at parameter " +
                           std::to_string(i));
    first_moment[i] = beta1 * first_moment[i] + (1.0 - beta1) * g;
    second_moment[i] = beta2 * second_moment[i] + (1.0 - beta2) * g * g;
    const double m_hat = first_moment[i] / bc1;
    const double v_hat = second_moment[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon);
  }
}

}  // namespace eigensafe::nn
