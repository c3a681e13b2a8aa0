#include "eigensafe/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "eigensafe/error.hpp"

namespace eigensafe::nn {

double grad_check(std::span<double> params, const std::function<double()>& loss,
                  std::span<const double> analytic, double h) {
  if (analytic.size() != params.size())
    throw ContractError("grad_check: gradient size mismatch");
  double max_err = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double above = loss();
    params[i] = saved - h;
    const double below = loss();
    params[i] = saved;
    const double numeric = (above - below) / (2.0 * h);
    const double err = std::abs(analytic[i] - numeric) /
                       std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    max_err = std::max(max_err, err);
  }
  return max_err;
}

}  // namespace eigensafe::nn
