#pragma once

#include <functional>
#include <span>

namespace eigensafe::nn {

// Central-difference check of an analytic gradient. `loss` re-evaluates the
// objective against the live parameter buffer; each parameter is perturbed by
// +-h in turn and restored. Returns the max over parameters of
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
double grad_check(std::span<double> params, const std::function<double()>& loss,
                  std::span<const double> analytic, double h = 1e-5);

}  // namespace eigensafe::nn
