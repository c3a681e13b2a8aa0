#include "eigensafe/tabular/finite_mdp.hpp"

#include <cmath>
#include <string>

#include "eigensafe/error.hpp"

namespace eigensafe::tabular {

void FiniteMdp::validate(double tol) const {
  if (transition.rows() != transition.cols())
    throw ValidationError("transition matrix is not square");
  if (to_unsafe.size() != transition.rows())
    throw ValidationError("to_unsafe length does not match state count");
  for (std::size_t r = 0; r < transition.rows(); ++r) {
    double sum = 0.0;
    for (double v : transition.row(r)) {
      if (v < 0.0) throw ValidationError("negative transition probability");
      sum += v;
    }
    if (to_unsafe[r] < 0.0) throw ValidationError("negative escape mass");
    sum += to_unsafe[r];
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError("row " + std::to_string(r) +
                            " mass sums to " + std::to_string(sum));
  }
}

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

EigenPair power_iteration(const ApplyFn& apply, std::size_t n, double tol,
                          std::size_t max_iters, std::span<const double> init) {
  if (n == 0) throw ContractError("power_iteration: empty operator");
  std::vector<double> v(n, 1.0);
  if (!init.empty()) {
    if (init.size() != n)
      throw ContractError("power_iteration: init vector has wrong length");
    v.assign(init.begin(), init.end());
  }
  std::vector<double> w(n, 0.0);
  apply(v, w);
  double lambda = sup_norm(w);
  double residual = 0.0;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    if (lambda == 0.0) {
      // Operator annihilates the iterate: eigenvalue 0, any direction works.
      const double scale = sup_norm(v);
      if (scale > 0.0)
        for (double& x : v) x /= scale;
      return {0.0, std::move(v), iter, 0.0};
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / lambda;
    apply(v, w);
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(w[i] - lambda * v[i]));
    if (residual <= tol) return {lambda, std::move(v), iter, residual};
    lambda = sup_norm(w);
  }
  throw NumericalError(
      "power iteration did not converge in " + std::to_string(max_iters) +
      " iterations (last residual " + std::to_string(residual) +
      "); the dominant eigenvalue may have multiplicity > 1");
}

EigenPair power_iteration(const FiniteMdp& mdp, double tol,
                          std::size_t max_iters, std::span<const double> init) {
  const Matrix& m = mdp.transition;
  return power_iteration(
      [&m](std::span<const double> x, std::span<double> out) {
        m.matvec(x, out);
      },
      mdp.n_states(), tol, max_iters, init);
}

std::vector<std::vector<double>> exact_safety_dp(const FiniteMdp& mdp,
                                                 std::size_t horizon) {
  const std::size_t n = mdp.n_states();
  std::vector<std::vector<double>> z;
  z.reserve(horizon + 1);
  z.emplace_back(n, 1.0);
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<double> next(n, 0.0);
    mdp.transition.matvec(z.back(), next);
    z.push_back(std::move(next));
  }
  return z;
}

}  // namespace eigensafe::tabular
