#include "eigensafe/nn/mlp.hpp"

#include <cmath>
#include <string>

#include "eigensafe/error.hpp"

namespace eigensafe::nn {

Mlp::Mlp(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw ContractError("Mlp needs at least two layer dims");
  std::size_t total = 0;
  layer_offset_.resize(n_layers());
  for (std::size_t l = 0; l < n_layers(); ++l) {
    if (dims_[l] == 0 || dims_[l + 1] == 0)
      throw ContractError("Mlp layer width must be positive");
    layer_offset_[l] = total;
    total += dims_[l + 1] * dims_[l] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::he_init(std::vector<std::size_t> dims, Rng& rng) {
  Mlp net(std::move(dims));
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(net.dims_[l]));
    for (double& w : net.weight(l)) w = scale * rng.normal();
  }
  return net;
}

std::span<double> Mlp::weight(std::size_t layer) {
  return {params_.data() + layer_offset_[layer], dims_[layer + 1] * dims_[layer]};
}
std::span<const double> Mlp::weight(std::size_t layer) const {
  return {params_.data() + layer_offset_[layer], dims_[layer + 1] * dims_[layer]};
}
std::span<double> Mlp::bias(std::size_t layer) {
  return {params_.data() + layer_offset_[layer] + dims_[layer + 1] * dims_[layer],
          dims_[layer + 1]};
}
std::span<const double> Mlp::bias(std::size_t layer) const {
  return {params_.data() + layer_offset_[layer] + dims_[layer + 1] * dims_[layer],
          dims_[layer + 1]};
}

std::span<const double> Mlp::forward(std::span<const double> input,
                                     Workspace& ws) const {
  if (input.size() != input_dim())
    throw ContractError("forward: input has dimension " +
                        std::to_string(input.size()) + ", expected " +
                        std::to_string(input_dim()));
  const std::size_t layers = n_layers();
  ws.act.resize(layers + 1);
  ws.pre.resize(layers);
  ws.act[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in_dim = dims_[l];
    const std::size_t out_dim = dims_[l + 1];
    const double* w = params_.data() + layer_offset_[l];
    const double* b = w + out_dim * in_dim;
    const double* a = ws.act[l].data();
    ws.pre[l].resize(out_dim);
    ws.act[l + 1].resize(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i) {
      double z = b[i];
      const double* wr = w + i * in_dim;
      for (std::size_t j = 0; j < in_dim; ++j) z += wr[j] * a[j];
      ws.pre[l][i] = z;
      // ReLU on hidden layers, identity on the output layer.
      ws.act[l + 1][i] = (l + 1 < layers && z < 0.0) ? 0.0 : z;
    }
  }
  return ws.act[layers];
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Workspace ws;
  auto out = forward(input, ws);
  return {out.begin(), out.end()};
}

double Mlp::forward_scalar(std::span<const double> input) const {
  if (output_dim() != 1)
    throw ContractError("forward_scalar needs a scalar-output network");
  thread_local Workspace ws;
  return forward(input, ws)[0];
}

void Mlp::run_backward(const Workspace& ws, std::span<const double> upstream,
                       double* grads, std::span<double> input_grad) const {
  if (upstream.size() != output_dim())
    throw ContractError("backward: upstream has wrong dimension");
  const std::size_t layers = n_layers();
  if (ws.act.size() != layers + 1)
    throw ContractError("backward: workspace not filled by forward()");

  auto& delta = const_cast<Workspace&>(ws).delta;
  delta.assign(upstream.begin(), upstream.end());
  std::vector<double> prev_delta;
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in_dim = dims_[l];
    const std::size_t out_dim = dims_[l + 1];
    // ReLU subgradient: zero at and below zero pre-activation.
    if (l + 1 < layers)
      for (std::size_t i = 0; i < out_dim; ++i)
        if (ws.pre[l][i] <= 0.0) delta[i] = 0.0;
    const double* a = ws.act[l].data();
    if (grads != nullptr) {
      double* gw = grads + layer_offset_[l];
      double* gb = gw + out_dim * in_dim;
      for (std::size_t i = 0; i < out_dim; ++i) {
        const double d = delta[i];
        if (d != 0.0) {
          double* gwr = gw + i * in_dim;
          for (std::size_t j = 0; j < in_dim; ++j) gwr[j] += d * a[j];
        }
        gb[i] += d;
      }
    }
    const bool need_input = l > 0 || !input_grad.empty();
    if (!need_input) break;
    prev_delta.assign(in_dim, 0.0);
    const double* w = params_.data() + layer_offset_[l];
    for (std::size_t i = 0; i < out_dim; ++i) {
      const double d = delta[i];
      if (d == 0.0) continue;
      const double* wr = w + i * in_dim;
      for (std::size_t j = 0; j < in_dim; ++j) prev_delta[j] += d * wr[j];
    }
    delta.swap(prev_delta);
  }
  if (!input_grad.empty()) {
    if (input_grad.size() != input_dim())
      throw ContractError("backward: input_grad has wrong dimension");
    for (std::size_t j = 0; j < input_dim(); ++j) input_grad[j] = delta[j];
  }
}

void Mlp::backward(const Workspace& ws, std::span<const double> upstream,
                   std::span<double> grads, std::span<double> input_grad) const {
  if (grads.size() != n_params())
    throw ContractError("backward: gradient buffer has wrong size");
  run_backward(ws, upstream, grads.data(), input_grad);
}

void Mlp::backward_input_only(const Workspace& ws,
                              std::span<const double> upstream,
                              std::span<double> input_grad) const {
  run_backward(ws, upstream, nullptr, input_grad);
}

}  // namespace eigensafe::nn
