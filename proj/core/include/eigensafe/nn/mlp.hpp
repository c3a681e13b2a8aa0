#pragma once

#include <span>
#include <vector>

#include "eigensafe/rng.hpp"

namespace eigensafe::nn {

// Flat per-parameter gradient buffer mirroring an Mlp's layout.
using GradBuffer = std::vector<double>;

// Fully-connected network with ReLU hidden layers and an identity output
// layer. Parameters live in one flat buffer; each layer stores its weight
// matrix (out x in, row-major) followed by its bias vector. Gradients are
// hand-derived reverse mode for exactly this topology.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<std::size_t> dims);  // zero-initialized parameters

  // He fan-in initialization for the weights, zero biases.
  static Mlp he_init(std::vector<std::size_t> dims, Rng& rng);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t n_layers() const { return dims_.size() - 1; }
  std::size_t input_dim() const { return dims_.front(); }
  std::size_t output_dim() const { return dims_.back(); }
  std::size_t n_params() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::span<double> weight(std::size_t layer);
  std::span<const double> weight(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  std::vector<double> forward(std::span<const double> input) const;
  // Convenience for scalar-output networks.
  double forward_scalar(std::span<const double> input) const;

  // Reusable activation storage for forward/backward pairs.
  struct Workspace {
    std::vector<std::vector<double>> act;  // act[0] = input, act[L] = output
    std::vector<std::vector<double>> pre;  // pre-activations, layers 1..L
    std::vector<double> delta;             // backward scratch
  };

  std::span<const double> forward(std::span<const double> input,
                                  Workspace& ws) const;

  // Accumulates the gradient of upstream . output into `grads` (length
  // n_params). When `input_grad` is non-empty it receives the gradient with
  // respect to the input. Requires a workspace filled by forward().
  void backward(const Workspace& ws, std::span<const double> upstream,
                std::span<double> grads, std::span<double> input_grad = {}) const;

  // Input gradient only; parameter gradients are skipped.
  void backward_input_only(const Workspace& ws,
                           std::span<const double> upstream,
                           std::span<double> input_grad) const;

 private:
  void run_backward(const Workspace& ws, std::span<const double> upstream,
                    double* grads, std::span<double> input_grad) const;

  std::vector<std::size_t> dims_;
  std::vector<double> params_;
  std::vector<std::size_t> layer_offset_;  // offset of each layer's block
};

}  // namespace eigensafe::nn
