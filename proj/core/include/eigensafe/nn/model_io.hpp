#pragma once

#include <filesystem>
#include <vector>

#include "eigensafe/nn/mlp.hpp"
#include "eigensafe/types.hpp"

namespace eigensafe::nn {

// Network file format: a text header with the layer dims and activation tag,
// an optional per-dimension output squash line, then the flat parameter list
// (row-major weights followed by biases, layer by layer) with 17 significant
// digits. Round-trips bit-exactly.
//
//   dims 3 128 1
//   act relu
//   squash -0.5 0.5        (optional)
//   <one parameter per line>
void save_mlp(const std::filesystem::path& path, const Mlp& net,
              std::span<const Interval> squash = {});

struct LoadedMlp {
  Mlp net;
  std::vector<Interval> squash;  // empty when the file has no squash line
};

LoadedMlp load_mlp(const std::filesystem::path& path);

void save_scalar(const std::filesystem::path& path, double value);
double load_scalar(const std::filesystem::path& path);

}  // namespace eigensafe::nn
