#pragma once

#include <cstdint>
#include <filesystem>

#include "run_config.hpp"

namespace eigensafe::cli {

// Each command validates its configuration and input paths up front, writes
// its artifacts atomically into the output directory, and finishes with a
// manifest.json recording the resolved configuration and artifact checksums.
void run_toy_eigen(RunConfig config, const std::filesystem::path& out,
                   std::uint64_t seed);
void run_collect(RunConfig config, const std::filesystem::path& out,
                 std::uint64_t seed);
void run_train(RunConfig config, const std::filesystem::path& out,
               std::uint64_t seed);
void run_eval_grid(RunConfig config, const std::filesystem::path& out,
                   std::uint64_t seed);
void run_filter_eval(RunConfig config, const std::filesystem::path& out,
                     std::uint64_t seed);
void run_baseline_hj(RunConfig config, const std::filesystem::path& out,
                     std::uint64_t seed);
void run_gradcheck(RunConfig config, const std::filesystem::path& out,
                   std::uint64_t seed);

}  // namespace eigensafe::cli
