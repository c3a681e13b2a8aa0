#pragma once

#include <filesystem>
#include <iosfwd>

#include "eigensafe/types.hpp"

namespace eigensafe {

// Dataset CSV layout: header `s0..s{d-1},a0..a{k-1},terminal,ns0..ns{d-1}`,
// terminal in {0,1}, next-state columns all zero on terminal rows, floats
// written with 17 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

Dataset read_dataset_csv(std::istream& in, std::string env_id = "",
                         std::uint64_t seed = 0);
Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::string env_id = "", std::uint64_t seed = 0);

}  // namespace eigensafe
