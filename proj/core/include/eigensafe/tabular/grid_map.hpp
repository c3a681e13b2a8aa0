#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigensafe/environment.hpp"
#include "eigensafe/tabular/control.hpp"
#include "eigensafe/tabular/finite_mdp.hpp"

namespace eigensafe::tabular {

enum class Cell : std::uint8_t { safe, gray };
enum class Arrow : std::uint8_t { up, down, left, right };

// Toy gridworld map. Text format: one line per row with `.` = safe and
// `#` = gray, a blank line, then a parallel arrow grid with `^ v < >` on safe
// cells and `#` on gray cells.
struct GridMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Cell> cells;    // row-major
  std::vector<Arrow> arrows;  // row-major; meaningful on safe cells only

  Cell cell(std::size_t row, std::size_t col) const {
    return cells[row * width + col];
  }
  Arrow arrow(std::size_t row, std::size_t col) const {
    return arrows[row * width + col];
  }

  static GridMap parse(std::string_view text);
  static GridMap load(const std::filesystem::path& path);
};

// Closed-loop chain of a map: the cell's arrow neighbor with probability 0.6,
// each of the other three 4-neighbors and staying put with probability 0.1;
// mass landing on gray cells or off the map is absorbed by the unsafe state.
struct GridworldModel {
  GridMap map;
  FiniteMdp mdp;
  // Safe-state enumeration, row-major over the map.
  std::vector<std::pair<std::size_t, std::size_t>> states;

  std::optional<std::size_t> state_index(std::size_t row,
                                         std::size_t col) const;

 private:
  friend GridworldModel build_gridworld(const GridMap&);
  std::vector<std::int64_t> cell_to_state_;
};

GridworldModel build_gridworld(const GridMap& map);

// The same outcome model with the commanded arrow as a 4-valued action, in
// Arrow enum order. Composing it with the map's own arrow policy reproduces
// build_gridworld exactly.
TabularKernel gridworld_kernel(const GridMap& map);
TabularPolicy gridworld_arrow_policy(const GridMap& map);

// The map's closed loop as a core Environment, for rollout cross-checks.
// State coordinates are (row, col); lookups round to the nearest cell. The
// scalar action is a placeholder and does not influence transitions.
class GridworldEnv final : public Environment {
 public:
  explicit GridworldEnv(GridMap map);

  const EnvSpec& spec() const override { return spec_; }
  const std::string& id() const override { return id_; }
  const GridMap& map() const { return map_; }

  StateVector state_at(std::size_t row, std::size_t col) const;

 protected:
  bool unchecked_is_safe(std::span<const double> coords) const override;
  StateVector unchecked_step(const StateVector& state,
                             const ActionVector& action,
                             Rng& rng) const override;

 private:
  GridMap map_;
  EnvSpec spec_;
  std::string id_ = "gridworld";
};

}  // namespace eigensafe::tabular
