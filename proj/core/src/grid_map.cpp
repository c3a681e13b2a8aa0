#include "eigensafe/tabular/grid_map.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eigensafe/error.hpp"

namespace eigensafe::tabular {

namespace {

struct Offset {
  int dr, dc;
};

// Arrow enum order: up, down, left, right.
constexpr std::array<Offset, 4> kOffsets{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

std::string cell_name(std::size_t row, std::size_t col) {
  return "(" + std::to_string(row) + ", " + std::to_string(col) + ")";
}

}  // namespace

GridMap GridMap::parse(std::string_view text) {
  std::vector<std::string> cell_lines;
  std::vector<std::string> arrow_lines;
  bool in_arrows = false;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!cell_lines.empty()) in_arrows = true;
      continue;
    }
    (in_arrows ? arrow_lines : cell_lines).push_back(line);
  }
  if (cell_lines.empty()) throw ValidationError("map has no cell rows");
  if (arrow_lines.size() != cell_lines.size())
    throw ValidationError("map has " + std::to_string(cell_lines.size()) +
                          " cell rows but " + std::to_string(arrow_lines.size()) +
                          " arrow rows");

  GridMap map;
  map.height = cell_lines.size();
  map.width = cell_lines.front().size();
  map.cells.resize(map.width * map.height);
  map.arrows.resize(map.width * map.height, Arrow::up);
  for (std::size_t r = 0; r < map.height; ++r) {
    if (cell_lines[r].size() != map.width || arrow_lines[r].size() != map.width)
      throw ValidationError("map row " + std::to_string(r) +
                            " has inconsistent width");
    for (std::size_t c = 0; c < map.width; ++c) {
      const char cc = cell_lines[r][c];
      const char ac = arrow_lines[r][c];
      switch (cc) {
        case '.':
          map.cells[r * map.width + c] = Cell::safe;
          break;
        case '#':
          map.cells[r * map.width + c] = Cell::gray;
          break;
        default:
          throw ValidationError("bad cell character '" + std::string(1, cc) +
                                "' at " + cell_name(r, c));
      }
      if (cc == '#') {
        if (ac != '#')
          throw ValidationError("gray cell " + cell_name(r, c) +
                                " must carry '#' in the arrow grid");
        continue;
      }
      switch (ac) {
        case '^': map.arrows[r * map.width + c] = Arrow::up; break;
        case 'v': map.arrows[r * map.width + c] = Arrow::down; break;
        case '<': map.arrows[r * map.width + c] = Arrow::left; break;
        case '>': map.arrows[r * map.width + c] = Arrow::right; break;
        default:
          throw ValidationError("bad arrow character '" + std::string(1, ac) +
                                "' at " + cell_name(r, c));
      }
    }
  }
  return map;
}

GridMap GridMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open map file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::size_t> GridworldModel::state_index(std::size_t row,
                                                       std::size_t col) const {
  if (row >= map.height || col >= map.width) return std::nullopt;
  const std::int64_t idx = cell_to_state_[row * map.width + col];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

namespace {

// Outcome distribution of commanding `dir` from (r, c): the commanded
// neighbor gets 0.6, the other three neighbors and staying each get 0.1.
// Emits (target row, target col, in-map flag, probability).
template <typename Fn>
void for_each_outcome(const GridMap& map, std::size_t r, std::size_t c,
                      Arrow dir, Fn&& fn) {
  for (std::size_t k = 0; k < 4; ++k) {
    const auto [dr, dc] = kOffsets[k];
    const std::int64_t nr = static_cast<std::int64_t>(r) + dr;
    const std::int64_t nc = static_cast<std::int64_t>(c) + dc;
    const bool in_map = nr >= 0 && nc >= 0 &&
                        nr < static_cast<std::int64_t>(map.height) &&
                        nc < static_cast<std::int64_t>(map.width);
    const double p = (static_cast<Arrow>(k) == dir) ? 0.6 : 0.1;
    fn(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc), in_map, p);
  }
  fn(r, c, true, 0.1);  // stay
}

}  // namespace

GridworldModel build_gridworld(const GridMap& map) {
  if (map.width == 0 || map.height == 0)
    throw ValidationError("empty map");
  GridworldModel model;
  model.map = map;
  model.cell_to_state_.assign(map.width * map.height, -1);
  for (std::size_t r = 0; r < map.height; ++r)
    for (std::size_t c = 0; c < map.width; ++c)
      if (map.cell(r, c) == Cell::safe) {
        model.cell_to_state_[r * map.width + c] =
            static_cast<std::int64_t>(model.states.size());
        model.states.emplace_back(r, c);
      }
  if (model.states.empty())
    throw ValidationError("map has no safe cells");

  const std::size_t n = model.states.size();
  model.mdp.transition = Matrix(n, n);
  model.mdp.to_unsafe.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [r, c] = model.states[i];
    for_each_outcome(map, r, c, map.arrow(r, c),
                     [&](std::size_t nr, std::size_t nc, bool in_map, double p) {
                       const auto j = in_map ? model.state_index(nr, nc)
                                             : std::nullopt;
                       if (j)
                         model.mdp.transition(i, *j) += p;
                       else
                         model.mdp.to_unsafe[i] += p;
                     });
  }
  model.mdp.validate();
  return model;
}

TabularKernel gridworld_kernel(const GridMap& map) {
  GridworldModel model = build_gridworld(map);
  const std::size_t n = model.states.size();
  TabularKernel kernel(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [r, c] = model.states[i];
    for (std::size_t u = 0; u < 4; ++u)
      for_each_outcome(map, r, c, static_cast<Arrow>(u),
                       [&](std::size_t nr, std::size_t nc, bool in_map, double p) {
                         const auto j = in_map ? model.state_index(nr, nc)
                                               : std::nullopt;
                         kernel.prob(i, u, j ? *j : n) += p;
                       });
  }
  kernel.validate();
  return kernel;
}

TabularPolicy gridworld_arrow_policy(const GridMap& map) {
  GridworldModel model = build_gridworld(map);
  TabularPolicy policy;
  policy.probs = Matrix(model.states.size(), 4);
  for (std::size_t i = 0; i < model.states.size(); ++i) {
    const auto [r, c] = model.states[i];
    policy.probs(i, static_cast<std::size_t>(map.arrow(r, c))) = 1.0;
  }
  return policy;
}

GridworldEnv::GridworldEnv(GridMap map) : map_(std::move(map)) {
  spec_.state_dim = 2;
  spec_.action_dim = 1;
  spec_.action_bounds = {{-1.0, 1.0}};
  spec_.dt = 1.0;
  spec_.sample_bounds = {
      {-0.5, static_cast<double>(map_.height) - 0.5},
      {-0.5, static_cast<double>(map_.width) - 0.5},
  };
  spec_.validate();
}

StateVector GridworldEnv::state_at(std::size_t row, std::size_t col) const {
  return StateVector{{static_cast<double>(row), static_cast<double>(col)},
                     false};
}

bool GridworldEnv::unchecked_is_safe(std::span<const double> coords) const {
  const double r = std::round(coords[0]);
  const double c = std::round(coords[1]);
  if (r < 0 || c < 0 || r >= static_cast<double>(map_.height) ||
      c >= static_cast<double>(map_.width))
    return false;
  return map_.cell(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) ==
         Cell::safe;
}

StateVector GridworldEnv::unchecked_step(const StateVector& state,
                                         const ActionVector& /*action*/,
                                         Rng& rng) const {
  const auto r = static_cast<std::size_t>(std::round(state.coords[0]));
  const auto c = static_cast<std::size_t>(std::round(state.coords[1]));
  const double u = rng.uniform();
  // Outcome order matches for_each_outcome: commanded arrow first (0.6), the
  // remaining neighbors in enum order, stay last.
  const Arrow dir = map_.arrow(r, c);
  double cum = 0.0;
  std::int64_t tr = static_cast<std::int64_t>(r);
  std::int64_t tc = static_cast<std::int64_t>(c);
  bool chosen = false;
  for (std::size_t k = 0; k < 4 && !chosen; ++k) {
    const double p = (static_cast<Arrow>(k) == dir) ? 0.6 : 0.1;
    cum += p;
    if (u < cum) {
      tr += kOffsets[k].dr;
      tc += kOffsets[k].dc;
      chosen = true;
    }
  }
  // Otherwise stay in place.
  const bool in_map = tr >= 0 && tc >= 0 &&
                      tr < static_cast<std::int64_t>(map_.height) &&
                      tc < static_cast<std::int64_t>(map_.width);
  if (!in_map || map_.cell(static_cast<std::size_t>(tr),
                           static_cast<std::size_t>(tc)) == Cell::gray)
    return StateVector::unsafe(2);
  return state_at(static_cast<std::size_t>(tr), static_cast<std::size_t>(tc));
}

}  // namespace eigensafe::tabular
