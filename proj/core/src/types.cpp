#include "eigensafe/types.hpp"

#include <cmath>

#include "eigensafe/error.hpp"

namespace eigensafe {

std::size_t Dataset::state_dim() const {
  if (tuples.empty()) throw ContractError("dataset is empty");
  return tuples.front().state.dim();
}

std::size_t Dataset::action_dim() const {
  if (tuples.empty()) throw ContractError("dataset is empty");
  return tuples.front().action.dim();
}

void Dataset::validate() const {
  if (tuples.empty()) throw ValidationError("dataset is empty");
  const std::size_t sd = tuples.front().state.dim();
  const std::size_t ad = tuples.front().action.dim();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& t = tuples[i];
    if (t.state.terminal)
      throw ValidationError("dataset tuple " + std::to_string(i) +
                            " has a terminal source state");
    if (t.state.dim() != sd || t.next_state.dim() != sd ||
        t.action.dim() != ad)
      throw ValidationError("dataset tuple " + std::to_string(i) +
                            " has inconsistent dimensions");
  }
}

void EnvSpec::validate() const {
  if (state_dim < 1 || action_dim < 1)
    throw ValidationError("environment spec needs state_dim >= 1 and action_dim >= 1");
  if (action_bounds.size() != action_dim)
    throw ValidationError("action_bounds size does not match action_dim");
  for (const auto& b : action_bounds)
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
      throw ValidationError("degenerate action bound interval");
  if (sample_bounds.size() != state_dim)
    throw ValidationError("sample_bounds size does not match state_dim");
  for (const auto& b : sample_bounds)
    if (!(b.lo < b.hi)) throw ValidationError("degenerate sampling interval");
}

}  // namespace eigensafe
