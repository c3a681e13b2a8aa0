#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eigensafe {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// State of the controlled system. `terminal` marks the single absorbing
// unsafe state; its coordinates are all zero by convention and are ignored
// by every consumer.
struct StateVector {
  std::vector<double> coords;
  bool terminal = false;

  std::size_t dim() const { return coords.size(); }

  static StateVector unsafe(std::size_t dim) {
    return StateVector{std::vector<double>(dim, 0.0), true};
  }
};

struct ActionVector {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
};

// One offline sample (x, u, x+). The source state is always live; the
// successor may be the absorbing unsafe state.
struct TransitionTuple {
  StateVector state;
  ActionVector action;
  StateVector next_state;
};

struct Dataset {
  std::vector<TransitionTuple> tuples;
  std::string env_id;
  std::uint64_t seed = 0;

  std::size_t size() const { return tuples.size(); }
  std::size_t state_dim() const;
  std::size_t action_dim() const;

  // Non-empty, consistent dimensions, live source states.
  void validate() const;
};

struct EnvSpec {
  std::size_t state_dim = 0;
  std::size_t action_dim = 0;
  std::vector<Interval> action_bounds;
  double dt = 0.0;
  // Axis-aligned box the uniform state sampler draws from; rejection against
  // the safe-set predicate trims it to C.
  std::vector<Interval> sample_bounds;

  void validate() const;
};

}  // namespace eigensafe
