#pragma once

#include <cstdint>

namespace eigensafe {

// Counter-based deterministic generator (splitmix64). All randomness in the
// library flows through this type, so every result is a pure function of a
// 64-bit seed. Independent sub-streams are derived from (seed, index), which
// lets batched work run in parallel and still reproduce the serial output.
//
// Gaussian variates use the Box-Muller cosine branch and consume exactly two
// uniform draws per call; ports that replay the same uniform stream reproduce
// trajectories bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream derived from the original seed and an index; does not
  // depend on how far this generator has advanced.
  Rng stream(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Uniform on {0, 1, ..., n-1}.
  std::size_t uniform_index(std::size_t n);

  // Standard normal via Box-Muller (cosine branch); two uniforms per call.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace eigensafe
