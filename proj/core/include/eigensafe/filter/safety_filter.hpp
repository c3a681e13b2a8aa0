#pragma once

#include <functional>
#include <span>
#include <vector>

#include "eigensafe/environment.hpp"
#include "eigensafe/learn/eigen_model.hpp"

namespace eigensafe::filter {

struct FilterConfig {
  double epsilon = 0.2;

  void validate() const;
};

struct FilterDecision {
  ActionVector action;
  bool intervened = false;
};

// Threshold rule: pass the reference through when phi(s) > epsilon, otherwise
// substitute the backup policy. The boundary phi == epsilon falls back.
FilterDecision filtered_action(const learn::EigenModel& model,
                               const FilterConfig& config,
                               const StateVector& state,
                               const ActionVector& ref_action);

// Reference policies used in evaluation: uniform draws over the action box,
// or a fixed scripted action.
using ReferencePolicy =
    std::function<ActionVector(const StateVector&, std::size_t, Rng&)>;

ReferencePolicy uniform_random_reference(const EnvSpec& spec);
ReferencePolicy constant_reference(ActionVector action);

struct FilterReport {
  std::size_t n_episodes = 0;
  std::size_t horizon = 0;
  std::size_t violations_filtered = 0;
  std::size_t violations_unfiltered = 0;
  double intervention_rate = 0.0;
  double mean_survival_filtered = 0.0;
  double mean_survival_unfiltered = 0.0;
};

struct PhiTraceEntry {
  std::size_t episode = 0;
  std::size_t t = 0;
  double phi = 0.0;
  bool intervened = false;
};

struct FilterEvalResult {
  FilterReport report;
  std::vector<PhiTraceEntry> trace;  // filtered arm, per step
};

// Paired-arm evaluation: per episode, both arms share the initial state, the
// reference-action stream, and the dynamics-noise stream; a violation is
// reaching the unsafe state within the horizon.
FilterEvalResult evaluate_filter(const Environment& env,
                                 const learn::EigenModel& model,
                                 const FilterConfig& config,
                                 const ReferencePolicy& reference,
                                 std::size_t n_episodes, std::size_t horizon,
                                 Rng& rng);

// Centered moving average with edge truncation.
std::vector<double> smooth_series(std::span<const double> values,
                                  std::size_t window);

}  // namespace eigensafe::filter
