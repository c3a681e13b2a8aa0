#include "eigensafe/filter/safety_filter.hpp"

#include <algorithm>

#include "eigensafe/error.hpp"

namespace eigensafe::filter {

void FilterConfig::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("filter epsilon must be positive");
}

FilterDecision filtered_action(const learn::EigenModel& model,
                               const FilterConfig& config,
                               const StateVector& state,
                               const ActionVector& ref_action) {
  if (state.terminal)
    throw ContractError("filtered_action: state is terminal");
  config.validate();
  const double phi = model.phi(state.coords);
  if (phi > config.epsilon) return {ref_action, false};
  return {model.policy(state.coords), true};
}

ReferencePolicy uniform_random_reference(const EnvSpec& spec) {
  return [spec](const StateVector&, std::size_t, Rng& rng) {
    return sample_action(spec, rng);
  };
}

ReferencePolicy constant_reference(ActionVector action) {
  return [action](const StateVector&, std::size_t, Rng&) { return action; };
}

FilterEvalResult evaluate_filter(const Environment& env,
                                 const learn::EigenModel& model,
                                 const FilterConfig& config,
                                 const ReferencePolicy& reference,
                                 std::size_t n_episodes, std::size_t horizon,
                                 Rng& rng) {
  if (n_episodes < 1)
    throw ContractError("evaluate_filter: n_episodes must be >= 1");
  config.validate();
  const Rng key(rng.next_u64());
  FilterEvalResult result;
  FilterReport& report = result.report;
  report.n_episodes = n_episodes;
  report.horizon = horizon;

  std::size_t interventions = 0;
  std::size_t filtered_steps = 0;
  std::size_t survival_filtered = 0;
  std::size_t survival_unfiltered = 0;

  for (std::size_t e = 0; e < n_episodes; ++e) {
    const StateVector x0 = [&] {
      Rng init_rng = key.stream(3 * e);
      return sample_safe_state(env, init_rng);
    }();

    // Unfiltered arm.
    {
      Rng ref_rng = key.stream(3 * e + 1);
      Rng noise_rng = key.stream(3 * e + 2);
      StateVector x = x0;
      std::size_t t = 0;
      for (; t < horizon && !x.terminal; ++t) {
        const ActionVector a = reference(x, t, ref_rng);
        x = env.step(x, a, noise_rng);
      }
      if (x.terminal) {
        ++report.violations_unfiltered;
        survival_unfiltered += t;  // steps survived before absorption
      } else {
        survival_unfiltered += horizon;
      }
    }

    // Filtered arm: identical initial state, reference stream, and noise
    // stream; the reference is drawn every step even when overridden.
    {
      Rng ref_rng = key.stream(3 * e + 1);
      Rng noise_rng = key.stream(3 * e + 2);
      StateVector x = x0;
      std::size_t t = 0;
      for (; t < horizon && !x.terminal; ++t) {
        const ActionVector ref = reference(x, t, ref_rng);
        const FilterDecision decision = filtered_action(model, config, x, ref);
        result.trace.push_back(
            {e, t, model.phi(x.coords), decision.intervened});
        ++filtered_steps;
        if (decision.intervened) ++interventions;
        x = env.step(x, decision.action, noise_rng);
      }
      if (x.terminal) {
        ++report.violations_filtered;
        survival_filtered += t;
      } else {
        survival_filtered += horizon;
      }
    }
  }

  report.intervention_rate =
      filtered_steps == 0
          ? 0.0
          : static_cast<double>(interventions) / static_cast<double>(filtered_steps);
  report.mean_survival_filtered =
      static_cast<double>(survival_filtered) / static_cast<double>(n_episodes);
  report.mean_survival_unfiltered =
      static_cast<double>(survival_unfiltered) / static_cast<double>(n_episodes);
  return result;
}

std::vector<double> smooth_series(std::span<const double> values,
                                  std::size_t window) {
  if (window < 1) throw ContractError("smoothing window must be >= 1");
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.0);
  const std::size_t back = (window - 1) / 2;
  const std::size_t front = window / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= back ? i - back : 0;
    const std::size_t hi = std::min(n - 1, i + front);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += values[j];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace eigensafe::filter
