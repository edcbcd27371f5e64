#pragma once

#include <functional>
#include <vector>

#include "cpwm/observables.hpp"
#include "cpwm/propagator.hpp"

namespace cpwm {

struct RelaxHooks {
    // after every shift event
    std::function<void(const PropagationState&)> on_shift;
    // every config.snapshot_every shifts, and once at the end
    std::function<void(const PropagationState&)> on_snapshot;
};

struct RelaxOutcome {
    ScatteringResult result;
    PropagationState state;
    std::vector<StepRecord> steps;  // adaptive attempts, accepted and rejected
};

// Propagates from the WKB initial state for round(t_max / t_shift) shifts (or
// until converged when early_stop is set). Probabilities are recorded once per
// shift; the run counts as converged when every probability stayed within
// p_tol over the trailing window.
RelaxOutcome relax_to_stationary(const Propagator& prop, const RelaxHooks& hooks = {});
RelaxOutcome relax_to_stationary(const ScatteringProblem& problem, const PropagatorConfig& config,
                                 const RelaxHooks& hooks = {});

// Energy-dependent resolution. Raises N so the fastest intersurface beat,
// wavenumber (p_i + p_j) / hbar over coupled open pairs, gets at least
// points_per_wavelength sites, and raises t_max to cover the slowest surface's
// traversal time `traversals` times. Zero disables either rule.
PropagatorConfig adapt_config(const ScatteringProblem& p, PropagatorConfig base, double points_per_wavelength,
                              double traversals);

}  // namespace cpwm
