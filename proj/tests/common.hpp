#pragma once

#include "cpwm/relax.hpp"

namespace cpwm::test {

inline PropagatorConfig config_for(const RunPreset& p) {
    PropagatorConfig c;
    c.N = p.N;
    c.integrator = p.integrator;
    c.scheme = p.scheme;
    c.steps_per_shift = p.steps_per_shift;
    if (p.eps > 0) c.eps = p.eps;
    c.t_max = p.t_max;
    return c;
}

inline ScatteringProblem problem(Benchmark b, const std::string& label = "") {
    return make_problem(b, preset(b, label));
}

inline RelaxOutcome run_preset(Benchmark b, const std::string& label = "") {
    const auto pre = preset(b, label);
    return relax_to_stationary(make_problem(b, pre), config_for(pre));
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double d = 0;
    for (std::size_t c = 0; c < a.size(); ++c)
        for (std::size_t k = 0; k < a[c].size(); ++k) d = std::max(d, std::abs(a[c][k] - b[c][k]));
    return d;
}

inline Field values(const PropagationState& s) {
    Field y;
    for (const auto& F : s.components) y.push_back(F.psi);
    return y;
}

}  // namespace cpwm::test
