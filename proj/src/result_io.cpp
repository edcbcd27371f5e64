#include "cpwm/result_io.hpp"

#include <cmath>
#include <ostream>

#include "cpwm/errors.hpp"
#include "cpwm/model_io.hpp"

namespace cpwm {

using nlohmann::json;

json config_to_json(const PropagatorConfig& c) {
    return {{"N", c.N},
            {"integrator", to_string(c.integrator)},
            {"scheme", to_string(c.scheme)},
            {"steps_per_shift", c.steps_per_shift},
            {"eps", c.eps},
            {"t_max", c.t_max},
            {"p_tol", c.p_tol},
            {"window", c.window},
            {"early_stop", c.early_stop},
            {"dt0_fraction", c.dt0_fraction},
            {"dt_min_fraction", c.dt_min_fraction},
            {"snapshot_every", c.snapshot_every}};
}

PropagatorConfig config_from_json(const json& j) {
    try {
        PropagatorConfig c;
        c.N = j.value("N", c.N);
        c.integrator = parse_integrator(j.value("integrator", to_string(c.integrator)));
        c.scheme = parse_scheme(j.value("scheme", to_string(c.scheme)));
        c.steps_per_shift = j.value("steps_per_shift", c.steps_per_shift);
        c.eps = j.value("eps", c.eps);
        c.t_max = j.value("t_max", c.t_max);
        c.p_tol = j.value("p_tol", c.p_tol);
        c.window = j.value("window", c.window);
        c.early_stop = j.value("early_stop", c.early_stop);
        c.dt0_fraction = j.value("dt0_fraction", c.dt0_fraction);
        c.dt_min_fraction = j.value("dt_min_fraction", c.dt_min_fraction);
        c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad propagator config: ") + e.what());
    }
}

json result_to_json(const ScatteringResult& r, const ScatteringProblem& p, const PropagatorConfig& c,
                    bool with_history) {
    json j;
    j["schema"] = kResultSchema;
    j["kind"] = "cpwm";
    j["problem"] = problem_to_json(p);
    j["config"] = config_to_json(c);
    j["P_refl"] = r.P_refl;
    j["P_trans"] = r.P_trans;
    j["unitarity_defect"] = r.unitarity_defect;
    j["converged"] = r.converged;
    j["max_change"] = std::isfinite(r.max_change) ? json(r.max_change) : json(nullptr);
    j["scheme"] = r.scheme;
    j["t_shift"] = r.t_shift;
    j["t_final"] = r.t_final;
    j["shifts"] = r.shifts;
    j["grid_sizes"] = r.grid_sizes;
    j["rhs_evaluations"] = r.rhs_evaluations;
    j["accepted_steps"] = r.accepted_steps;
    j["rejected_steps"] = r.rejected_steps;
    j["timings"] = {{"runtime_s", r.runtime_s}};
    if (with_history) {
        json h = json::array();
        for (const auto& e : r.history) h.push_back({{"t", e.t}, {"P_refl", e.P_refl}, {"P_trans", e.P_trans}});
        j["history"] = h;
    }
    return j;
}

json oracle_to_json(const OracleSolution& o, const ScatteringProblem& p) {
    json j;
    j["schema"] = kResultSchema;
    j["kind"] = "oracle";
    j["problem"] = problem_to_json(p);
    j["P_refl"] = o.P_refl;
    j["P_trans"] = o.P_trans;
    j["unitarity_defect"] = o.unitarity_defect;
    j["resolution_defect"] = o.resolution_defect;
    j["grid"] = {{"X_L", o.X_L}, {"X_R", o.X_R}, {"dense_N", o.dense_N}};
    j["timings"] = {{"runtime_s", o.runtime_s}};
    return j;
}

void write_history_csv(std::ostream& os, const ScatteringResult& r) {
    const std::size_t f = r.P_refl.size();
    os << "t";
    for (std::size_t i = 0; i < f; ++i) os << ",P_refl_" << i + 1;
    for (std::size_t i = 0; i < f; ++i) os << ",P_trans_" << i + 1;
    os << '\n';
    os.precision(15);
    for (const auto& h : r.history) {
        os << h.t;
        for (double v : h.P_refl) os << ',' << v;
        for (double v : h.P_trans) os << ',' << v;
        os << '\n';
    }
}

void write_snapshot_csv(std::ostream& os, const PropagationState& s, const Propagator& prop, bool header) {
    if (header) os << "t,component,k,x,rho,S,flux\n";
    os.precision(15);
    for (std::size_t c = 0; c < s.components.size(); ++c) {
        const auto& F = s.components[c];
        auto j = component_flux(s, prop, static_cast<int>(c));
        for (std::size_t k = 0; k < F.x.size(); ++k)
            os << s.t << ',' << F.label() << ',' << k << ',' << F.x[k] << ',' << F.rho[k] << ',' << F.S[k] << ','
               << j[k] << '\n';
    }
}

}  // namespace cpwm
