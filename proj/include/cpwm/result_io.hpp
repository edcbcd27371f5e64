#pragma once

#include <iosfwd>
#include <json.hpp>

#include "cpwm/observables.hpp"
#include "cpwm/oracle.hpp"
#include "cpwm/propagator.hpp"

namespace cpwm {

inline constexpr const char* kResultSchema = "cpwm-result/1";

nlohmann::json config_to_json(const PropagatorConfig& c);
PropagatorConfig config_from_json(const nlohmann::json& j);

// full record: problem, config, probabilities, defects, timings
nlohmann::json result_to_json(const ScatteringResult& r, const ScatteringProblem& p, const PropagatorConfig& c,
                              bool with_history = false);
nlohmann::json oracle_to_json(const OracleSolution& o, const ScatteringProblem& p);

// t, P_refl_1.., P_trans_1..
void write_history_csv(std::ostream& os, const ScatteringResult& r);
// t, component, k, x, rho, S, flux
void write_snapshot_csv(std::ostream& os, const PropagationState& s, const Propagator& prop, bool header);

}  // namespace cpwm
