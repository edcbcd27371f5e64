#pragma once

#include <json.hpp>
#include <string>

#include "cpwm/model.hpp"

namespace cpwm {

// JSON model schema, see README. Indices in files are 1-based.
nlohmann::json curve_to_json(const Curve& c);
Curve curve_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const DiabaticModel& m);
DiabaticModel model_from_json(const nlohmann::json& j);
DiabaticModel load_model(const std::string& path);

nlohmann::json problem_to_json(const ScatteringProblem& p);
ScatteringProblem problem_from_json(const nlohmann::json& j);

}  // namespace cpwm
