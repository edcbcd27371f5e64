#include "cpwm/model_io.hpp"

#include <fstream>

#include "cpwm/errors.hpp"
#include "cpwm/units.hpp"

namespace cpwm {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double number(const json& j, const char* key, double fallback = NAN) {
    if (!j.contains(key)) {
        if (std::isnan(fallback)) throw ConfigError(std::string("model term is missing '") + key + "'");
        return fallback;
    }
    if (!j[key].is_number()) throw ConfigError(std::string("model field '") + key + "' must be a number");
    return j[key].get<double>();
}

Term term_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type")) throw ConfigError("model term needs a 'type'");
    const std::string type = j["type"].get<std::string>();
    double scale = 1;
    if (j.contains("units")) {
        auto u = j["units"].get<std::string>();
        if (u == "cm-1" || u == "cm^-1") scale = 1 / kCmPerHartree;
        else if (u != "hartree") throw ConfigError("unknown energy unit '" + u + "'");
    }
    if (type == "constant") return Constant{scale * number(j, "value")};
    if (type == "tanh")
        return TanhRamp{scale * number(j, "left"), scale * number(j, "right"), number(j, "beta"),
                        number(j, "center", 0)};
    if (type == "eckart") return Eckart{scale * number(j, "height"), number(j, "width"), number(j, "center", 0)};
    if (type == "gaussian")
        return Gaussian{scale * number(j, "height"), number(j, "alpha"), number(j, "center", 0)};
    throw ConfigError("unknown term type '" + type + "'");
}

json term_to_json(const Term& t) {
    return std::visit(overloaded{
                          [](const Constant& c) { return json{{"type", "constant"}, {"value", c.value}}; },
                          [](const TanhRamp& r) {
                              return json{{"type", "tanh"}, {"left", r.left}, {"right", r.right},
                                          {"beta", r.beta}, {"center", r.center}};
                          },
                          [](const Eckart& e) {
                              return json{{"type", "eckart"}, {"height", e.height}, {"width", e.width},
                                          {"center", e.center}};
                          },
                          [](const Gaussian& g) {
                              return json{{"type", "gaussian"}, {"height", g.height}, {"alpha", g.alpha},
                                          {"center", g.center}};
                          },
                      },
                      t);
}

int surface_index(const json& j, const char* key, int f) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw ConfigError(std::string("missing index '") + key + "'");
    int v = j[key].get<int>();
    if (v < 1 || v > f) throw ConfigError(std::string("index '") + key + "' out of range");
    return v - 1;
}

}  // namespace

json curve_to_json(const Curve& c) {
    json terms = json::array();
    for (const auto& t : c.terms()) terms.push_back(term_to_json(t));
    return terms;
}

Curve curve_from_json(const json& j) {
    const json& terms = j.is_object() ? j.at("terms") : j;
    if (!terms.is_array()) throw ConfigError("curve terms must be an array");
    std::vector<Term> out;
    for (const auto& t : terms) out.push_back(term_from_json(t));
    return Curve(std::move(out));
}

json model_to_json(const DiabaticModel& m) {
    json j;
    j["name"] = m.name;
    j["surfaces"] = m.f();
    json V = json::array();
    for (int i = 0; i < m.f(); ++i)
        for (int k = i; k < m.f(); ++k)
            if (!m.V(i, k).terms().empty()) V.push_back({{"i", i + 1}, {"j", k + 1}, {"terms", curve_to_json(m.V(i, k))}});
    j["V"] = V;
    json Ve = json::array();
    for (int i = 0; i < m.f(); ++i) Ve.push_back({{"i", i + 1}, {"terms", curve_to_json(m.V_eff(i))}});
    j["V_eff"] = Ve;
    return j;
}

DiabaticModel model_from_json(const json& j) {
    try {
        if (!j.contains("surfaces")) throw ConfigError("model needs 'surfaces'");
        const int f = j["surfaces"].get<int>();
        DiabaticModel m(f);
        m.name = j.value("name", std::string("custom"));
        if (j.contains("V"))
            for (const auto& e : j["V"]) m.set_V(surface_index(e, "i", f), surface_index(e, "j", f), curve_from_json(e));
        const json ve = j.value("V_eff", json("auto"));
        if (ve.is_string()) {
            const auto s = ve.get<std::string>();
            VeffPolicy pol = s == "auto" ? VeffPolicy::automatic
                           : s == "diagonal" ? VeffPolicy::diagonal
                           : s == "zero" ? VeffPolicy::zero
                           : throw ConfigError("unknown V_eff policy '" + s + "'");
            apply_veff_policy(m, pol);
        } else {
            apply_veff_policy(m, VeffPolicy::automatic);
            for (const auto& e : ve) m.set_V_eff(surface_index(e, "i", f), curve_from_json(e));
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad model description: ") + e.what());
    }
}

DiabaticModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file " + path);
    try {
        return model_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
}

json problem_to_json(const ScatteringProblem& p) {
    return {{"model", model_to_json(p.model)}, {"E", p.E}, {"m", p.m}, {"hbar", p.hbar}, {"x_L", p.x_L}, {"x_R", p.x_R}};
}

ScatteringProblem problem_from_json(const json& j) {
    try {
        ScatteringProblem p{model_from_json(j.at("model"))};
        p.E = j.at("E").get<double>();
        p.m = j.value("m", 2000.0);
        p.hbar = j.value("hbar", 1.0);
        p.x_L = j.at("x_L").get<double>();
        p.x_R = j.at("x_R").get<double>();
        return p;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad problem description: ") + e.what());
    }
}

}  // namespace cpwm
