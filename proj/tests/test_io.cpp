#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "cpwm/errors.hpp"
#include "cpwm/model_io.hpp"
#include "cpwm/result_io.hpp"
#include "cpwm/units.hpp"

using namespace cpwm;
using namespace cpwm::test;
using nlohmann::json;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("model round trip") {
    for (auto b : all_benchmarks()) {
        auto m = make_benchmark(b);
        auto back = model_from_json(json::parse(model_to_json(m).dump()));
        CHECK(back.name == m.name);
        REQUIRE(back.f() == m.f());
        for (double x : {-3.1, -0.4, 0.0, 0.9, 5.0})
            for (int i = 0; i < m.f(); ++i) {
                CHECK(back.V_eff(i)(x) == m.V_eff(i)(x));
                for (int j = 0; j < m.f(); ++j) CHECK(back.eval(i, j, x) == m.eval(i, j, x));
            }
    }
}

TEST_CASE("model description in wavenumbers") {
    auto j = json::parse(R"({
        "name": "pc",
        "surfaces": 2,
        "V": [{"i": 1, "j": 2, "terms": [{"type": "gaussian", "height": 150, "alpha": 1, "units": "cm-1"}]}]
    })");
    auto m = model_from_json(j);
    CHECK(m.eval(0, 1, 0) == doctest::Approx(cm_to_hartree(150)).epsilon(1e-15));
    CHECK(m.eval(1, 0, 1) == doctest::Approx(cm_to_hartree(150) * std::exp(-1.0)).epsilon(1e-14));
    CHECK(m.V(0, 0).is_zero());
    CHECK(m.is_symmetric_zero());

    auto explicit_veff = json::parse(R"({
        "surfaces": 1,
        "V": [{"i": 1, "j": 1, "terms": [{"type": "tanh", "left": 0, "right": 0.01, "beta": 2}]}],
        "V_eff": [{"i": 1, "terms": [{"type": "constant", "value": 0.005}]}]
    })");
    auto e = model_from_json(explicit_veff);
    CHECK(e.V_eff(0)(3.0) == 0.005);
    CHECK(e.name == "custom");
}

TEST_CASE("malformed model descriptions") {
    const char* bad[] = {
        R"({"V": []})",
        R"({"surfaces": 0})",
        R"({"surfaces": 1, "V": [{"i": 1, "j": 2, "terms": []}]})",
        R"({"surfaces": 1, "V": [{"i": 1, "j": 1, "terms": [{"type": "cubic"}]}]})",
        R"({"surfaces": 1, "V": [{"i": 1, "j": 1, "terms": [{"type": "eckart", "width": 1}]}]})",
        R"({"surfaces": 1, "V": [{"i": 1, "j": 1, "terms": [{"type": "constant", "value": "big"}]}]})",
        R"({"surfaces": 1, "V": [{"i": 1, "j": 1, "terms": [{"type": "constant", "value": 1, "units": "eV"}]}]})",
        R"({"surfaces": 1, "V_eff": "sometimes"})",
    };
    for (const char* s : bad) {
        INFO(s);
        CHECK_THROWS_AS(model_from_json(json::parse(s)), ConfigError);
    }
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ConfigError);

    const std::string path = "cpwm_test_broken_model.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_model(path), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("load_model from a file") {
    const std::string path = "cpwm_test_model.json";
    std::ofstream(path) << model_to_json(make_benchmark(Benchmark::tully2)).dump(2);
    auto m = load_model(path);
    std::remove(path.c_str());
    CHECK(m.eval(1, 1, 0) == doctest::Approx(-0.05).epsilon(1e-15));
}

TEST_CASE("problem and config round trip") {
    auto p = problem(Benchmark::tully1);
    auto q = problem_from_json(json::parse(problem_to_json(p).dump()));
    CHECK(q.E == p.E);
    CHECK(q.m == p.m);
    CHECK(q.x_L == p.x_L);
    CHECK(q.x_R == p.x_R);
    CHECK(q.model.eval(0, 1, 0.3) == p.model.eval(0, 1, 0.3));
    CHECK_THROWS_AS(problem_from_json(json::parse(R"({"E": 1})")), ConfigError);

    PropagatorConfig c;
    c.N = 123;
    c.integrator = Integrator::cash_karp;
    c.scheme = Scheme::general;
    c.steps_per_shift = 3;
    c.eps = 2e-7;
    c.t_max = 4567;
    c.window = 7;
    c.early_stop = true;
    auto d = config_from_json(json::parse(config_to_json(c).dump()));
    CHECK(d.N == 123);
    CHECK(d.integrator == Integrator::cash_karp);
    CHECK(d.scheme == Scheme::general);
    CHECK(d.steps_per_shift == 3);
    CHECK(d.eps == 2e-7);
    CHECK(d.t_max == 4567);
    CHECK(d.window == 7);
    CHECK(d.early_stop);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"integrator": "euler"})")), ConfigError);
}

TEST_CASE("result record and CSV output") {
    const auto pre = preset(Benchmark::eckart_a, "low");
    auto p = make_problem(Benchmark::eckart_a, pre);
    auto c = config_for(pre);
    auto o = relax_to_stationary(p, c);

    auto j = result_to_json(o.result, p, c, true);
    CHECK(j["schema"] == kResultSchema);
    CHECK(j["kind"] == "cpwm");
    CHECK(j["P_trans"][0].get<double>() == o.result.P_trans[0]);
    CHECK(j["history"].size() == o.result.history.size());
    CHECK(problem_from_json(j["problem"]).E == p.E);
    CHECK(config_from_json(j["config"]).N == c.N);
    CHECK_FALSE(result_to_json(o.result, p, c).contains("history"));

    std::ostringstream h;
    write_history_csv(h, o.result);
    CHECK(first_line(h.str()) == "t,P_refl_1,P_trans_1");
    CHECK(count_lines(h.str()) == 1 + static_cast<int>(o.result.history.size()));

    Propagator P(p, c);
    std::ostringstream s;
    write_snapshot_csv(s, o.state, P, true);
    CHECK(first_line(s.str()) == "t,component,k,x,rho,S,flux");
    int points = 0;
    for (const auto& F : o.state.components) points += static_cast<int>(F.x.size());
    CHECK(count_lines(s.str()) == 1 + points);

    auto oj = oracle_to_json(solve_reference(p), p);
    CHECK(oj["kind"] == "oracle");
    CHECK(oj["grid"]["dense_N"].get<int>() > 0);
}
