#include <doctest.h>

#include <cmath>
#include <random>

#include "cpwm/errors.hpp"
#include "cpwm/model.hpp"
#include "cpwm/units.hpp"

using namespace cpwm;

TEST_CASE("unit conversion") {
    CHECK(cm_to_hartree(kCmPerHartree) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hartree_to_cm(cm_to_hartree(150)) == doctest::Approx(150).epsilon(1e-15));
}

TEST_CASE("curve terms and their derivatives") {
    // finite differences of every term type
    Curve c{Constant{0.3}, TanhRamp{-0.1, 0.2, 1.7, 0.4}, Eckart{0.05, 1.3, -0.2}, Gaussian{0.02, 0.6, 0.9}};
    for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
        const double h = 1e-4;
        Jet j = c.jet(x);
        CHECK(j.d1 == doctest::Approx((c(x + h) - c(x - h)) / (2 * h)).epsilon(1e-7));
        CHECK(j.d2 == doctest::Approx((c(x + h) - 2 * c(x) + c(x - h)) / (h * h)).epsilon(1e-5));
    }
    CHECK(c.left_limit() == doctest::Approx(0.2));
    CHECK(c.right_limit() == doctest::Approx(0.5));
    CHECK(Curve{}.is_zero());
    CHECK(Curve{Constant{0}}.is_zero());
    CHECK_FALSE(Curve{Constant{1}}.is_zero());
    CHECK(Curve{Constant{1}}.is_constant());
    CHECK_FALSE(c.is_constant());
}

TEST_CASE("eval_potential examples") {
    auto pc = make_benchmark(Benchmark::pure_coupling);
    CHECK(pc.eval(0, 1, 0) == doctest::Approx(cm_to_hartree(150)).epsilon(1e-15));
    CHECK(pc.eval(1, 0, 0) == pc.eval(0, 1, 0));
    for (double x : {-5.0, -1.0, 0.0, 0.3, 4.0}) {
        CHECK(pc.eval(0, 0, x) == 0);
        CHECK(pc.eval(1, 1, x) == 0);
    }
    auto t1 = make_benchmark(Benchmark::tully1);
    CHECK(t1.V_R(0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(t1.V_L(0) == doctest::Approx(-0.01).epsilon(1e-15));
    CHECK(t1.eval(0, 0, 50) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(t1.eval(0, 0, 0) == 0);
}

TEST_CASE("index errors") {
    auto m = make_benchmark(Benchmark::tully1);
    CHECK_THROWS_AS(m.eval(2, 0, 0), std::out_of_range);
    CHECK_THROWS_AS(m.eval(-1, 0, 0), std::out_of_range);
    CHECK_THROWS_AS(m.V_eff(2), std::out_of_range);
    CHECK_THROWS_AS(DiabaticModel(0), ConfigError);
}

TEST_CASE("make_benchmark examples") {
    auto t2 = make_benchmark(Benchmark::tully2);
    CHECK(t2.eval(1, 1, 0) == doctest::Approx(-0.05).epsilon(1e-15));
    CHECK(t2.eval(0, 0, 0) == 0);
    auto pc = make_benchmark(Benchmark::pure_coupling);
    CHECK(std::abs(pc.eval(0, 1, 40)) < 1e-300);
    CHECK(std::abs(pc.eval(0, 1, -40)) < 1e-300);
    CHECK(make_benchmark(Benchmark::tully1).eval(0, 0, 0) == 0);
    CHECK(make_benchmark(Benchmark::eckart_a).name == "eckart_a");
}

TEST_CASE("benchmark parameters and overrides") {
    auto m = make_benchmark(Benchmark::tully1, {{"V12", 0.0}});
    CHECK(m.V(0, 1).is_zero());
    CHECK_THROWS_AS(make_benchmark(Benchmark::tully1, {{"nope", 1.0}}), ConfigError);
    for (auto b : all_benchmarks()) CHECK(parse_benchmark(to_string(b)) == b);
    CHECK_THROWS_AS(parse_benchmark("tully3"), ConfigError);
    for (auto b : all_benchmarks()) CHECK_FALSE(presets(b).empty());
    CHECK_THROWS_AS(preset(Benchmark::eckart_a, "nope"), ConfigError);
    CHECK(preset(Benchmark::eckart_b, "0.1V0").E == doctest::Approx(0.0011));
}

TEST_CASE("symmetry of every built-in model") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> X(-10, 10);
    for (auto b : all_benchmarks()) {
        auto m = make_benchmark(b);
        for (int n = 0; n < 100; ++n) {
            double x = X(rng);
            for (int i = 0; i < m.f(); ++i)
                for (int j = 0; j < m.f(); ++j) CHECK(m.eval(i, j, x) == m.eval(j, i, x));
        }
    }
}

TEST_CASE("effective potential policy") {
    // bare barriers get a zero effective potential
    CHECK(make_benchmark(Benchmark::eckart_a).is_symmetric_zero());
    CHECK(make_benchmark(Benchmark::double_barrier).is_symmetric_zero());
    CHECK(make_benchmark(Benchmark::pure_coupling).is_symmetric_zero());
    CHECK_FALSE(make_benchmark(Benchmark::tully1).is_symmetric_zero());
    // monotone ramps and wells keep V_ii
    auto t1 = make_benchmark(Benchmark::tully1);
    auto t2 = make_benchmark(Benchmark::tully2);
    for (double x : {-3.0, 0.2, 2.5}) {
        CHECK(t1.V_eff(0)(x) == t1.eval(0, 0, x));
        CHECK(t1.V_eff(1)(x) == t1.eval(1, 1, x));
        CHECK(t2.V_eff(1)(x) == t2.eval(1, 1, x));
    }
    // barrier on a ramp keeps the ramp only
    auto br = make_benchmark(Benchmark::barrier_ramp);
    CHECK(br.V_eff(0)(0) == doctest::Approx(0.5 * cm_to_hartree(400)).epsilon(1e-14));
    CHECK(br.V_eff(0)(-20) == doctest::Approx(0).scale(1e-12));
    auto zero = effective_potential(make_benchmark(Benchmark::tully1).V(0, 0), VeffPolicy::zero);
    CHECK(zero.is_zero());
}

TEST_CASE("validate_problem examples") {
    auto pre = preset(Benchmark::tully1);
    auto p = make_problem(Benchmark::tully1, pre);
    auto rep = validate_problem(p);
    CHECK(rep.ok());
    // 0.10 asymptotically, the window stops at tanh(1.2 * 3)
    CHECK(rep.min_E_minus_Veff == doctest::Approx(0.11 - 0.01 * std::tanh(3.6)).epsilon(1e-12));
    CHECK(rep.min_E_minus_Veff == doctest::Approx(0.10).epsilon(2e-4));

    pre.E = 0.005;
    auto bad = validate_problem(make_problem(Benchmark::tully1, pre));
    CHECK_FALSE(bad.ok());
    bool turning = false;
    for (const auto& c : bad.checks)
        if (c.name == "turning point") turning = !c.passed && c.detail.find("surface 1") != std::string::npos;
    CHECK(turning);

    auto pc = make_problem(Benchmark::pure_coupling, preset(Benchmark::pure_coupling));
    auto r = validate_problem(pc);
    CHECK(r.ok());
    CHECK(r.max_edge_coupling == doctest::Approx(cm_to_hartree(150) * std::exp(-9.0)).epsilon(1e-12));

    ScatteringProblem w = pc;
    w.x_L = 1;
    w.x_R = -1;
    CHECK_FALSE(validate_problem(w).ok());
    ScatteringProblem closed = make_problem(Benchmark::tully1, preset(Benchmark::tully1));
    closed.E = -0.02;
    CHECK_FALSE(validate_problem(closed).ok());
}

TEST_CASE("edge coupling at the published windows") {
    // relative residual coupling left at the edges, see README
    auto pc = make_benchmark(Benchmark::pure_coupling);
    CHECK(pc.eval(0, 1, 3) / pc.eval(0, 1, 0) == doctest::Approx(std::exp(-9.0)).epsilon(1e-12));
    auto t2 = make_benchmark(Benchmark::tully2);
    CHECK(t2.eval(0, 1, 8) / t2.eval(0, 1, 0) == doctest::Approx(std::exp(-3.84)).epsilon(1e-12));
}

TEST_CASE("eckart_exact") {
    const auto p = default_params(Benchmark::eckart_a);
    const double V0 = cm_to_hartree(p.at("V0_cm")), a = p.at("width");
    auto [R, T] = eckart_exact(V0, a, 2000, V0);
    CHECK(T == doctest::Approx(0.716641936131).epsilon(1e-12));
    CHECK(R == doctest::Approx(0.283358063869).epsilon(1e-11));

    auto [Rh, Th] = eckart_exact(V0, a, 2000, 1e3 * V0);
    CHECK(Th == doctest::Approx(1.0).epsilon(1e-12));

    const auto pb = default_params(Benchmark::eckart_b);
    auto [Rb, Tb] = eckart_exact(pb.at("V0"), pb.at("width"), 2000, 0.1 * pb.at("V0"));
    // calibrated on the E = V0 column, 9.922e-10 here
    CHECK(Tb == doctest::Approx(9.920e-10).epsilon(5e-4));

    CHECK_THROWS_AS(eckart_exact(V0, a, 2000, 0), ConfigError);

    double prev = 0;
    for (int k = 1; k <= 200; ++k) {
        double E = V0 * 0.02 * k;
        auto [r, t] = eckart_exact(V0, a, 2000, E);
        CHECK(std::abs(r + t - 1) <= 1e-14);
        CHECK(t > prev);
        prev = t;
    }
}
