#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "cpwm/errors.hpp"

using namespace cpwm;
using namespace cpwm::test;

namespace {

ScatteringProblem free_problem() {
    ScatteringProblem p;
    p.model = DiabaticModel(1);
    p.E = 0.002;
    p.x_L = -2;
    p.x_R = 2;
    return p;
}

ComponentField sampled(int n, double lo, double hi, double (*amp)(double), double k) {
    ComponentField F;
    for (int i = 0; i < n; ++i) {
        double x = lo + (hi - lo) * i / (n - 1);
        F.x.push_back(x);
        F.psi.push_back(std::polar(amp(x), k * x));
        F.S.push_back(k * x);
        F.rho.push_back(amp(x) * amp(x));
    }
    return F;
}

}  // namespace

TEST_CASE("initial state is the WKB incident wave") {
    auto t1 = problem(Benchmark::tully1);
    PropagatorConfig c;
    c.N = 50;
    Propagator P(t1, c);
    auto s = P.initial_state();
    const auto& F = s.component(0, +1);
    CHECK(std::abs(F.psi.front()) == doctest::Approx(1.0).epsilon(1e-14));
    const double ratio = F.rho.back() / F.rho.front();
    const auto& g = P.grids()[0];
    CHECK(ratio == doctest::Approx(g.velocities.front() / g.velocities.back()).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(std::sqrt(0.12 / 0.10)).epsilon(1e-3));
    for (int c2 = 1; c2 < 4; ++c2)
        for (auto z : s.components[c2].psi) CHECK(z == cplx(0));

    auto pc = problem(Benchmark::pure_coupling);
    c.N = 61;
    Propagator Q(pc, c);
    auto q = Q.initial_state();
    for (auto z : q.component(0, +1).psi) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("state invariants at shift events") {
    auto pre = preset(Benchmark::tully1);
    Propagator P(make_problem(Benchmark::tully1, pre), config_for(pre));
    auto s = P.initial_state();
    int shifts = 0;
    while (s.shifts < 40) {
        const long before = s.shifts;
        P.step(s);
        if (s.shifts == before) continue;
        ++shifts;
        CHECK(std::abs(s.component(0, +1).psi.front()) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(s.component(1, +1).psi.front() == cplx(0));
        CHECK(s.component(0, -1).psi.back() == cplx(0));
        CHECK(s.component(1, -1).psi.back() == cplx(0));
        for (const auto& F : s.components) {
            const auto& A = P.grids()[F.surface].actions;
            for (std::size_t k = 0; k < F.psi.size(); ++k) {
                CHECK(F.rho[k] >= 0);
                CHECK(std::abs(F.rho[k] - std::norm(F.psi[k])) <= 1e-12);
                CHECK(std::abs(std::polar(std::sqrt(F.rho[k]), F.S[k]) - F.psi[k]) <= 1e-12);
                // unwrapped against the WKB action trend
                if (k + 1 < F.psi.size())
                    CHECK(std::abs(F.S[k + 1] - F.S[k] - F.sign * (A[k + 1] - A[k])) < std::numbers::pi);
            }
        }
    }
    CHECK(shifts == 40);
}

TEST_CASE("free particle right-hand side") {
    auto p = free_problem();
    PropagatorConfig c;
    c.N = 40;
    c.scheme = Scheme::general;
    Propagator G(p, c);
    auto s = G.initial_state();
    auto r = G.rhs(s);
    // d/dt along v of e^{i(kx - Et)} is +iE
    for (std::size_t k = 0; k < r[0].size(); ++k)
        CHECK(std::abs(r[0][k] - cplx(0, p.E) * s.components[0].psi[k]) < 1e-15);
    for (auto z : r[1]) CHECK(z == cplx(0));

    c.scheme = Scheme::phase_modified;
    Propagator M(p, c);
    auto sm = M.initial_state();
    auto rm = M.rhs(sm);
    for (auto z : rm[0]) CHECK(std::abs(z) < 1e-15);
}

TEST_CASE("coupling seeds the second surface near the interaction") {
    auto pr = preset(Benchmark::pure_coupling);
    auto c = config_for(pr);
    c.integrator = Integrator::rk4;
    Propagator P(make_problem(Benchmark::pure_coupling, pr), c);
    auto s = P.initial_state();
    P.step_rk4(s, 4);
    const auto& F = s.component(1, +1);
    double peak = 0, at = 0;
    for (std::size_t k = 0; k < F.psi.size(); ++k)
        if (std::abs(F.psi[k]) > peak) peak = std::abs(F.psi[k]), at = F.x[k];
    CHECK(peak > 1e-3);
    CHECK(std::abs(at) < 0.5);
    CHECK(std::abs(F.psi.front()) < 1e-3 * peak);
    CHECK(std::abs(F.psi.back()) < 1e-3 * peak);
    double minus = 0;
    for (auto z : s.component(1, -1).psi) minus = std::max(minus, std::abs(z));
    CHECK(minus > 1e-3);
}

TEST_CASE("interpolate_polar") {
    auto flat = sampled(61, -3, 3, [](double) { return 1.0; }, 2.0);
    std::vector<double> mid;
    for (int i = 0; i + 1 < 61; ++i) mid.push_back(0.5 * (flat.x[i] + flat.x[i + 1]));
    auto v = interpolate_polar(flat, mid);
    for (std::size_t i = 0; i < mid.size(); ++i) CHECK(std::abs(v[i] - std::polar(1.0, 2 * mid[i])) < 1e-12);

    auto gauss = sampled(61, -3, 3, [](double x) { return std::exp(-x * x); }, 2.0);
    auto w = interpolate_polar(gauss, mid);
    for (std::size_t i = 0; i < mid.size(); ++i)
        CHECK(std::abs(w[i] - std::polar(std::exp(-mid[i] * mid[i]), 2 * mid[i])) < 1e-3);

    // outside the source range the extremal values are used
    std::vector<double> outside{-5.0, 5.0};
    auto o = interpolate_polar(flat, outside);
    CHECK(o[0] == flat.psi.front());
    CHECK(o[1] == flat.psi.back());

    // a step in the amplitude makes the spline undershoot
    auto step = sampled(12, 0, 11, [](double x) { return x < 2.5 ? 1.0 : 0.0; }, 0.0);
    std::vector<double> fine;
    for (int i = 0; i <= 220; ++i) fine.push_back(0.05 * i);
    bool clipped = false;
    for (auto z : interpolate_polar(step, fine)) {
        CHECK(std::isfinite(std::abs(z)));
        if (z == cplx(0)) clipped = true;
    }
    CHECK(clipped);

    auto tiny = sampled(3, 0, 1, [](double) { return 1.0; }, 1.0);
    CHECK_THROWS_AS(interpolate_polar(tiny, mid), ConfigError);
}

TEST_CASE("unwrap_phase removes 2 pi jumps") {
    std::vector<cplx> psi;
    std::vector<double> trend;
    for (int i = 0; i < 50; ++i) {
        psi.push_back(std::polar(1.0, 0.9 * i));
        trend.push_back(0.0);
    }
    auto S = unwrap_phase(psi, trend);
    for (int i = 0; i < 50; ++i) CHECK(S[i] - S[0] == doctest::Approx(0.9 * i).epsilon(1e-12));
}

TEST_CASE("scheme selection") {
    PropagatorConfig c;
    c.N = 20;
    Propagator ea(problem(Benchmark::eckart_a, "low"), c);
    CHECK(ea.scheme() == Scheme::phase_modified);
    Propagator t1(problem(Benchmark::tully1), c);
    CHECK(t1.scheme() == Scheme::general);
    CHECK_THROWS_AS(t1.rhs_symmetric(t1.initial_state()), ConfigError);
    c.scheme = Scheme::phase_modified;
    CHECK_THROWS_AS(Propagator(problem(Benchmark::tully1), c), ConfigError);
}

TEST_CASE("configuration errors") {
    auto p = problem(Benchmark::eckart_a, "low");
    PropagatorConfig c;
    c.N = 3;
    CHECK_THROWS_AS(Propagator(p, c), ConfigError);
    c = {};
    c.steps_per_shift = 0;
    CHECK_THROWS_AS(Propagator(p, c), ConfigError);
    c = {};
    c.integrator = Integrator::cash_karp;
    c.eps = 0;
    CHECK_THROWS_AS(Propagator(p, c), ConfigError);
    c = {};
    c.t_max = -1;
    CHECK_THROWS_AS(Propagator(p, c), ConfigError);
    auto bad = p;
    bad.x_L = 3;
    CHECK_THROWS_AS(Propagator(bad, PropagatorConfig{}), ConfigError);
    auto closed = problem(Benchmark::tully1);
    closed.E = 0.005;
    CHECK_THROWS_AS(Propagator(closed, PropagatorConfig{}), ConfigError);
}

TEST_CASE("RK4 is fourth order in the step") {
    for (auto scheme : {Scheme::phase_modified, Scheme::general}) {
        PropagatorConfig c;
        c.N = 20;
        c.scheme = scheme;
        Propagator P(problem(Benchmark::eckart_a, "low"), c);
        std::vector<Field> ys;
        for (int sps : {4, 8, 16, 32, 64}) {
            auto s = P.initial_state();
            while (s.shifts < 3) P.step_rk4(s, sps);
            ys.push_back(values(s));
        }
        std::vector<double> d;
        for (std::size_t k = 0; k + 1 < ys.size(); ++k) d.push_back(max_abs_diff(ys[k], ys[k + 1]));
        for (std::size_t k = 0; k + 1 < d.size(); ++k) {
            CHECK(d[k] / d[k + 1] > 14);
            CHECK(d[k] / d[k + 1] < 18);
        }
    }
}

TEST_CASE("Eckart A with the coarse fixed-step parameters") {
    auto o = run_preset(Benchmark::eckart_a, "low");
    CHECK(o.result.P_refl[0] == doctest::Approx(0.28348).epsilon(2e-5));
    CHECK(o.result.P_trans[0] == doctest::Approx(0.71665).epsilon(2e-5));
    CHECK(std::abs(o.result.P_trans[0] - 0.716641936131) < 2e-4);
    CHECK(o.result.shifts == 25);
}

TEST_CASE("Cash-Karp steps settle at t_shift") {
    auto o = run_preset(Benchmark::eckart_a, "adaptive");
    const double ts = o.result.t_shift;
    std::vector<double> accepted;
    for (const auto& st : o.steps)
        if (st.accepted) accepted.push_back(st.dt);
    REQUIRE(accepted.size() > 15);
    std::size_t first = 0;
    while (first < accepted.size() && std::abs(accepted[first] - ts) > 1e-9 * ts) ++first;
    CHECK(first > 0);
    CHECK(first <= 10);
    for (std::size_t k = 0; k < first; ++k) CHECK(accepted[k] < ts);
    for (std::size_t k = first; k < accepted.size(); ++k) CHECK(accepted[k] == doctest::Approx(ts).epsilon(1e-9));
    CHECK(std::abs(o.result.P_trans[0] - 0.716641936131) < 2e-4);
}

TEST_CASE("tighter tolerance does not hurt accuracy") {
    auto pre = preset(Benchmark::eckart_a, "adaptive");
    auto p = make_problem(Benchmark::eckart_a, pre);
    std::vector<double> err;
    for (double eps : {5e-4, 5e-5, 5e-6}) {
        auto c = config_for(pre);
        c.eps = eps;
        err.push_back(std::abs(relax_to_stationary(p, c).result.P_trans[0] - 0.716641936131));
    }
    CHECK(err[1] <= err[0] * 1.01);
    CHECK(err[2] < err[1]);
}

TEST_CASE("serial and OpenMP right-hand sides agree") {
    auto pre = preset(Benchmark::tully2);
    auto c = config_for(pre);
    c.N = 400;
    c.execution = Execution::serial;
    Propagator P(make_problem(Benchmark::tully2, pre), c);
    auto s = P.initial_state();
    for (int k = 0; k < 3; ++k) P.step_rk4(s, 2);
    auto serial = P.rhs(s);
    P.set_execution(Execution::openmp);
    CHECK(P.parallel());
    CHECK(max_abs_diff(serial, P.rhs(s)) == 0);
}

TEST_CASE("zero coupling leaves the second surface empty") {
    auto pre = preset(Benchmark::tully1);
    auto p = make_problem(Benchmark::tully1, pre, {{"V12", 0.0}});
    auto c = config_for(pre);
    c.t_max = 300;
    auto o = relax_to_stationary(p, c);
    for (int sign : {+1, -1})
        for (auto z : o.state.component(1, sign).psi) CHECK(z == cplx(0));
    CHECK(o.result.P_trans[1] == 0);
    CHECK(o.result.P_refl[1] == 0);
}
