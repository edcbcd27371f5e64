#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>
#include <omp.h>

#include "cpwm/relax.hpp"

using namespace cpwm;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_diff(const Field& a, const Field& b) {
    double d = 0;
    for (std::size_t c = 0; c < a.size(); ++c)
        for (std::size_t k = 0; k < a[c].size(); ++k) d = std::max(d, std::abs(a[c][k] - b[c][k]));
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP timings for the RHS kernel and energy scans"};
    std::string bench = "tully2";
    int N = 2000, reps = 200, energies = 4;
    double t_max = 300;
    app.add_option("-b,--benchmark", bench, "benchmark");
    app.add_option("--N", N, "grid points for the RHS kernel");
    app.add_option("--reps", reps, "RHS evaluations per timing");
    app.add_option("--energies", energies, "energies in the scan timing");
    app.add_option("--tmax", t_max, "relaxation time per scan energy");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto b = parse_benchmark(bench);
        const auto pre = preset(b);
        auto prob = make_problem(b, pre);
        std::cout << "threads " << omp_get_max_threads() << '\n';

        // RHS kernel on a state that has evolved for a few shifts
        PropagatorConfig c;
        c.N = N;
        c.execution = Execution::serial;
        Propagator prop(prob, c);
        auto s = prop.initial_state();
        for (int k = 0; k < 3; ++k) prop.step_rk4(s, 2);
        long points = 0;
        for (const auto& F : s.components) points += static_cast<long>(F.x.size());

        prop.set_execution(Execution::serial);
        Field ref = prop.rhs(s);
        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) ref = prop.rhs(s);
        const double ts = seconds_since(t0) / reps;

        prop.set_execution(Execution::openmp);
        Field par = prop.rhs(s);
        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) par = prop.rhs(s);
        const double tp = seconds_since(t0) / reps;
        std::cout << "rhs  " << bench << "  points " << points << "  serial " << ts * 1e3 << " ms  openmp "
                  << tp * 1e3 << " ms  speedup " << ts / tp << "  max |diff| " << max_diff(ref, par) << '\n';

        // energy scan: independent solves, one per thread
        std::vector<double> E(energies);
        for (int k = 0; k < energies; ++k) E[k] = pre.E * (1 + 0.1 * k);
        PropagatorConfig sc;
        sc.N = pre.N;
        sc.integrator = pre.integrator;
        sc.steps_per_shift = pre.steps_per_shift;
        sc.eps = pre.eps;
        sc.t_max = t_max;
        sc.execution = Execution::serial;
        auto solve = [&](double e) {
            ScatteringProblem p = prob;
            p.E = e;
            return relax_to_stationary(p, sc).result.P_trans[0];
        };
        std::vector<double> serial(energies), parallel(energies);
        t0 = std::chrono::steady_clock::now();
        for (int k = 0; k < energies; ++k) serial[k] = solve(E[k]);
        const double ss = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < energies; ++k) parallel[k] = solve(E[k]);
        const double sp = seconds_since(t0);
        double d = 0;
        for (int k = 0; k < energies; ++k) d = std::max(d, std::abs(serial[k] - parallel[k]));
        std::cout << "scan " << bench << "  energies " << energies << "  serial " << ss << " s  openmp " << sp
                  << " s  speedup " << ss / sp << "  max |diff| " << d << '\n';
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
