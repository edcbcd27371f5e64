#include "cpwm/relax.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "cpwm/trajectory.hpp"

namespace cpwm {

namespace {

double window_change(const std::vector<HistoryPoint>& h, int window) {
    if (static_cast<int>(h.size()) <= window) return INFINITY;
    const auto& last = h.back();
    double d = 0;
    for (std::size_t k = h.size() - 1 - window; k + 1 < h.size(); ++k) {
        for (std::size_t i = 0; i < last.P_refl.size(); ++i) {
            d = std::max(d, std::abs(h[k].P_refl[i] - last.P_refl[i]));
            d = std::max(d, std::abs(h[k].P_trans[i] - last.P_trans[i]));
        }
    }
    return d;
}

}  // namespace

RelaxOutcome relax_to_stationary(const Propagator& prop, const RelaxHooks& hooks) {
    const auto start = std::chrono::steady_clock::now();
    const auto& cfg = prop.config();
    const long calls0 = prop.rhs_evaluations();

    RelaxOutcome out;
    PropagationState s = prop.initial_state();
    std::vector<HistoryPoint> history;
    auto record = [&] {
        auto r = probabilities(s, prop);
        history.push_back({s.t, r.P_refl, r.P_trans});
    };
    record();

    const long n_shifts = std::max(1L, std::lround(cfg.t_max / prop.t_shift()));
    long steps = 0;
    double change = INFINITY;
    while (s.shifts < n_shifts) {
        const long before = s.shifts;
        prop.step(s, &out.steps);
        ++steps;
        if (s.shifts == before) continue;
        record();
        if (hooks.on_shift) hooks.on_shift(s);
        if (hooks.on_snapshot && cfg.snapshot_every > 0 && s.shifts % cfg.snapshot_every == 0) hooks.on_snapshot(s);
        change = window_change(history, cfg.window);
        if (cfg.early_stop && change < cfg.p_tol) break;
    }
    if (hooks.on_snapshot && (cfg.snapshot_every <= 0 || s.shifts % cfg.snapshot_every != 0)) hooks.on_snapshot(s);

    out.result = probabilities(s, prop);
    out.result.history = std::move(history);
    out.result.max_change = change;
    out.result.converged = change < cfg.p_tol;
    out.result.rhs_evaluations = prop.rhs_evaluations() - calls0;
    if (cfg.integrator == Integrator::cash_karp) {
        for (const auto& r : out.steps) (r.accepted ? out.result.accepted_steps : out.result.rejected_steps)++;
    } else {
        out.result.accepted_steps = steps;
    }
    out.result.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.state = std::move(s);
    return out;
}

RelaxOutcome relax_to_stationary(const ScatteringProblem& problem, const PropagatorConfig& config,
                                 const RelaxHooks& hooks) {
    Propagator prop(problem, config);
    return relax_to_stationary(prop, hooks);
}

PropagatorConfig adapt_config(const ScatteringProblem& p, PropagatorConfig base, double points_per_wavelength,
                              double traversals) {
    const auto& M = p.model;
    const double L = p.x_R - p.x_L;
    if (points_per_wavelength > 0) {
        auto mom = [&](int i, double x) { return std::sqrt(2 * p.m * std::max(0.0, p.E - M.eval(i, i, x))); };
        double k = 0;
        for (int n = 0; n <= 2000; ++n) {
            const double x = p.x_L + L * n / 2000;
            for (int i = 0; i < M.f(); ++i)
                for (int j = i + 1; j < M.f(); ++j)
                    if (!M.V(i, j).is_zero()) k = std::max(k, (mom(i, x) + mom(j, x)) / p.hbar);
        }
        const double need = std::ceil(points_per_wavelength * k * L / (2 * std::numbers::pi)) + 1;
        base.N = std::max(base.N, static_cast<int>(need));
    }
    if (traversals > 0) {
        double T = 0;
        for (int i = 0; i < M.f(); ++i) T = std::max(T, traversal_time(p, i));
        base.t_max = std::max(base.t_max, traversals * T);
    }
    return base;
}

}  // namespace cpwm
