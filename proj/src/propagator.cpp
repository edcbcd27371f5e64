#include "cpwm/propagator.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "cpwm/cash_karp.hpp"
#include "cpwm/errors.hpp"
#include "cpwm/spline.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cpwm {

std::string to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "cash_karp"; }

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::general: return "general";
        case Scheme::phase_modified: return "phase_modified";
        case Scheme::automatic: return "auto";
    }
    return "?";
}

std::string to_string(Execution e) {
    switch (e) {
        case Execution::automatic: return "auto";
        case Execution::serial: return "serial";
        case Execution::openmp: return "openmp";
    }
    return "?";
}

Integrator parse_integrator(const std::string& s) {
    if (s == "rk4") return Integrator::rk4;
    if (s == "cash_karp" || s == "ck") return Integrator::cash_karp;
    throw ConfigError("unknown integrator '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "general") return Scheme::general;
    if (s == "phase_modified" || s == "symmetric") return Scheme::phase_modified;
    if (s == "auto" || s == "automatic") return Scheme::automatic;
    throw ConfigError("unknown scheme '" + s + "'");
}

// ---- polar interpolation

std::vector<double> unwrap_phase(std::span<const cplx> psi, std::span<const double> trend) {
    const std::size_t n = psi.size();
    std::vector<double> S(n, 0.0);
    std::size_t first = n;
    for (std::size_t k = 0; k < n; ++k)
        if (psi[k] != cplx(0)) {
            first = k;
            break;
        }
    if (first == n) return std::vector<double>(trend.begin(), trend.end());

    constexpr double twopi = 2 * std::numbers::pi;
    std::vector<double> r(n);
    r[first] = std::arg(psi[first]) - trend[first];
    for (std::size_t k = first + 1; k < n; ++k) {
        if (psi[k] == cplx(0)) {
            r[k] = r[k - 1];
            continue;
        }
        double d = std::arg(psi[k]) - trend[k] - r[k - 1];
        r[k] = r[k - 1] + d - twopi * std::round(d / twopi);
    }
    for (std::size_t k = 0; k < first; ++k) r[k] = r[first];
    for (std::size_t k = 0; k < n; ++k) S[k] = r[k] + trend[k];
    return S;
}

namespace {

struct PolarSource {
    bool zero = true;
    NaturalSpline amp, phase;

    void build(std::span<const double> x, std::span<const cplx> psi, std::span<const double> S) {
        zero = true;
        for (auto v : psi)
            if (v != cplx(0)) {
                zero = false;
                break;
            }
        if (zero) return;
        std::vector<double> a(psi.size());
        for (std::size_t k = 0; k < psi.size(); ++k) a[k] = std::abs(psi[k]);
        amp.fit(x, a);
        phase.fit(x, S);
    }

    void build_unwrapped(std::span<const double> x, std::span<const cplx> psi, std::span<const double> trend) {
        auto S = unwrap_phase(psi, trend);
        build(x, psi, S);
    }

    cplx operator()(double t) const {
        if (zero) return 0;
        double r = amp(t);
        if (r <= 0) return 0;
        return std::polar(r, phase(t));
    }
};

}  // namespace

std::vector<cplx> interpolate_polar(const ComponentField& src, std::span<const double> targets) {
    if (src.x.size() < 4) throw ConfigError("polar interpolation needs at least 4 source points");
    PolarSource p;
    p.build(src.x, src.psi, src.S);
    std::vector<cplx> out(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) out[k] = p(targets[k]);
    return out;
}

// ---- geometry at a sub-shift time

struct Propagator::Geometry {
    struct Coupling {
        int j;
        std::vector<cplx> c;
    };
    struct Comp {
        int surface, sign;
        std::vector<double> x, trend;
        std::vector<cplx> a, b;  // b empty when identically zero
        std::vector<Coupling> c;
    };
    std::vector<Comp> comps;
    std::vector<bool> needed;  // components read through interpolation
};

Propagator::Propagator(ScatteringProblem problem, PropagatorConfig config)
    : problem_(std::move(problem)), config_(config) {
    if (config_.N < 4) throw ConfigError("N must be at least 4");
    if (config_.steps_per_shift < 1) throw ConfigError("steps per shift must be a positive integer");
    if (config_.integrator == Integrator::cash_karp && !(config_.eps > 0)) throw ConfigError("eps must be positive");
    if (!(config_.t_max > 0)) throw ConfigError("t_max must be positive");
    auto report = validate_problem(problem_);
    if (!report.ok()) {
        std::string msg = "invalid problem:";
        for (const auto& c : report.checks)
            if (c.hard && !c.passed) msg += " " + c.name + " (" + c.detail + ")";
        throw ConfigError(msg);
    }

    const bool sym = problem_.model.is_symmetric_zero();
    scheme_ = config_.scheme;
    if (scheme_ == Scheme::automatic) scheme_ = sym ? Scheme::phase_modified : Scheme::general;
    if (scheme_ == Scheme::phase_modified && !sym)
        throw ConfigError("phase-modified scheme needs V_ii and V_eff_i zero at both edges");

    grids_ = build_grids(problem_, config_.N);
    set_execution(config_.execution);
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;

void Propagator::set_execution(Execution e) {
    config_.execution = e;
#ifdef _OPENMP
    long total = 0;
    for (const auto& g : grids_) total += 2L * g.size();
    switch (e) {
        case Execution::serial: parallel_ = false; break;
        case Execution::openmp: parallel_ = true; break;
        case Execution::automatic: parallel_ = omp_get_max_threads() > 1 && total >= 1024; break;
    }
#else
    parallel_ = false;
#endif
}

std::vector<double> Propagator::positions(int comp, double tau) const {
    return grids_[comp / 2].positions_at(tau, comp % 2 ? -1 : +1);
}

double Propagator::velocity(int surface, double x) const { return trajectory_velocity(problem_, surface, x); }

cplx Propagator::boundary_value(double t) const {
    double turns = scheme_ == Scheme::phase_modified ? 2 : 1;
    return std::polar(1.0, -turns * problem_.E * t / problem_.hbar);
}

const Propagator::Geometry& Propagator::geometry(double tau, Scheme scheme) const {
    auto key = std::make_pair(tau, static_cast<int>(scheme));
    if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
    if (cache_.size() >= 256) cache_.clear();

    const auto& M = problem_.model;
    const int f = M.f();
    const double E = problem_.E, m = problem_.m, hb = problem_.hbar;
    const cplx mi(0, -1 / hb);  // -i / hbar

    auto g = std::make_unique<Geometry>();
    g->comps.resize(2 * f);
    g->needed.assign(2 * f, false);
    for (int c = 0; c < 2 * f; ++c) {
        auto& G = g->comps[c];
        G.surface = c / 2;
        G.sign = c % 2 ? -1 : +1;
        const int i = G.surface;
        const auto& grid = grids_[i];
        G.x = grid.positions_at(tau, G.sign);
        auto A = grid.actions_at(tau, G.sign);
        G.trend.resize(A.size());
        for (std::size_t k = 0; k < A.size(); ++k) G.trend[k] = G.sign * A[k] / hb;

        const std::size_t n = G.x.size();
        G.a.resize(n);
        G.b.resize(n);
        bool b_zero = true;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = G.x[k];
            const double Vii = M.eval(i, i, x);
            if (scheme == Scheme::phase_modified) {
                G.a[k] = mi * Vii;
                G.b[k] = mi * Vii;
            } else {
                Jet ve = M.V_eff(i).jet(x);
                double D = E - ve.v;
                if (!(D > 0)) throw NumericalError("turning point on surface " + std::to_string(i + 1));
                double v = std::sqrt(2 * D / m);
                double C = hb * hb / (2 * m) * (5.0 / 16 * (ve.d1 / D) * (ve.d1 / D) + 0.25 * ve.d2 / D);
                G.a[k] = cplx(G.sign * 0.25 * v * ve.d1 / D, (E - Vii - ve.v + C) / hb);
                G.b[k] = mi * (Vii - ve.v - C);
            }
            if (G.b[k] != cplx(0)) b_zero = false;
        }
        if (b_zero) G.b.clear();
        else g->needed[c ^ 1] = true;

        for (int j = 0; j < f; ++j) {
            if (j == i || M.V(i, j).is_zero()) continue;
            Geometry::Coupling cp{j, std::vector<cplx>(n)};
            for (std::size_t k = 0; k < n; ++k) cp.c[k] = mi * M.eval(i, j, G.x[k]);
            G.c.push_back(std::move(cp));
            g->needed[2 * j] = g->needed[2 * j + 1] = true;
        }
    }
    auto& ref = *g;
    cache_.emplace(key, std::move(g));
    return ref;
}

void Propagator::eval_rhs(const Geometry& g, const Field& y, Field& out, bool parallel) const {
    ++rhs_calls_;
    const int nc = static_cast<int>(g.comps.size());
    std::vector<PolarSource> src(nc);
    out.resize(nc);
    std::vector<long> offset(nc + 1, 0);
    for (int c = 0; c < nc; ++c) {
        out[c].resize(y[c].size());
        offset[c + 1] = offset[c] + static_cast<long>(y[c].size());
    }
    const long total = offset[nc];

    auto build = [&](int b) {
        if (g.needed[b]) src[b].build_unwrapped(g.comps[b].x, y[b], g.comps[b].trend);
    };
    auto point = [&](int c, long k) {
        const auto& G = g.comps[c];
        const double x = G.x[k];
        cplx d = G.a[k] * y[c][k];
        if (!G.b.empty()) d += G.b[k] * src[c ^ 1](x);
        for (const auto& cp : G.c) d += cp.c[k] * (src[2 * cp.j](x) + src[2 * cp.j + 1](x));
        out[c][k] = d;
    };

    if (!parallel) {
        for (int b = 0; b < nc; ++b) build(b);
        for (int c = 0; c < nc; ++c)
            for (long k = 0; k < offset[c + 1] - offset[c]; ++k) point(c, k);
        return;
    }
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (int b = 0; b < nc; ++b) build(b);
        // implicit barrier: every source spline exists before coupled terms are assembled
#pragma omp for schedule(static)
        for (long q = 0; q < total; ++q) {
            int c = 0;
            while (q >= offset[c + 1]) ++c;
            point(c, q - offset[c]);
        }
    }
}

PropagationState Propagator::initial_state() const {
    PropagationState s;
    s.E = problem_.E;
    s.m = problem_.m;
    s.hbar = problem_.hbar;
    s.scheme = scheme_;
    s.h_next = config_.dt0_fraction * t_shift();
    const int f = problem_.model.f();
    for (int c = 0; c < 2 * f; ++c) {
        ComponentField F;
        F.surface = c / 2;
        F.sign = c % 2 ? -1 : +1;
        F.psi.assign(grids_[F.surface].size(), cplx(0));
        s.components.push_back(std::move(F));
    }
    const auto& g = grids_[0];
    auto& p = s.components[0].psi;
    for (int k = 0; k < g.size(); ++k)
        p[k] = std::sqrt(g.velocities[0] / g.velocities[k]) * std::polar(1.0, g.actions[k] / problem_.hbar);
    resync(s);
    return s;
}

namespace {
Field values(const PropagationState& s) {
    Field y(s.components.size());
    for (std::size_t c = 0; c < y.size(); ++c) y[c] = s.components[c].psi;
    return y;
}
}  // namespace

Field Propagator::rhs(const PropagationState& s) const {
    Field out;
    eval_rhs(geometry(s.tau, s.scheme), values(s), out, parallel_);
    return out;
}

Field Propagator::rhs_general(const PropagationState& s) const {
    Field out;
    eval_rhs(geometry(s.tau, Scheme::general), values(s), out, parallel_);
    return out;
}

Field Propagator::rhs_symmetric(const PropagationState& s) const {
    if (!problem_.model.is_symmetric_zero())
        throw ConfigError("symmetric equations need V_ii and V_eff_i zero at both edges");
    Field out;
    eval_rhs(geometry(s.tau, Scheme::phase_modified), values(s), out, parallel_);
    return out;
}

void Propagator::resync(PropagationState& s) const {
    const auto& g = geometry(s.tau, s.scheme);
    for (std::size_t c = 0; c < s.components.size(); ++c) {
        auto& F = s.components[c];
        F.x = g.comps[c].x;
        F.rho.resize(F.psi.size());
        for (std::size_t k = 0; k < F.psi.size(); ++k) F.rho[k] = std::norm(F.psi[k]);
        F.S = unwrap_phase(F.psi, g.comps[c].trend);
    }
}

void Propagator::shift(PropagationState& s) const {
    s.shifts += 1;
    s.tau = 0;
    s.substep = 0;
    s.t = s.shifts * t_shift();
    s.phi = problem_.E * s.t / problem_.hbar;
    const int f = problem_.model.f();
    for (int i = 0; i < f; ++i) {
        auto& p = s.components[2 * i].psi;
        for (std::size_t k = p.size() - 1; k > 0; --k) p[k] = p[k - 1];
        p[0] = i == 0 ? boundary_value(s.t) : cplx(0);
        auto& q = s.components[2 * i + 1].psi;
        for (std::size_t k = 0; k + 1 < q.size(); ++k) q[k] = q[k + 1];
        q.back() = 0;
    }
}

void Propagator::check_finite(const PropagationState& s) const {
    for (const auto& F : s.components)
        for (std::size_t k = 0; k < F.psi.size(); ++k) {
            const cplx v = F.psi[k];
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e100)
                throw NumericalError("non-finite amplitude in component " + F.label() + " at point " +
                                     std::to_string(k) + ", t = " + std::to_string(s.t));
        }
}

void Propagator::step_rk4(PropagationState& s) const { step_rk4(s, config_.steps_per_shift); }

void Propagator::step_rk4(PropagationState& s, int sps) const {
    const double ts = t_shift();
    const int n = s.substep;
    const double dt = ts / sps;
    const double t0 = ts * n / sps, tm = ts * (2 * n + 1) / (2.0 * sps), t1 = ts * (n + 1) / sps;

    Field y = values(s), k1, k2, k3, k4, tmp = y;
    auto axpy = [&](const Field& k, double h) {
        for (std::size_t c = 0; c < y.size(); ++c)
            for (std::size_t q = 0; q < y[c].size(); ++q) tmp[c][q] = y[c][q] + h * k[c][q];
    };
    eval_rhs(geometry(t0, s.scheme), y, k1, parallel_);
    axpy(k1, dt / 2);
    eval_rhs(geometry(tm, s.scheme), tmp, k2, parallel_);
    axpy(k2, dt / 2);
    eval_rhs(geometry(tm, s.scheme), tmp, k3, parallel_);
    axpy(k3, dt);
    eval_rhs(geometry(t1, s.scheme), tmp, k4, parallel_);
    for (std::size_t c = 0; c < y.size(); ++c)
        for (std::size_t q = 0; q < y[c].size(); ++q)
            s.components[c].psi[q] = y[c][q] + dt / 6 * (k1[c][q] + 2.0 * k2[c][q] + 2.0 * k3[c][q] + k4[c][q]);

    if (++s.substep == sps) {
        shift(s);
    } else {
        s.tau = t1;
        s.t = s.shifts * ts + t1;
    }
    check_finite(s);
    resync(s);
}

double Propagator::step_cash_karp(PropagationState& s, double eps, std::vector<StepRecord>* log) const {
    namespace ck = cash_karp;
    const double ts = t_shift();
    const double h_min = config_.dt_min_fraction * ts;
    double h = s.h_next > 0 ? s.h_next : config_.dt0_fraction * ts;
    h = std::min(h, ts);

    const Field y = values(s);
    std::array<Field, 6> k;
    Field tmp = y, y5 = y;
    for (;;) {
        const double rem = ts - s.tau;
        const bool last = h >= rem || rem <= h / ck::kSafety;
        const double step = last ? rem : h;

        for (int st = 0; st < 6; ++st) {
            for (std::size_t c = 0; c < y.size(); ++c)
                for (std::size_t q = 0; q < y[c].size(); ++q) {
                    cplx acc = y[c][q];
                    for (int p = 0; p < st; ++p) acc += step * ck::a[st][p] * k[p][c][q];
                    tmp[c][q] = acc;
                }
            eval_rhs(geometry(s.tau + ck::c[st] * step, s.scheme), tmp, k[st], parallel_);
        }
        double err = 0;
        for (std::size_t c = 0; c < y.size(); ++c)
            for (std::size_t q = 0; q < y[c].size(); ++q) {
                cplx hi = y[c][q], delta = 0;
                for (int p = 0; p < 6; ++p) {
                    hi += step * ck::b5[p] * k[p][c][q];
                    delta += step * (ck::b5[p] - ck::b4[p]) * k[p][c][q];
                }
                y5[c][q] = hi;
                err = std::max(err, std::abs(delta));
            }
        err /= eps;
        if (!std::isfinite(err)) err = 1e10;
        if (log) log->push_back({s.t, step, err, err <= 1});

        if (err <= 1) {
            for (std::size_t c = 0; c < y.size(); ++c) s.components[c].psi = y5[c];
            if (last) {
                shift(s);
            } else {
                s.tau += step;
                s.t = s.shifts * ts + s.tau;
            }
            s.h_next = std::min(ck::grow(step, err), ts);
            check_finite(s);
            resync(s);
            return step;
        }
        h = ck::shrink(step, err);
        if (h < h_min)
            throw NumericalError("adaptive step underflow at t = " + std::to_string(s.t) + " (dt = " +
                                 std::to_string(h) + ")");
    }
}

void Propagator::step(PropagationState& s, std::vector<StepRecord>* log) const {
    if (config_.integrator == Integrator::rk4) step_rk4(s);
    else step_cash_karp(s, config_.eps, log);
}

}  // namespace cpwm
