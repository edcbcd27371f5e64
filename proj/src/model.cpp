#include "cpwm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cpwm/errors.hpp"
#include "cpwm/units.hpp"

namespace cpwm {

DiabaticModel::DiabaticModel(int f) : f_(f) {
    if (f < 1) throw ConfigError("surface count must be positive");
    V_.resize(f * (f + 1) / 2);
    V_eff_.resize(f);
}

int DiabaticModel::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= f_ || j >= f_)
        throw std::out_of_range("surface index (" + std::to_string(i) + "," + std::to_string(j) +
                                ") out of range for f=" + std::to_string(f_));
    if (i > j) std::swap(i, j);
    return i * f_ - i * (i - 1) / 2 + (j - i);
}

const Curve& DiabaticModel::V(int i, int j) const { return V_[index(i, j)]; }
void DiabaticModel::set_V(int i, int j, Curve c) { V_[index(i, j)] = std::move(c); }

const Curve& DiabaticModel::V_eff(int i) const {
    index(i, i);
    return V_eff_[i];
}
void DiabaticModel::set_V_eff(int i, Curve c) {
    index(i, i);
    V_eff_[i] = std::move(c);
}

bool DiabaticModel::is_symmetric_zero() const {
    for (int i = 0; i < f_; ++i)
        if (!V_eff_[i].is_zero() || V(i, i).left_limit() != 0 || V(i, i).right_limit() != 0) return false;
    return true;
}

Curve effective_potential(const Curve& Vii, VeffPolicy policy) {
    switch (policy) {
        case VeffPolicy::zero: return Curve{};
        case VeffPolicy::diagonal: return Vii;
        case VeffPolicy::automatic: break;
    }
    bool barrier = false;
    std::vector<Term> smooth;
    for (const auto& t : Vii.terms()) {
        if (auto e = std::get_if<Eckart>(&t)) {
            barrier |= e->height > 0;
        } else if (auto g = std::get_if<Gaussian>(&t)) {
            barrier |= g->height > 0;
        } else {
            smooth.push_back(t);
        }
    }
    if (!barrier) return Vii;
    return Curve(std::move(smooth));
}

void apply_veff_policy(DiabaticModel& model, VeffPolicy policy) {
    for (int i = 0; i < model.f(); ++i) model.set_V_eff(i, effective_potential(model.V(i, i), policy));
}

// ---- benchmarks

const std::vector<Benchmark>& all_benchmarks() {
    static const std::vector<Benchmark> v = {
        Benchmark::eckart_a,       Benchmark::eckart_b,      Benchmark::uphill_ramp,
        Benchmark::barrier_ramp,   Benchmark::double_barrier, Benchmark::pure_coupling,
        Benchmark::tully1,         Benchmark::tully2};
    return v;
}

std::string to_string(Benchmark b) {
    switch (b) {
        case Benchmark::eckart_a: return "eckart_a";
        case Benchmark::eckart_b: return "eckart_b";
        case Benchmark::uphill_ramp: return "uphill_ramp";
        case Benchmark::barrier_ramp: return "barrier_ramp";
        case Benchmark::double_barrier: return "double_barrier";
        case Benchmark::pure_coupling: return "pure_coupling";
        case Benchmark::tully1: return "tully1";
        case Benchmark::tully2: return "tully2";
    }
    return "?";
}

Benchmark parse_benchmark(const std::string& s) {
    for (auto b : all_benchmarks())
        if (to_string(b) == s) return b;
    throw ConfigError("unknown benchmark '" + s + "'");
}

namespace {
// Widths fitted so eckart_exact reproduces the tabulated exact values
constexpr double kEckartAWidth = 2.99999978696413838;
constexpr double kEckartBWidth = 1.36401546021888078629;
}  // namespace

ParamMap default_params(Benchmark b) {
    switch (b) {
        case Benchmark::eckart_a: return {{"V0_cm", 400}, {"width", kEckartAWidth}, {"center", 0}};
        case Benchmark::eckart_b: return {{"V0", 0.011}, {"width", kEckartBWidth}, {"center", 0}};
        case Benchmark::uphill_ramp: return {{"dV_cm", 400}, {"beta", 2.5}, {"center", 0}};
        case Benchmark::barrier_ramp:
            return {{"V0_cm", 400}, {"width", kEckartAWidth}, {"dV_cm", 400},
                    {"beta", 2.5},  {"center", 0},           {"ramp_offset", 0}};
        case Benchmark::double_barrier:
            return {{"V0_cm", 400}, {"width", kEckartAWidth}, {"separation", 1.6}, {"center", 0}};
        case Benchmark::pure_coupling: return {{"V12_cm", 150}, {"alpha", 1}, {"center", 0}};
        case Benchmark::tully1:
            return {{"VR", 0.01}, {"beta", 1.2}, {"V12", 0.005}, {"alpha", 1}, {"center", 0}};
        case Benchmark::tully2:
            return {{"V0", 0.10}, {"beta", 0.28}, {"E0", 0.05}, {"V12", 0.015}, {"alpha", 0.06}, {"center", 0}};
    }
    return {};
}

DiabaticModel make_benchmark(Benchmark b, const ParamMap& overrides) {
    ParamMap p = default_params(b);
    for (const auto& [k, v] : overrides) {
        auto it = p.find(k);
        if (it == p.end()) throw ConfigError("benchmark " + to_string(b) + " has no parameter '" + k + "'");
        if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' must be finite");
        it->second = v;
    }
    auto cm = [](double v) { return cm_to_hartree(v); };
    const double c = p["center"];

    DiabaticModel m(b == Benchmark::pure_coupling || b == Benchmark::tully1 || b == Benchmark::tully2 ? 2 : 1);
    m.name = to_string(b);
    switch (b) {
        case Benchmark::eckart_a:
            m.set_V(0, 0, Curve{Eckart{cm(p["V0_cm"]), p["width"], c}});
            break;
        case Benchmark::eckart_b:
            m.set_V(0, 0, Curve{Eckart{p["V0"], p["width"], c}});
            break;
        case Benchmark::uphill_ramp:
            m.set_V(0, 0, Curve{TanhRamp{0, cm(p["dV_cm"]), p["beta"], c}});
            break;
        case Benchmark::barrier_ramp:
            m.set_V(0, 0, Curve{Eckart{cm(p["V0_cm"]), p["width"], c},
                                TanhRamp{0, cm(p["dV_cm"]), p["beta"], c + p["ramp_offset"]}});
            break;
        case Benchmark::double_barrier: {
            double h = cm(p["V0_cm"]), a = p["width"], s = 0.5 * p["separation"];
            m.set_V(0, 0, Curve{Eckart{h, a, c - s}, Eckart{h, a, c + s}});
            break;
        }
        case Benchmark::pure_coupling:
            m.set_V(0, 1, Curve{Gaussian{cm(p["V12_cm"]), p["alpha"], c}});
            break;
        case Benchmark::tully1: {
            double vr = p["VR"];
            m.set_V(0, 0, Curve{TanhRamp{-vr, vr, p["beta"], c}});
            m.set_V(1, 1, Curve{TanhRamp{vr, -vr, p["beta"], c}});
            m.set_V(0, 1, Curve{Gaussian{p["V12"], p["alpha"], c}});
            break;
        }
        case Benchmark::tully2:
            m.set_V(1, 1, Curve{Constant{p["E0"]}, Gaussian{-p["V0"], p["beta"], c}});
            m.set_V(0, 1, Curve{Gaussian{p["V12"], p["alpha"], c}});
            break;
    }
    apply_veff_policy(m, VeffPolicy::automatic);
    return m;
}

std::vector<RunPreset> presets(Benchmark b) {
    using I = Integrator;
    const double V0a = cm_to_hartree(400);
    switch (b) {
        case Benchmark::eckart_a:
            return {{"low", V0a, 20, -2.0, 2.0, I::rk4, Scheme::automatic, 1, 0, 3899},
                    {"high", V0a, 800, -4.0, 4.0, I::rk4, Scheme::automatic, 3, 0, 11867},
                    {"adaptive", V0a, 20, -2.0, 2.0, I::cash_karp, Scheme::automatic, 1, 5e-5, 3899}};
        case Benchmark::eckart_b:
            return {{"V0", 0.011, 25, -2.6, 2.1, I::rk4, Scheme::automatic, 3, 0, 2893},
                    {"0.4V0", 0.0044, 61, -3.5, 4.0, I::rk4, Scheme::automatic, 4, 0, 43978},
                    {"0.1V0", 0.0011, 110, -3.5, 3.5, I::rk4, Scheme::automatic, 2, 0, 428621}};
        case Benchmark::uphill_ramp:
            return {{"default", 0.0023, 19, -1.5, 2.2, I::rk4, Scheme::automatic, 2, 0, 5792}};
        case Benchmark::barrier_ramp:
            return {{"default", 0.0023, 15, -1.5, 2.0, I::rk4, Scheme::automatic, 2, 0, 7000}};
        case Benchmark::double_barrier:
            return {{"default", 0.0014, 20, -2.2, 2.2, I::rk4, Scheme::automatic, 1, 0, 39143}};
        case Benchmark::pure_coupling:
            return {{"default", cm_to_hartree(100), 61, -3.0, 3.0, I::cash_karp, Scheme::automatic, 1, 1e-6, 50000}};
        case Benchmark::tully1:
            return {{"default", 0.11, 50, -3.0, 3.0, I::cash_karp, Scheme::automatic, 1, 1e-6, 1000}};
        case Benchmark::tully2:
            return {{"default", std::exp(-2.0), 250, -8.0, 8.0, I::cash_karp, Scheme::automatic, 1, 1e-4, 2000}};
    }
    return {};
}

RunPreset preset(Benchmark b, const std::string& label) {
    auto all = presets(b);
    if (label.empty()) return all.front();
    for (auto& p : all)
        if (p.label == label) return p;
    throw ConfigError("benchmark " + to_string(b) + " has no preset '" + label + "'");
}

ScatteringProblem make_problem(Benchmark b, const RunPreset& p, const ParamMap& overrides) {
    ScatteringProblem prob{make_benchmark(b, overrides)};
    prob.E = p.E;
    prob.x_L = p.x_L;
    prob.x_R = p.x_R;
    return prob;
}

// ---- validation

bool ValidationReport::ok() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.hard && !c.passed; });
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& c : checks) {
        os << (c.passed ? "pass" : (c.hard ? "FAIL" : "warn")) << "  " << c.name << " = " << c.value;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
    }
    return os.str();
}

ValidationReport validate_problem(const ScatteringProblem& p, double tol) {
    ValidationReport r;
    const auto& M = p.model;
    const int f = M.f();

    auto add = [&](std::string name, bool ok, bool hard, double value, std::string detail = {}) {
        r.checks.push_back({std::move(name), ok, hard, value, std::move(detail)});
    };

    add("window", p.x_L < p.x_R, true, p.x_R - p.x_L, "x_R - x_L");
    add("mass", p.m > 0 && p.hbar > 0, true, p.m);
    add("incident channel open", p.E > M.V_L(0), true, p.E - M.V_L(0), "E - V_1L");
    if (!(p.x_L < p.x_R)) return r;

    const int samples = 2001;
    double min_gap = INFINITY;
    int worst = 0;
    double veff_excess = -INFINITY;
    double sym = 0;
    for (int k = 0; k < samples; ++k) {
        double x = p.x_L + (p.x_R - p.x_L) * k / (samples - 1);
        for (int i = 0; i < f; ++i) {
            double ve = M.V_eff(i)(x);
            if (p.E - ve < min_gap) {
                min_gap = p.E - ve;
                worst = i;
            }
            veff_excess = std::max(veff_excess, ve - std::max(M.V_L(i), M.V_R(i)));
            for (int j = i + 1; j < f; ++j) sym = std::max(sym, std::abs(M.eval(i, j, x) - M.eval(j, i, x)));
        }
    }
    r.min_E_minus_Veff = min_gap;
    add("turning point", min_gap > 0, true, min_gap,
        min_gap > 0 ? "min E - V_eff" : "turning point on surface " + std::to_string(worst + 1));
    add("symmetry", sym == 0, true, sym, "max |V_ij - V_ji|");
    add("V_eff bound", veff_excess <= 1e-12 * std::max(1.0, std::abs(p.E)), false, veff_excess,
        "max V_eff - max(V_L, V_R)");

    double coup = 0, mis = 0;
    for (double x : {p.x_L, p.x_R}) {
        for (int i = 0; i < f; ++i) {
            mis = std::max(mis, std::abs(M.eval(i, i, x) - M.V_eff(i)(x)));
            for (int j = i + 1; j < f; ++j) coup = std::max(coup, std::abs(M.eval(i, j, x)));
        }
    }
    r.max_edge_coupling = coup;
    r.max_edge_mismatch = mis;
    const double scale = tol * std::abs(p.E);
    add("edge coupling", coup <= scale, false, coup, "max |V_ij| at edges");
    add("edge V_ii - V_eff", mis <= scale, false, mis, "max |V_ii - V_eff_i| at edges");
    return r;
}

// ---- analytic Eckart

namespace {
double log_sinh(double y) { return y + std::log1p(-std::exp(-2 * y)) - std::numbers::ln2; }
double log_cosh(double y) {
    y = std::abs(y);
    return y + std::log1p(std::exp(-2 * y)) - std::numbers::ln2;
}
}  // namespace

std::pair<double, double> eckart_exact(double V0, double width, double m, double E, double hbar) {
    if (!(E > 0)) throw ConfigError("eckart_exact needs E > 0");
    const double pi = std::numbers::pi;
    const double k = std::sqrt(2 * m * E) / hbar;
    const double ls = 2 * log_sinh(pi * k / width);
    const double q = 2 * m * V0 / (hbar * hbar * width * width) - 0.25;
    // ratio = cosh^2(pi d) / sinh^2(pi k / a), R = ratio / (1 + ratio)
    double ratio;
    if (q >= 0) {
        ratio = std::exp(2 * log_cosh(pi * std::sqrt(q)) - ls);
    } else {
        double c = std::cos(pi * std::sqrt(-q));
        ratio = c * c * std::exp(-ls);
    }
    double T = 1 / (1 + ratio);
    double R = ratio / (1 + ratio);
    return {R, T};
}

}  // namespace cpwm
