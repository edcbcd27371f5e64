#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpwm/curve.hpp"

namespace cpwm {

// Symmetric f x f diabatic potential matrix plus per-surface effective
// potentials that generate the trajectory velocities. Indices are 0-based.
class DiabaticModel {
public:
    explicit DiabaticModel(int f = 1);

    int f() const { return f_; }

    const Curve& V(int i, int j) const;
    void set_V(int i, int j, Curve c);
    double eval(int i, int j, double x) const { return V(i, j)(x); }

    const Curve& V_eff(int i) const;
    void set_V_eff(int i, Curve c);

    double V_L(int i) const { return V(i, i).left_limit(); }
    double V_R(int i) const { return V(i, i).right_limit(); }

    // all V_ii and V_eff_i are zero: the phase-modified equations apply
    bool is_symmetric_zero() const;

    std::string name;

private:
    int index(int i, int j) const;
    int f_;
    std::vector<Curve> V_;  // upper triangle, row major
    std::vector<Curve> V_eff_;
};

struct ScatteringProblem {
    DiabaticModel model;
    double E = 0;
    double m = 2000;
    double hbar = 1;
    double x_L = -1, x_R = 1;
};

enum class VeffPolicy { automatic, diagonal, zero };

// automatic: V_ii for monotone or well-shaped diagonals, the constant plus
// tanh part for barrier-shaped ones (zero for a bare barrier)
Curve effective_potential(const Curve& Vii, VeffPolicy policy);
void apply_veff_policy(DiabaticModel& model, VeffPolicy policy);

enum class Benchmark {
    eckart_a,
    eckart_b,
    uphill_ramp,
    barrier_ramp,
    double_barrier,
    pure_coupling,
    tully1,
    tully2
};

const std::vector<Benchmark>& all_benchmarks();
std::string to_string(Benchmark b);
Benchmark parse_benchmark(const std::string& s);

using ParamMap = std::map<std::string, double>;

// shape parameters and their defaults, in the units named by the key suffix
ParamMap default_params(Benchmark b);

// throws ConfigError on unknown parameter keys
DiabaticModel make_benchmark(Benchmark b, const ParamMap& overrides = {});

enum class Integrator { rk4, cash_karp };
enum class Scheme { general, phase_modified, automatic };

// Table-style run parameters shipped with each benchmark
struct RunPreset {
    std::string label;
    double E = 0;
    int N = 20;
    double x_L = -2, x_R = 2;
    Integrator integrator = Integrator::rk4;
    Scheme scheme = Scheme::automatic;
    int steps_per_shift = 1;
    double eps = 1e-6;
    double t_max = 1000;
};

// first entry is the default
std::vector<RunPreset> presets(Benchmark b);
RunPreset preset(Benchmark b, const std::string& label = "");

ScatteringProblem make_problem(Benchmark b, const RunPreset& p, const ParamMap& overrides = {});

struct Check {
    std::string name;
    bool passed = true;
    bool hard = true;  // hard failures make the problem unusable
    double value = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    double min_E_minus_Veff = 0;
    double max_edge_coupling = 0;
    double max_edge_mismatch = 0;

    bool ok() const;        // no hard failure
    bool all_pass() const;  // no failure at all
    std::string summary() const;
};

// edge quantities are compared against tol * E
ValidationReport validate_problem(const ScatteringProblem& p, double tol = 1e-2);

// sech^2 barrier: V0 sech^2(width x). Returns (P_refl, P_trans).
std::pair<double, double> eckart_exact(double V0, double width, double m, double E, double hbar = 1);

}  // namespace cpwm
