#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cpwm/model.hpp"
#include "cpwm/trajectory.hpp"

namespace cpwm {

using cplx = std::complex<double>;
// one array of values per component, component index 2 i + (sign < 0)
using Field = std::vector<std::vector<cplx>>;

enum class Execution { automatic, serial, openmp };

struct PropagatorConfig {
    int N = 20;
    Integrator integrator = Integrator::rk4;
    Scheme scheme = Scheme::automatic;
    int steps_per_shift = 1;
    double eps = 1e-6;
    double t_max = 1000;
    double p_tol = 1e-6;
    int window = 10;  // shifts
    bool early_stop = false;
    double dt0_fraction = 0.01;
    double dt_min_fraction = 1e-8;
    Execution execution = Execution::automatic;
    int snapshot_every = 0;  // shifts, 0 = off
};

std::string to_string(Integrator i);
std::string to_string(Scheme s);
std::string to_string(Execution e);
Integrator parse_integrator(const std::string& s);
Scheme parse_scheme(const std::string& s);

inline int component_index(int surface, int sign) { return 2 * surface + (sign < 0 ? 1 : 0); }

struct ComponentField {
    int surface = 0;
    int sign = +1;
    std::vector<double> x;
    std::vector<cplx> psi;
    std::vector<double> rho;  // |psi|^2
    std::vector<double> S;    // unwrapped phase
    std::string label() const { return std::to_string(surface + 1) + (sign > 0 ? "+" : "-"); }
};

struct PropagationState {
    double t = 0;
    long shifts = 0;
    double tau = 0;    // time since the last shift event
    int substep = 0;   // fixed-step index inside the current shift
    double phi = 0;    // boundary phase: the pin is exp(-i phi) in the physical frame
    double E = 0, m = 0, hbar = 1;
    Scheme scheme = Scheme::general;
    std::vector<ComponentField> components;
    double h_next = 0;  // adaptive step proposal

    const ComponentField& component(int surface, int sign) const {
        return components[component_index(surface, sign)];
    }
};

struct StepRecord {
    double t = 0;  // start of the attempt
    double dt = 0;
    double err = 0;
    bool accepted = false;
};

// Spline a component's amplitude and unwrapped phase and evaluate at targets.
// Targets outside the source range take the extremal point's values, negative
// interpolated amplitudes are reset to zero.
std::vector<cplx> interpolate_polar(const ComponentField& source, std::span<const double> targets);

// Unwrap arg(psi) - trend along the grid and add the trend back. Points with
// zero amplitude inherit their neighbour's residual.
std::vector<double> unwrap_phase(std::span<const cplx> psi, std::span<const double> trend);

// Bundles the problem, its trajectory grids and the evolution equations.
// Geometry at sub-shift times is cached, so an instance must not be shared
// between threads; states are plain values and may move freely.
class Propagator {
public:
    Propagator(ScatteringProblem problem, PropagatorConfig config);
    ~Propagator();
    Propagator(Propagator&&) noexcept;

    const ScatteringProblem& problem() const { return problem_; }
    const PropagatorConfig& config() const { return config_; }
    const std::vector<TrajectoryGrid>& grids() const { return grids_; }
    Scheme scheme() const { return scheme_; }
    double t_shift() const { return grids_.front().t_shift; }
    int f() const { return problem_.model.f(); }
    bool parallel() const { return parallel_; }
    void set_execution(Execution e);

    PropagationState initial_state() const;

    // d psi / dt along the trajectories at the state's tau
    Field rhs(const PropagationState& s) const;
    Field rhs_general(const PropagationState& s) const;
    // phase-rotated components; needs V_ii and V_eff zero at both edges
    Field rhs_symmetric(const PropagationState& s) const;

    // one fixed step of t_shift / steps_per_shift; performs the shift event when due
    void step_rk4(PropagationState& s) const;
    void step_rk4(PropagationState& s, int steps_per_shift) const;
    // one accepted adaptive step, returns its size
    double step_cash_karp(PropagationState& s, double eps, std::vector<StepRecord>* log = nullptr) const;
    // dispatches on config().integrator
    void step(PropagationState& s, std::vector<StepRecord>* log = nullptr) const;

    // positions and polar fields at the current tau
    void resync(PropagationState& s) const;

    // pinned incident value at time t in the state's frame
    cplx boundary_value(double t) const;

    // current positions and velocities of a component
    std::vector<double> positions(int comp, double tau) const;
    double velocity(int surface, double x) const;

    long rhs_evaluations() const { return rhs_calls_; }

    struct Geometry;

private:
    const Geometry& geometry(double tau, Scheme scheme) const;
    void eval_rhs(const Geometry& g, const Field& y, Field& out, bool parallel) const;
    void shift(PropagationState& s) const;
    void check_finite(const PropagationState& s) const;

    ScatteringProblem problem_;
    PropagatorConfig config_;
    std::vector<TrajectoryGrid> grids_;
    Scheme scheme_;
    bool parallel_ = false;
    mutable std::map<std::pair<double, int>, std::unique_ptr<Geometry>> cache_;
    mutable long rhs_calls_ = 0;
};

}  // namespace cpwm
