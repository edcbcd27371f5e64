#pragma once

#include <string>
#include <vector>

#include "cpwm/propagator.hpp"

namespace cpwm {

struct HistoryPoint {
    double t = 0;
    std::vector<double> P_refl, P_trans;
};

struct ScatteringResult {
    std::vector<double> P_refl, P_trans;
    double unitarity_defect = 0;
    bool converged = false;
    std::vector<HistoryPoint> history;

    // problem identity
    std::string model_name;
    double E = 0;

    // run bookkeeping
    double t_final = 0;
    double t_shift = 0;
    long shifts = 0;
    std::vector<int> grid_sizes;
    long rhs_evaluations = 0;
    long accepted_steps = 0, rejected_steps = 0;
    double runtime_s = 0;
    std::string scheme;
    double max_change = 0;  // over the trailing window at the end
};

// Probabilities from the extremal grid values, scaled by the velocity ratio at
// the same points. Fills P_refl, P_trans and unitarity_defect only.
ScatteringResult probabilities(const PropagationState& s, const Propagator& prop);

// j = +/- v rho on the component's current points
std::vector<double> component_flux(const PropagationState& s, const Propagator& prop, int comp);

// (2/hbar) [V_ij - delta_ij (V_eff_i + C_i)] Im[psi_a^* psi_b] at the given positions,
// both components interpolated
std::vector<double> coupling_rate_at(const PropagationState& s, const Propagator& prop, int a, int b,
                                     std::span<const double> x);
// same, on the points of component a
std::vector<double> coupling_rate(const PropagationState& s, const Propagator& prop, int a, int b);

// Sum over components of int rho dx on [x_L, x_R]
double total_density(const PropagationState& s, const Propagator& prop);
// Sum over components of j(x_R) - j(x_L)
double net_outflow(const PropagationState& s, const Propagator& prop);

// [d/dt int sum rho + net outflow] / incident flux, from two nearby states
// (time derivative by finite difference, outflow by the trapezoid rule)
double continuity_residual(const PropagationState& a, const PropagationState& b, const Propagator& prop);

// advances a copy of s by one small RK4 step of t_shift / substeps and
// returns the continuity residual across it
double continuity_probe(const PropagationState& s, const Propagator& prop, int substeps = 64);

// rho_+(x) - rho_-(x), components summed over surfaces, on surface 1's points
struct DensityDifference {
    std::vector<double> x, diff;
    double mean = 0, stddev = 0;
};
DensityDifference summed_density_difference(const PropagationState& s, const Propagator& prop);

struct StueckelbergPhase {
    double phase = 0;       // radians; infinite for x at infinity
    double wavelength = 0;  // 2 pi / |d phase / dx|
};
// indefinite integral from x0 = 0 to x (x may be +/-infinity)
StueckelbergPhase stueckelberg(const ScatteringProblem& p, double x);
// definite integral over [a, b]
double stueckelberg_definite(const ScatteringProblem& p, double a, double b);

// positions of local maxima of a spline through (x, y), restricted to [lo, hi]
std::vector<double> local_maxima(std::span<const double> x, std::span<const double> y, double lo, double hi,
                                 int refine = 64);

// Wavelength of the strongest oscillation of y on [lo, hi]: least-squares fit of
// c0 + c1 x + a cos(kx) + b sin(kx) to the spline resampled on a uniform mesh,
// scanning 2 pi / k over [lambda_lo, lambda_hi]
struct OscillationFit {
    double wavelength = 0;
    double amplitude = 0;
    double explained = 0;  // fraction of detrended variance captured by the sinusoid
};
OscillationFit dominant_wavelength(std::span<const double> x, std::span<const double> y, double lo, double hi,
                                   double lambda_lo, double lambda_hi);

}  // namespace cpwm
