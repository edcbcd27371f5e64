#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cpwm/model.hpp"
#include "cpwm/observables.hpp"

namespace cpwm {

// Stationary coupled-channel solution of the matrix Schroedinger equation on
// a fine uniform grid. Independent of the trajectory machinery: outgoing-wave
// solutions are integrated from the right asymptote to the left one with a
// fixed-step Runge-Kutta-Fehlberg 7(8) scheme and matched to a unit incident
// wave on surface 1.
struct OracleSolution {
    std::vector<double> P_refl, P_trans;
    double unitarity_defect = 0;
    double resolution_defect = 0;  // max |P(N) - P(2N)|, 0 if not checked
    std::vector<bool> open_left, open_right;

    // problem identity
    std::string model_name;
    double E = 0;
    int f = 0;

    // grid spec: dense_N uniform steps over [X_L, X_R]
    double X_L = 0, X_R = 0;
    int dense_N = 0;
    std::vector<double> x;
    std::vector<std::vector<std::complex<double>>> psi, dpsi;  // [surface][node]

    // cubic Hermite evaluation of the total wavefunction on surface i
    std::complex<double> psi_at(int i, double x) const;
    double runtime_s = 0;
};

struct OracleOptions {
    int dense_N = 0;              // 0 picks ~100 steps per shortest wavelength
    double asymptote_tol = 1e-12; // window grows until V is this close to its limits (relative to E)
    bool check_resolution = true; // re-solve on 2N steps and report the change
    bool keep_wavefunction = true;
};

OracleSolution solve_reference(const ScatteringProblem& p, const OracleOptions& opt = {});
OracleSolution solve_reference(const ScatteringProblem& p, int dense_N);

struct CompareReport {
    std::vector<double> d_refl, d_trans;  // cpwm - oracle
    double max_defect = 0;
    double tol = 0;
    bool pass = false;
};

// throws ConfigError when the two results describe different problems
CompareReport compare(const ScatteringResult& cpwm, const OracleSolution& oracle, double tol = 1e-4);

}  // namespace cpwm
