#include "cpwm/oracle.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>

#include "cpwm/errors.hpp"

namespace cpwm {

using cd = std::complex<double>;

std::complex<double> OracleSolution::psi_at(int i, double xq) const {
    if (x.empty()) throw ConfigError("oracle solution kept no wavefunction");
    const double h = (X_R - X_L) / dense_N;
    if (xq <= X_L) return psi[i].front();
    if (xq >= X_R) return psi[i].back();
    int n = std::min(dense_N - 1, static_cast<int>((xq - X_L) / h));
    double s = (xq - x[n]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * psi[i][n] + h10 * h * dpsi[i][n] + h01 * psi[i][n + 1] + h11 * h * dpsi[i][n + 1];
}

namespace {

// largest deviation of the potential matrix from its asymptotic limits at x
double tail(const DiabaticModel& M, double x, bool right) {
    double d = 0;
    for (int i = 0; i < M.f(); ++i)
        for (int j = i; j < M.f(); ++j) {
            double lim = i == j ? (right ? M.V_R(i) : M.V_L(i)) : 0.0;
            d = std::max(d, std::abs(M.eval(i, j, x) - lim));
        }
    return d;
}

double extend(const DiabaticModel& M, double x, double tol, bool right) {
    const double step = right ? 0.25 : -0.25;
    for (int n = 0; n < 40000; ++n, x += step)
        if (tail(M, x, right) <= tol && tail(M, x + step, right) <= tol) return x + step;
    throw NumericalError("potential never reaches its asymptote");
}

struct Solved {
    std::vector<double> refl, trans;
    std::vector<double> x;
    std::vector<std::vector<cd>> psi, dpsi;
};

Solved solve_once(const ScatteringProblem& p, double XL, double XR, int N, bool keep,
                  std::vector<bool>& open_left, std::vector<bool>& open_right) {
    const auto& M = p.model;
    const int f = M.f();
    const double s2m = 2 * p.m / (p.hbar * p.hbar);

    // state: column s holds solution s as (psi_0..psi_{f-1}, psi'_0..psi'_{f-1})
    using state = std::vector<cd>;
    const int dim = 2 * f;
    auto idx = [dim](int s, int r) { return s * dim + r; };

    std::vector<double> kL(f), kR(f);
    open_left.assign(f, false);
    open_right.assign(f, false);
    for (int i = 0; i < f; ++i) {
        double eL = p.E - M.V_L(i), eR = p.E - M.V_R(i);
        open_left[i] = eL > 0;
        open_right[i] = eR > 0;
        kL[i] = std::sqrt(s2m * std::abs(eL));
        kR[i] = std::sqrt(s2m * std::abs(eR));
    }

    state y(f * dim, cd(0));
    for (int s = 0; s < f; ++s) {
        y[idx(s, s)] = 1;
        y[idx(s, f + s)] = open_right[s] ? cd(0, kR[s]) : cd(-kR[s], 0);
    }

    std::vector<double> W(f * f);
    auto system = [&](const state& u, state& du, double x) {
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f; ++j) W[i * f + j] = s2m * (M.eval(i, j, x) - (i == j ? p.E : 0.0));
        for (int s = 0; s < f; ++s)
            for (int i = 0; i < f; ++i) {
                du[idx(s, i)] = u[idx(s, f + i)];
                cd acc = 0;
                for (int j = 0; j < f; ++j) acc += W[i * f + j] * u[idx(s, j)];
                du[idx(s, f + i)] = acc;
            }
    };

    namespace ode = boost::numeric::odeint;
    ode::runge_kutta_fehlberg78<state> stepper;
    const double h = (XR - XL) / N;
    std::vector<state> saved;
    if (keep) saved.resize(N + 1);
    if (keep) saved[N] = y;
    double x = XR;
    for (int n = N - 1; n >= 0; --n) {
        stepper.do_step(system, y, x, -h);
        x = XL + n * h;
        if (keep) saved[n] = y;
    }

    // decompose at XL: open a e^{ikx} + b e^{-ikx}; closed keeps only the decaying part
    Eigen::MatrixXcd A(f, f), B(f, f);
    for (int s = 0; s < f; ++s)
        for (int i = 0; i < f; ++i) {
            cd u = y[idx(s, i)], du = y[idx(s, f + i)];
            if (open_left[i]) {
                cd ik(0, kL[i]);
                A(i, s) = 0.5 * (u + du / ik) * std::exp(-ik * XL);
                B(i, s) = 0.5 * (u - du / ik) * std::exp(ik * XL);
            } else {
                A(i, s) = 0.5 * (u - du / kL[i]);
                B(i, s) = 0;
            }
        }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(f);
    rhs(0) = 1;
    Eigen::VectorXcd c = A.fullPivLu().solve(rhs);
    Eigen::VectorXcd b = B * c;

    Solved out;
    out.refl.assign(f, 0.0);
    out.trans.assign(f, 0.0);
    for (int i = 0; i < f; ++i) {
        if (open_left[i]) out.refl[i] = kL[i] / kL[0] * std::norm(b(i));
        if (open_right[i]) out.trans[i] = kR[i] / kL[0] * std::norm(c(i));
    }
    if (keep) {
        out.x.resize(N + 1);
        out.psi.assign(f, std::vector<cd>(N + 1));
        out.dpsi.assign(f, std::vector<cd>(N + 1));
        for (int n = 0; n <= N; ++n) {
            out.x[n] = XL + n * h;
            for (int i = 0; i < f; ++i) {
                cd v = 0, dv = 0;
                for (int s = 0; s < f; ++s) {
                    v += c(s) * saved[n][idx(s, i)];
                    dv += c(s) * saved[n][idx(s, f + i)];
                }
                out.psi[i][n] = v;
                out.dpsi[i][n] = dv;
            }
        }
    }
    return out;
}

}  // namespace

OracleSolution solve_reference(const ScatteringProblem& p, const OracleOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto& M = p.model;
    if (!(p.E > M.V_L(0))) throw ConfigError("incident channel is closed");
    if (!(p.x_L < p.x_R)) throw ConfigError("x_L must be below x_R");

    const double tol = opt.asymptote_tol * std::max(std::abs(p.E), 1e-300);
    const double XL = extend(M, p.x_L, tol, false);
    const double XR = extend(M, p.x_R, tol, true);

    int N = opt.dense_N;
    if (N <= 0) {
        // local wavenumber bound over the window
        double vmin = INFINITY;
        for (int i = 0; i < M.f(); ++i)
            for (int n = 0; n <= 2000; ++n) vmin = std::min(vmin, M.eval(i, i, XL + (XR - XL) * n / 2000));
        double kmax = std::sqrt(2 * p.m * std::max(p.E - vmin, 1e-8)) / p.hbar;
        N = std::max(4000, static_cast<int>(std::ceil((XR - XL) * kmax / 0.06)));
    }

    OracleSolution sol;
    sol.model_name = M.name;
    sol.E = p.E;
    sol.f = M.f();
    sol.X_L = XL;
    sol.X_R = XR;

    Solved fine;
    if (opt.check_resolution) {
        std::vector<bool> ol, orr;
        Solved coarse = solve_once(p, XL, XR, N, false, ol, orr);
        fine = solve_once(p, XL, XR, 2 * N, opt.keep_wavefunction, sol.open_left, sol.open_right);
        for (int i = 0; i < M.f(); ++i) {
            sol.resolution_defect = std::max(sol.resolution_defect, std::abs(fine.refl[i] - coarse.refl[i]));
            sol.resolution_defect = std::max(sol.resolution_defect, std::abs(fine.trans[i] - coarse.trans[i]));
        }
        sol.dense_N = 2 * N;
    } else {
        fine = solve_once(p, XL, XR, N, opt.keep_wavefunction, sol.open_left, sol.open_right);
        sol.dense_N = N;
    }
    sol.P_refl = fine.refl;
    sol.P_trans = fine.trans;
    double sum = 0;
    for (int i = 0; i < M.f(); ++i) sum += sol.P_refl[i] + sol.P_trans[i];
    sol.unitarity_defect = sum - 1;
    if (!std::isfinite(sum)) throw NumericalError("oracle propagation produced non-finite amplitudes");
    sol.x = std::move(fine.x);
    sol.psi = std::move(fine.psi);
    sol.dpsi = std::move(fine.dpsi);
    sol.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

OracleSolution solve_reference(const ScatteringProblem& p, int dense_N) {
    OracleOptions o;
    o.dense_N = dense_N;
    return solve_reference(p, o);
}

CompareReport compare(const ScatteringResult& r, const OracleSolution& o, double tol) {
    if (r.P_refl.size() != static_cast<std::size_t>(o.f) || r.model_name != o.model_name ||
        std::abs(r.E - o.E) > 1e-12 * std::max(1.0, std::abs(o.E)))
        throw ConfigError("cpwm result and oracle solution describe different problems");
    CompareReport c;
    c.tol = tol;
    for (int i = 0; i < o.f; ++i) {
        c.d_refl.push_back(r.P_refl[i] - o.P_refl[i]);
        c.d_trans.push_back(r.P_trans[i] - o.P_trans[i]);
        c.max_defect = std::max({c.max_defect, std::abs(c.d_refl.back()), std::abs(c.d_trans.back())});
    }
    c.pass = c.max_defect <= tol;
    return c;
}

}  // namespace cpwm
