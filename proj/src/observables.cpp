#include "cpwm/observables.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "cpwm/errors.hpp"
#include "cpwm/spline.hpp"

namespace cpwm {

ScatteringResult probabilities(const PropagationState& s, const Propagator& prop) {
    const auto& P = prop.problem();
    const int f = P.model.f();
    const double v1 = prop.velocity(0, P.x_L);
    ScatteringResult r;
    r.P_refl.resize(f);
    r.P_trans.resize(f);
    double sum = 0;
    for (int i = 0; i < f; ++i) {
        const auto& m = s.component(i, -1);
        const auto& p = s.component(i, +1);
        r.P_refl[i] = prop.velocity(i, m.x.front()) / v1 * std::norm(m.psi.front());
        r.P_trans[i] = prop.velocity(i, p.x.back()) / v1 * std::norm(p.psi.back());
        sum += r.P_refl[i] + r.P_trans[i];
    }
    r.unitarity_defect = sum - 1;
    r.scheme = to_string(s.scheme);
    r.model_name = P.model.name;
    r.E = P.E;
    r.t_final = s.t;
    r.shifts = s.shifts;
    r.t_shift = prop.t_shift();
    for (const auto& g : prop.grids()) r.grid_sizes.push_back(g.size());
    return r;
}

std::vector<double> component_flux(const PropagationState& s, const Propagator& prop, int comp) {
    const auto& F = s.components.at(comp);
    std::vector<double> j(F.x.size());
    for (std::size_t k = 0; k < j.size(); ++k) j[k] = F.sign * prop.velocity(F.surface, F.x[k]) * F.rho[k];
    return j;
}

namespace {

double rate_coefficient(const ScatteringProblem& P, int i, int j, double x) {
    double c = P.model.eval(i, j, x);
    if (i == j) {
        Jet ve = P.model.V_eff(i).jet(x);
        double D = P.E - ve.v;
        double C = P.hbar * P.hbar / (2 * P.m) * (5.0 / 16 * (ve.d1 / D) * (ve.d1 / D) + 0.25 * ve.d2 / D);
        c -= ve.v + C;
    }
    return 2 / P.hbar * c;
}

}  // namespace

std::vector<double> coupling_rate_at(const PropagationState& s, const Propagator& prop, int a, int b,
                                     std::span<const double> x) {
    if (a == b) throw ConfigError("coupling rate needs two distinct components");
    const auto& A = s.components.at(a);
    const auto& B = s.components.at(b);
    auto pa = interpolate_polar(A, x);
    auto pb = interpolate_polar(B, x);
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        out[k] = rate_coefficient(prop.problem(), A.surface, B.surface, x[k]) * std::imag(std::conj(pa[k]) * pb[k]);
    return out;
}

std::vector<double> coupling_rate(const PropagationState& s, const Propagator& prop, int a, int b) {
    if (a == b) throw ConfigError("coupling rate needs two distinct components");
    const auto& A = s.components.at(a);
    const auto& B = s.components.at(b);
    auto pb = interpolate_polar(B, A.x);
    std::vector<double> out(A.x.size());
    for (std::size_t k = 0; k < A.x.size(); ++k)
        out[k] = rate_coefficient(prop.problem(), A.surface, B.surface, A.x[k]) *
                 std::imag(std::conj(A.psi[k]) * pb[k]);
    return out;
}

namespace {

// integral of the end-clamped spline over [lo, hi]
double clamped_integral(const NaturalSpline& sp, double lo, double hi) {
    double I = sp.integral(lo, hi);
    if (lo < sp.x_min()) I += sp(sp.x_min()) * (std::min(hi, sp.x_min()) - lo);
    if (hi > sp.x_max()) I += sp(sp.x_max()) * (hi - std::max(lo, sp.x_max()));
    return I;
}

}  // namespace

double total_density(const PropagationState& s, const Propagator& prop) {
    const auto& P = prop.problem();
    double I = 0;
    for (const auto& F : s.components) {
        NaturalSpline sp(F.x, F.rho);
        I += clamped_integral(sp, P.x_L, P.x_R);
    }
    return I;
}

double net_outflow(const PropagationState& s, const Propagator& prop) {
    const auto& P = prop.problem();
    double out = 0;
    for (const auto& F : s.components) {
        NaturalSpline sp(F.x, F.rho);
        auto j = [&](double x) { return F.sign * prop.velocity(F.surface, x) * std::max(0.0, sp(x)); };
        out += j(P.x_R) - j(P.x_L);
    }
    return out;
}

double continuity_residual(const PropagationState& a, const PropagationState& b, const Propagator& prop) {
    const double dt = b.t - a.t;
    if (!(dt > 0)) throw ConfigError("continuity residual needs two states ordered in time");
    const double inc = prop.velocity(0, prop.problem().x_L);
    double dI = (total_density(b, prop) - total_density(a, prop)) / dt;
    double F = 0.5 * (net_outflow(a, prop) + net_outflow(b, prop));
    return (dI + F) / inc;
}

double continuity_probe(const PropagationState& s, const Propagator& prop, int substeps) {
    if (s.tau != 0 || s.substep != 0) throw ConfigError("continuity probe must start on a shift boundary");
    PropagationState b = s;
    prop.step_rk4(b, substeps);
    return continuity_residual(s, b, prop);
}

DensityDifference summed_density_difference(const PropagationState& s, const Propagator& prop) {
    DensityDifference d;
    d.x = s.components.front().x;
    const int f = prop.f();
    std::vector<double> plus(d.x.size(), 0.0), minus(d.x.size(), 0.0);
    for (int i = 0; i < f; ++i) {
        auto p = interpolate_polar(s.component(i, +1), d.x);
        auto m = interpolate_polar(s.component(i, -1), d.x);
        for (std::size_t k = 0; k < d.x.size(); ++k) {
            plus[k] += std::norm(p[k]);
            minus[k] += std::norm(m[k]);
        }
    }
    d.diff.resize(d.x.size());
    double sum = 0;
    for (std::size_t k = 0; k < d.x.size(); ++k) {
        d.diff[k] = plus[k] - minus[k];
        sum += d.diff[k];
    }
    d.mean = sum / d.diff.size();
    double var = 0;
    for (double v : d.diff) var += (v - d.mean) * (v - d.mean);
    d.stddev = std::sqrt(var / d.diff.size());
    return d;
}

namespace {

double momentum(const ScatteringProblem& p, int i, double V) {
    double ke = p.E - V;
    if (!(ke > 0)) throw ConfigError("closed channel on surface " + std::to_string(i + 1));
    return std::sqrt(2 * p.m * ke);
}

double dp(const ScatteringProblem& p, double x) {
    return momentum(p, 0, p.model.eval(0, 0, x)) - momentum(p, 1, p.model.eval(1, 1, x));
}

}  // namespace

double stueckelberg_definite(const ScatteringProblem& p, double a, double b) {
    if (p.model.f() < 2) throw ConfigError("Stueckelberg phase needs two surfaces");
    auto g = [&](double x) { return dp(p, x); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 15, 1e-12) / p.hbar;
}

StueckelbergPhase stueckelberg(const ScatteringProblem& p, double x) {
    if (p.model.f() < 2) throw ConfigError("Stueckelberg phase needs two surfaces");
    constexpr double twopi = 2 * std::numbers::pi;
    StueckelbergPhase r;
    if (std::isinf(x)) {
        bool right = x > 0;
        double V1 = right ? p.model.V_R(0) : p.model.V_L(0);
        double V2 = right ? p.model.V_R(1) : p.model.V_L(1);
        double d = momentum(p, 0, V1) - momentum(p, 1, V2);
        r.wavelength = twopi * p.hbar / std::abs(d);
        r.phase = d == 0 ? 0 : std::copysign(INFINITY, right ? d : -d);
        return r;
    }
    r.phase = stueckelberg_definite(p, 0, x);
    r.wavelength = twopi * p.hbar / std::abs(dp(p, x));
    return r;
}

std::vector<double> local_maxima(std::span<const double> x, std::span<const double> y, double lo, double hi,
                                 int refine) {
    NaturalSpline sp(x, y);
    lo = std::max(lo, x.front());
    hi = std::min(hi, x.back());
    std::vector<double> out;
    if (!(hi > lo)) return out;
    const long n = static_cast<long>(x.size()) * refine;
    const double h = (hi - lo) / n;
    for (long k = 1; k < n; ++k) {
        double xm = lo + (k - 1) * h, x0 = lo + k * h, xp = lo + (k + 1) * h;
        double ym = sp(xm), y0 = sp(x0), yp = sp(xp);
        if (y0 > ym && y0 >= yp) {
            double den = ym - 2 * y0 + yp;
            double off = den != 0 ? 0.5 * (ym - yp) / den : 0;
            out.push_back(x0 + off * h);
        }
    }
    return out;
}

namespace {

struct SineFit {
    double rss = 0, amplitude = 0;
};

SineFit fit_sine(const std::vector<double>& x, const Eigen::VectorXd& y, double k) {
    const long n = static_cast<long>(x.size());
    Eigen::MatrixXd A(n, 4);
    for (long q = 0; q < n; ++q) A.row(q) << 1, x[q], std::cos(k * x[q]), std::sin(k * x[q]);
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    return {(A * c - y).squaredNorm(), std::hypot(c(2), c(3))};
}

}  // namespace

OscillationFit dominant_wavelength(std::span<const double> x, std::span<const double> y, double lo, double hi,
                                   double lambda_lo, double lambda_hi) {
    if (!(lambda_lo > 0 && lambda_hi > lambda_lo)) throw ConfigError("wavelength search range is empty");
    NaturalSpline sp(x, y);
    lo = std::max(lo, x.front());
    hi = std::min(hi, x.back());
    if (!(hi - lo > lambda_lo)) throw ConfigError("fit interval is shorter than the smallest wavelength");
    const int n = 1024;
    std::vector<double> xs(n);
    Eigen::VectorXd ys(n);
    for (int q = 0; q < n; ++q) {
        xs[q] = lo + (hi - lo) * q / (n - 1);
        ys(q) = sp(xs[q]);
    }
    // detrended variance
    Eigen::MatrixXd L(n, 2);
    for (int q = 0; q < n; ++q) L.row(q) << 1, xs[q];
    const double var = (L * L.colPivHouseholderQr().solve(ys) - ys).squaredNorm();

    constexpr double twopi = 2 * std::numbers::pi;
    auto rss = [&](double lam) { return fit_sine(xs, ys, twopi / lam).rss; };
    const int scan = 400;
    double best = lambda_lo, best_r = INFINITY;
    for (int q = 0; q <= scan; ++q) {
        double lam = lambda_lo * std::pow(lambda_hi / lambda_lo, double(q) / scan);
        double r = rss(lam);
        if (r < best_r) best_r = r, best = lam;
    }
    // golden-section refinement inside the neighbouring scan cells
    const double ratio = std::pow(lambda_hi / lambda_lo, 1.0 / scan);
    double a = std::max(lambda_lo, best / ratio), b = std::min(lambda_hi, best * ratio);
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double f1 = rss(c1), f2 = rss(c2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) b = c2, c2 = c1, f2 = f1, c1 = b - g * (b - a), f1 = rss(c1);
        else a = c1, c1 = c2, f1 = f2, c2 = a + g * (b - a), f2 = rss(c2);
    }
    OscillationFit out;
    out.wavelength = 0.5 * (a + b);
    SineFit fit = fit_sine(xs, ys, twopi / out.wavelength);
    out.amplitude = fit.amplitude;
    out.explained = var > 0 ? 1 - fit.rss / var : 0;
    return out;
}

}  // namespace cpwm
