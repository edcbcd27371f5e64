#include "cpwm/trajectory.hpp"

#include <array>
#include <boost/math/interpolators/quintic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>

#include "cpwm/cash_karp.hpp"
#include "cpwm/errors.hpp"

namespace cpwm {

using boost::math::interpolators::quintic_hermite;

double trajectory_velocity(const ScatteringProblem& p, int surface, double x) {
    double ke = p.E - p.model.V_eff(surface)(x);
    if (!(ke > 0))
        throw NumericalError("turning point on surface " + std::to_string(surface + 1) + " at x = " +
                             std::to_string(x));
    return std::sqrt(2 * ke / p.m);
}

double traversal_time(const ScatteringProblem& p, int surface) {
    auto inv = [&](double x) { return 1 / trajectory_velocity(p, surface, x); };
    double err = 0;
    double T = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inv, p.x_L, p.x_R, 20, 1e-14, &err);
    if (!std::isfinite(T) || T <= 0) throw NumericalError("trajectory traversal time is not finite");
    return T;
}

struct Trajectory::Impl {
    double t0 = 0, t1 = 0;
    quintic_hermite<std::vector<double>> X, A;
    Curve veff;
    double E = 0, m = 1;
    int surface = 0;

    Impl(quintic_hermite<std::vector<double>> x, quintic_hermite<std::vector<double>> a)
        : X(std::move(x)), A(std::move(a)) {}
};

namespace {

constexpr int kSamplesPerShift = 32;
constexpr double kTol = 1e-11;

struct Flow {
    const Curve& veff;
    double E, m;
    int surface;

    // returns (v, dv/dt) at x
    std::array<double, 2> operator()(double x) const {
        Jet j = veff.jet(x);
        double ke = E - j.v;
        if (!(ke > 0))
            throw NumericalError("turning point on surface " + std::to_string(surface + 1) + " at x = " +
                                 std::to_string(x));
        double v = std::sqrt(2 * ke / m);
        return {v, -j.d1 / m};
    }
};

// adaptive Cash-Karp on (x, A) from t to t + H, landing exactly on t + H
void integrate(const Flow& flow, std::array<double, 2>& y, double H, double& h) {
    namespace ck = cash_karp;
    auto rhs = [&](const std::array<double, 2>& s) {
        double v = flow(s[0])[0];
        return std::array<double, 2>{v, flow.m * v * v};
    };
    const double dir = H > 0 ? 1 : -1;
    double done = 0;
    h = std::min(std::abs(h), std::abs(H));
    while (std::abs(H) - done > 1e-15 * std::abs(H)) {
        double rem = std::abs(H) - done;
        double step = h >= rem ? rem : (rem <= h / ck::kSafety ? rem : h);
        for (;;) {
            std::array<std::array<double, 2>, 6> k;
            for (int s = 0; s < 6; ++s) {
                std::array<double, 2> ys = y;
                for (int q = 0; q < s; ++q)
                    for (int d = 0; d < 2; ++d) ys[d] += dir * step * ck::a[s][q] * k[q][d];
                k[s] = rhs(ys);
            }
            std::array<double, 2> y5 = y;
            double err = 0;
            for (int d = 0; d < 2; ++d) {
                double e = 0;
                for (int s = 0; s < 6; ++s) {
                    y5[d] += dir * step * ck::b5[s] * k[s][d];
                    e += step * (ck::b5[s] - ck::b4[s]) * k[s][d];
                }
                err = std::max(err, std::abs(e) / (kTol * (1 + std::abs(y[d]))));
            }
            if (err <= 1) {
                y = y5;
                done += step;
                h = ck::grow(step, err);
                break;
            }
            step = ck::shrink(step, err);
            if (step < 1e-14 * std::abs(H)) throw NumericalError("trajectory step underflow");
        }
    }
}

}  // namespace

Trajectory::Trajectory(const ScatteringProblem& p, int surface, double t_shift, int sites)
    : sites_(sites), t_shift_(t_shift) {
    if (!(t_shift > 0)) throw NumericalError("t_shift must be positive");
    Flow flow{p.model.V_eff(surface), p.E, p.m, surface};
    const double dt = t_shift / kSamplesPerShift;

    // backward samples, stored in reverse
    std::vector<double> tb, xb, ab;
    {
        std::array<double, 2> y{p.x_L, 0};
        double h = dt;
        for (int k = 0; k <= 2 * kSamplesPerShift; ++k) {
            if (k > 0) integrate(flow, y, -dt, h);
            tb.push_back(-k * dt);
            xb.push_back(y[0]);
            ab.push_back(y[1]);
        }
    }
    std::vector<double> t, x, a;
    for (int k = static_cast<int>(tb.size()) - 1; k > 0; --k) {
        t.push_back(tb[k]);
        x.push_back(xb[k]);
        a.push_back(ab[k]);
    }

    std::array<double, 2> y{p.x_L, 0};
    double h = dt;
    long end_index = sites > 0 ? static_cast<long>(sites + 1) * kSamplesPerShift : -1;
    for (long k = 0;; ++k) {
        if (k > 0) integrate(flow, y, dt, h);
        t.push_back(k * dt);
        x.push_back(y[0]);
        a.push_back(y[1]);
        if (end_index < 0 && k % kSamplesPerShift == 0) {
            long site = k / kSamplesPerShift;
            double tol = 1e-9 * (p.x_R - p.x_L);
            if (y[0] >= p.x_R - tol) {
                sites_ = static_cast<int>(site + 1);
                end_index = static_cast<long>(sites_ + 1) * kSamplesPerShift;
            }
            if (site > 10000000) throw NumericalError("trajectory does not reach x_R");
        }
        if (end_index >= 0 && k >= end_index) break;
    }

    std::vector<double> dx(t.size()), d2x(t.size()), da(t.size()), d2a(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        auto [v, acc] = flow(x[k]);
        dx[k] = v;
        d2x[k] = acc;
        da[k] = p.m * v * v;
        d2a[k] = 2 * p.m * v * acc;
    }
    double t0 = t.front(), t1 = t.back();
    auto tcopy = t;
    quintic_hermite<std::vector<double>> X(std::move(t), std::move(x), std::move(dx), std::move(d2x));
    quintic_hermite<std::vector<double>> A(std::move(tcopy), std::move(a), std::move(da), std::move(d2a));
    auto impl = std::make_shared<Impl>(std::move(X), std::move(A));
    impl->t0 = t0;
    impl->t1 = t1;
    impl->veff = p.model.V_eff(surface);
    impl->E = p.E;
    impl->m = p.m;
    impl->surface = surface;
    impl_ = impl;
}

double Trajectory::t_begin() const { return impl_->t0; }
double Trajectory::t_end() const { return impl_->t1; }

double Trajectory::x(double t) const {
    if (t < impl_->t0 || t > impl_->t1) throw NumericalError("trajectory evaluated outside its time range");
    return impl_->X(t);
}

double Trajectory::action(double t) const {
    if (t < impl_->t0 || t > impl_->t1) throw NumericalError("trajectory evaluated outside its time range");
    return impl_->A(t);
}

double Trajectory::velocity(double x) const {
    double ke = impl_->E - impl_->veff(x);
    if (!(ke > 0)) throw NumericalError("turning point on surface " + std::to_string(impl_->surface + 1));
    return std::sqrt(2 * ke / impl_->m);
}

std::vector<double> TrajectoryGrid::positions_at(double tau, int sign) const {
    std::vector<double> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) out[k] = trajectory->x(k * t_shift + sign * tau);
    return out;
}

std::vector<double> TrajectoryGrid::actions_at(double tau, int sign) const {
    std::vector<double> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) out[k] = trajectory->action(k * t_shift + sign * tau);
    return out;
}

namespace {

void relabel(TrajectoryGrid& g) {
    const long n = g.size();
    g.labels.resize(n);
    for (long k = 0; k < n; ++k) g.labels[k] = g.direction > 0 ? g.shift_count - k : g.shift_count + k - n + 1;
}

TrajectoryGrid make_grid(const ScatteringProblem& p, int surface, double t_shift, int sites, int direction) {
    if (direction != 1 && direction != -1) throw ConfigError("grid direction must be +1 or -1");
    TrajectoryGrid g;
    g.surface = surface;
    g.direction = direction;
    g.t_shift = t_shift;
    g.trajectory = std::make_shared<const Trajectory>(p, surface, t_shift, sites);
    const int n = g.trajectory->sites();
    for (int k = 0; k < n; ++k) {
        double x = g.trajectory->x(k * t_shift);
        g.points.push_back(x);
        g.velocities.push_back(g.trajectory->velocity(x));
        g.actions.push_back(g.trajectory->action(k * t_shift));
    }
    relabel(g);
    return g;
}

}  // namespace

TrajectoryGrid build_grid(const ScatteringProblem& p, int surface, int N, int direction) {
    if (N < 4) throw ConfigError("grid needs at least 4 points");
    if (!(p.x_L < p.x_R)) throw ConfigError("x_L must be below x_R");
    double T = traversal_time(p, surface);
    TrajectoryGrid g = make_grid(p, surface, T / (N - 1), N, direction);
    double miss = std::abs(g.points.back() - p.x_R);
    if (miss > 1e-7 * (p.x_R - p.x_L))
        throw NumericalError("trajectory grid misses x_R by " + std::to_string(miss));
    return g;
}

TrajectoryGrid build_grid_with_shift(const ScatteringProblem& p, int surface, double t_shift, int direction) {
    if (!(p.x_L < p.x_R)) throw ConfigError("x_L must be below x_R");
    TrajectoryGrid g = make_grid(p, surface, t_shift, 0, direction);
    if (g.size() < 4) throw ConfigError("covering grid on surface " + std::to_string(surface + 1) + " has fewer than 4 points");
    return g;
}

std::vector<TrajectoryGrid> build_grids(const ScatteringProblem& p, int N) {
    std::vector<TrajectoryGrid> out;
    out.push_back(build_grid(p, 0, N));
    for (int i = 1; i < p.model.f(); ++i) out.push_back(build_grid_with_shift(p, i, out[0].t_shift));
    return out;
}

TrajectoryGrid advance_grid(const TrajectoryGrid& g, int steps) {
    if (steps < 1) throw ConfigError("advance_grid needs steps >= 1");
    TrajectoryGrid out = g;
    out.shift_count += steps;
    relabel(out);
    return out;
}

void write_grid_csv(std::ostream& os, const TrajectoryGrid& g) {
    os << "k,x,v,action,t\n";
    os.precision(17);
    for (int k = 0; k < g.size(); ++k)
        os << k << ',' << g.points[k] << ',' << g.velocities[k] << ',' << g.actions[k] << ',' << k * g.t_shift
           << '\n';
}

}  // namespace cpwm
