#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "cpwm/model.hpp"

namespace cpwm {

// v_i(x) = sqrt(2 (E - V_eff_i(x)) / m); throws NumericalError at a turning point
double trajectory_velocity(const ScatteringProblem& p, int surface, double x);

// time to cross [x_L, x_R] along surface i (adaptive Gauss-Kronrod)
double traversal_time(const ScatteringProblem& p, int surface);

// One classical-like trajectory x(t) with x(0) = x_L, tabulated on a fine time
// mesh and evaluated by quintic Hermite interpolation. Also carries the action
// A(t) = int_{x_L}^{x(t)} m v dx used as the phase trend.
class Trajectory {
public:
    // Integrates from -2 t_shift up to (sites + 1) t_shift. With sites = 0 the
    // count is chosen so site (sites - 1) is the first at or beyond x_R.
    Trajectory(const ScatteringProblem& p, int surface, double t_shift, int sites = 0);

    double x(double t) const;
    double action(double t) const;
    double velocity(double x) const;

    int sites() const { return sites_; }
    double t_shift() const { return t_shift_; }
    double t_begin() const;
    double t_end() const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
    int sites_ = 0;
    double t_shift_ = 0;
};

// Sites visited by a surface's trajectories at commensurate times. The + grid
// at sub-shift time tau occupies x(k t_shift + tau), the - grid x(k t_shift - tau).
struct TrajectoryGrid {
    int surface = 0;
    int direction = +1;
    double t_shift = 0;
    std::vector<double> points;
    std::vector<double> velocities;
    std::vector<double> actions;
    // trajectory identity per site; the trajectory entering at shift s has label s
    std::vector<long> labels;
    long shift_count = 0;
    std::shared_ptr<const Trajectory> trajectory;

    int size() const { return static_cast<int>(points.size()); }
    std::vector<double> positions_at(double tau, int sign) const;
    std::vector<double> positions_at(double tau) const { return positions_at(tau, direction); }
    std::vector<double> actions_at(double tau, int sign) const;
};

// t_shift = T_i / (N - 1), N sites from x_L to x_R
TrajectoryGrid build_grid(const ScatteringProblem& p, int surface, int N, int direction = +1);

// prescribed t_shift, covering grid (last site at or beyond x_R)
TrajectoryGrid build_grid_with_shift(const ScatteringProblem& p, int surface, double t_shift, int direction = +1);

// surface 0 sets the common t_shift, the rest get covering grids
std::vector<TrajectoryGrid> build_grids(const ScatteringProblem& p, int N);

// Moves the grid forward by whole shifts. Sites are fixed, so only the labels
// change: + labels move one site right, - labels one site left.
TrajectoryGrid advance_grid(const TrajectoryGrid& g, int steps);

void write_grid_csv(std::ostream& os, const TrajectoryGrid& g);

}  // namespace cpwm
