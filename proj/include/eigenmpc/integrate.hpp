#pragma once

#include <functional>
#include <vector>

#include "eigenmpc/system.hpp"

namespace eigenmpc {

/// Fixed-step sampled trajectory. times has one entry per sample,
/// inputs one entry per step (|inputs| = |times| - 1).
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<Control> inputs;
    std::vector<double> energies;

    std::size_t size() const { return times.size(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Rest point of a brake orbit: the first strict local minimum of kinetic
/// energy after the grace window.
struct TurningEvent {
    double t_star = 0.0;
    State state_star;
    Vec residual;  // velocities at the event
};

/// Classical RK4 step of (xd, forward_dynamics) with zero-order-hold input.
State rk4_step(const MechanicalSystem& sys, const State& s, const Control& u, double dt);

/// RK4 step together with exact sensitivities of the discrete map:
/// A = d s' / d s (2n x 2n), B = d s' / d u (2n x n), obtained by
/// differentiating the RK4 stages through dynamics_jacobians.
State rk4_step_with_sensitivity(const MechanicalSystem& sys, const State& s, const Control& u,
                                double dt, Mat& A, Mat& B);

/// Unforced flow over [0, t_end].
Trajectory flow(const MechanicalSystem& sys, const State& s0, double dt, double t_end);

/// Forced flow with one piecewise-constant input per step. u(t) may be
/// shorter than the step count; missing steps use zero input.
Trajectory flow(const MechanicalSystem& sys, const State& s0, double dt, double t_end,
                const std::vector<Control>& inputs);

/// Integrates the unforced flow from rest at q0 and locates the first strict
/// local minimum of kinetic energy after t_grace = 10 dt, refined by
/// bisection on d(kinetic)/dt = -xd^T dV/dx to 1e-10 s.
TurningEvent find_turning_point(const MechanicalSystem& sys, const Vec& q0, double dt,
                                double t_max);

}  // namespace eigenmpc
