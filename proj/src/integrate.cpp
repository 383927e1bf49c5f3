#include "eigenmpc/integrate.hpp"

#include <cmath>

namespace eigenmpc {

namespace {

Vec field(const MechanicalSystem& sys, const State& s, const Control& u) {
    const int n = s.dim();
    Vec f(2 * n);
    f.head(n) = s.xdot;
    f.tail(n) = forward_dynamics(sys, s, u);
    return f;
}

double kinetic(const MechanicalSystem& sys, const State& s) {
    return 0.5 * s.xdot.dot(sys.mass_matrix(s.x) * s.xdot);
}

}  // namespace

State rk4_step(const MechanicalSystem& sys, const State& s, const Control& u, double dt) {
    const Vec z = s.stacked();
    const Vec k1 = field(sys, s, u);
    const Vec k2 = field(sys, State::from_stacked(z + 0.5 * dt * k1), u);
    const Vec k3 = field(sys, State::from_stacked(z + 0.5 * dt * k2), u);
    const Vec k4 = field(sys, State::from_stacked(z + dt * k3), u);
    return State::from_stacked(z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

State rk4_step_with_sensitivity(const MechanicalSystem& sys, const State& s, const Control& u,
                                double dt, Mat& A, Mat& B) {
    const int n = s.dim();
    const int m = 2 * n;
    const Vec z = s.stacked();

    Vec k[4];
    Mat ks[4], ku[4];
    Mat fs(m, m), fu(m, n);

    State stage = s;
    for (int i = 0; i < 4; ++i) {
        k[i] = field(sys, stage, u);
        dynamics_jacobians(sys, stage, u, fs, fu);
        if (i == 0) {
            ks[i] = fs;
            ku[i] = fu;
        } else {
            const double c = (i < 3) ? 0.5 * dt : dt;
            ks[i] = fs * (Mat::Identity(m, m) + c * ks[i - 1]);
            ku[i] = fs * (c * ku[i - 1]) + fu;
        }
        if (i < 3) {
            const double c = (i < 2) ? 0.5 * dt : dt;
            stage = State::from_stacked(z + c * k[i]);
        }
    }

    A = Mat::Identity(m, m) + dt / 6.0 * (ks[0] + 2.0 * ks[1] + 2.0 * ks[2] + ks[3]);
    B = dt / 6.0 * (ku[0] + 2.0 * ku[1] + 2.0 * ku[2] + ku[3]);
    return State::from_stacked(z + dt / 6.0 * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]));
}

Trajectory flow(const MechanicalSystem& sys, const State& s0, double dt, double t_end) {
    return flow(sys, s0, dt, t_end, {});
}

Trajectory flow(const MechanicalSystem& sys, const State& s0, double dt, double t_end,
                const std::vector<Control>& inputs) {
    if (dt <= 0.0 || t_end < dt) throw ConfigError("flow requires dt > 0 and t_end >= dt");
    const int n = sys.dim();
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const Control zero = Control::Zero(n);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.inputs.reserve(steps);
    traj.energies.reserve(steps + 1);

    State s = s0;
    traj.times.push_back(0.0);
    traj.states.push_back(s);
    traj.energies.push_back(energy(sys, s));
    for (std::size_t i = 0; i < steps; ++i) {
        const Control& u = i < inputs.size() ? inputs[i] : zero;
        s = rk4_step(sys, s, u, dt);
        if (!s.finite()) throw DivergenceError(static_cast<double>(i) * dt);
        traj.times.push_back(static_cast<double>(i + 1) * dt);
        traj.states.push_back(s);
        traj.inputs.push_back(u);
        traj.energies.push_back(energy(sys, s));
    }
    return traj;
}

TurningEvent find_turning_point(const MechanicalSystem& sys, const Vec& q0, double dt,
                                double t_max) {
    constexpr double kEqTol = 1e-9;
    if (sys.gravity_gradient(q0).norm() <= kEqTol)
        throw DegenerateStartError("find_turning_point started at an equilibrium");

    const int n = sys.dim();
    const Control zero = Control::Zero(n);
    const int grace_steps = 10;

    // -dT/dt along the unforced flow; positive while kinetic energy falls.
    auto p_of = [&](const State& s) { return s.xdot.dot(sys.gravity_gradient(s.x)); };

    State prev2(q0, Vec::Zero(n));
    State prev1 = rk4_step(sys, prev2, zero, dt);
    double t_prev1 = dt;
    double kin2 = 0.0;
    double kin1 = kinetic(sys, prev1);

    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    for (std::size_t i = 2; i <= steps; ++i) {
        const State cur = rk4_step(sys, prev1, zero, dt);
        if (!cur.finite()) throw DivergenceError(t_prev1);
        const double t_cur = static_cast<double>(i) * dt;
        const double kin0 = kinetic(sys, cur);

        if (static_cast<int>(i) - 1 > grace_steps && kin2 > kin1 && kin1 < kin0) {
            // Bracket the +/- sign change of -dT/dt and bisect in time.
            double ta, tb;
            State sa;
            if (p_of(prev2) > 0.0 && p_of(prev1) <= 0.0) {
                ta = t_prev1 - dt;
                tb = t_prev1;
                sa = prev2;
            } else {
                ta = t_prev1;
                tb = t_cur;
                sa = prev1;
            }
            while (tb - ta > 1e-10) {
                const double tm = 0.5 * (ta + tb);
                const State sm = rk4_step(sys, sa, zero, tm - ta);
                if (p_of(sm) > 0.0) {
                    sa = sm;
                    ta = tm;
                } else {
                    tb = tm;
                }
            }
            TurningEvent ev;
            ev.t_star = 0.5 * (ta + tb);
            ev.state_star = rk4_step(sys, sa, zero, ev.t_star - ta);
            ev.residual = ev.state_star.xdot;
            return ev;
        }

        prev2 = prev1;
        prev1 = cur;
        t_prev1 = t_cur;
        kin2 = kin1;
        kin1 = kin0;
    }
    throw SearchHorizonError("no kinetic-energy minimum found before t_max");
}

}  // namespace eigenmpc
