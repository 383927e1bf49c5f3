#include <doctest.h>

#include <cmath>

#include "eigenmpc/double_pendulum.hpp"
#include "eigenmpc/integrate.hpp"
#include "eigenmpc/modes.hpp"

using namespace eigenmpc;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

const double g = 9.81;
const double omega_in = std::sqrt(g * (2.0 - std::sqrt(2.0)));

Vec in_phase_direction() { return vec2(1.0, std::sqrt(2.0) - 1.0).normalized(); }

}  // namespace

TEST_CASE("rk4 fixed point at equilibrium") {
    const DoublePendulum plant;
    const State eq(Vec::Zero(2), Vec::Zero(2));
    for (double dt : {1e-3, 1e-2, 0.1}) {
        const State next = rk4_step(plant, eq, Vec::Zero(2), dt);
        CHECK(next.x.norm() < 1e-15);
        CHECK(next.xdot.norm() < 1e-15);
    }
}

TEST_CASE("rk4 local order five") {
    const DoublePendulum plant;
    const State s0(vec2(0.3, -0.2), vec2(0.5, 0.1));
    const Control u = vec2(0.2, -0.1);

    auto reference = [&](double dt) {
        State s = s0;
        for (int i = 0; i < 100; ++i) s = rk4_step(plant, s, u, dt / 100.0);
        return s;
    };
    auto one_step_err = [&](double dt) {
        const State a = rk4_step(plant, s0, u, dt);
        const State b = reference(dt);
        return (a.stacked() - b.stacked()).norm();
    };

    const double ratio = one_step_err(2e-2) / one_step_err(1e-2);
    CHECK(ratio > 24.0);
    CHECK(ratio < 40.0);
}

TEST_CASE("rk4 global order >= 3.7 on the dt ladder") {
    const DoublePendulum plant;
    const State s0(vec2(0.4, -0.1), vec2(0.0, 0.0));

    auto endpoint = [&](double dt) {
        State s = s0;
        const auto steps = static_cast<int>(std::llround(1.0 / dt));
        for (int i = 0; i < steps; ++i) s = rk4_step(plant, s, Vec::Zero(2), dt);
        return s.stacked();
    };
    const Vec ref = endpoint(1e-5);
    const double e1 = (endpoint(4e-3) - ref).norm();
    const double e2 = (endpoint(2e-3) - ref).norm();
    const double e3 = (endpoint(1e-3) - ref).norm();
    CHECK(std::log2(e1 / e2) > 3.7);
    CHECK(std::log2(e2 / e3) > 3.7);
}

TEST_CASE("linear-regime period matches the in-phase linear mode") {
    const DoublePendulum plant;
    const Vec q0 = 1e-3 * in_phase_direction();
    const TurningEvent ev = find_turning_point(plant, q0, 1e-4, 5.0);
    CHECK(std::abs(ev.t_star - M_PI / omega_in) < 0.01 * M_PI / omega_in);
}

TEST_CASE("unforced flow conserves energy") {
    const DoublePendulum plant;
    const Vec q0 = rest_point_on_level_set(plant, in_phase_direction(), 2.0);
    const Trajectory traj = flow(plant, State(q0, Vec::Zero(2)), 1e-3, 10.0);
    double drift = 0.0;
    for (double e : traj.energies) drift = std::max(drift, std::abs(e - 2.0));
    CHECK(drift < 1e-6);

    // Constant trajectory from equilibrium.
    const Trajectory still = flow(plant, State(Vec::Zero(2), Vec::Zero(2)), 1e-3, 1.0);
    for (double e : still.energies) CHECK(e == doctest::Approx(0.0));
    CHECK(still.states.back().x.norm() < 1e-14);
}

TEST_CASE("time reversal returns to the start") {
    const DoublePendulum plant;
    const Vec q0 = rest_point_on_level_set(plant, in_phase_direction(), 2.0);
    const State s0(q0, Vec::Zero(2));
    const Trajectory fwd = flow(plant, s0, 1e-3, 2.0);
    State flipped = fwd.states.back();
    flipped.xdot = -flipped.xdot;
    const Trajectory back = flow(plant, flipped, 1e-3, 2.0);
    State end = back.states.back();
    end.xdot = -end.xdot;
    CHECK((end.stacked() - s0.stacked()).norm() < 1e-6);
}

TEST_CASE("flow input and error handling") {
    const DoublePendulum plant;
    CHECK_THROWS_AS(flow(plant, State(Vec::Zero(2), Vec::Zero(2)), 1e-3, 1e-4), ConfigError);

    // Absurd forcing drives the state non-finite.
    std::vector<Control> huge(500, vec2(1e155, -1e155));
    CHECK_THROWS_AS(flow(plant, State(Vec::Zero(2), Vec::Zero(2)), 1e-3, 0.5, huge),
                    DivergenceError);
}

TEST_CASE("turning point detection") {
    const DoublePendulum plant;
    CHECK_THROWS_AS(find_turning_point(plant, Vec::Zero(2), 1e-3, 1.0), DegenerateStartError);

    // Off-mode start: the event exists and is a kinetic-energy minimum.
    const Vec q0 = vec2(0.4, 0.1);
    const TurningEvent ev = find_turning_point(plant, q0, 1e-3, 20.0);
    CHECK(ev.t_star > 0.0);
    const double kin_at = [&] {
        const Mat m = plant.mass_matrix(ev.state_star.x);
        return 0.5 * ev.state_star.xdot.dot(m * ev.state_star.xdot);
    }();
    for (double off : {-5e-3, 5e-3}) {
        const State nb = rk4_step(plant, ev.state_star, Vec::Zero(2), off);
        const double kin = 0.5 * nb.xdot.dot(plant.mass_matrix(nb.x) * nb.xdot);
        CHECK(kin >= kin_at);
    }

    // Residual is dt-invariant under halving once dt is below 1e-3 s.
    const double r1 = shoot_residual(plant, q0, 5e-4, 20.0);
    const double r2 = shoot_residual(plant, q0, 2.5e-4, 20.0);
    CHECK(std::abs(r1 - r2) < 1e-9);

    CHECK_THROWS_AS(find_turning_point(plant, q0, 1e-3, 5e-3), SearchHorizonError);
}
