#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace eigenmpc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Generalized position and velocity in local coordinates.
struct State {
    Vec x;
    Vec xdot;

    State() = default;
    State(Vec x_, Vec xdot_) : x(std::move(x_)), xdot(std::move(xdot_)) {}

    int dim() const { return static_cast<int>(x.size()); }

    Vec stacked() const {
        Vec z(x.size() + xdot.size());
        z << x, xdot;
        return z;
    }

    static State from_stacked(const Vec& z) {
        const int n = static_cast<int>(z.size()) / 2;
        return State(z.head(n), z.tail(n));
    }

    bool finite() const { return x.allFinite() && xdot.allFinite(); }
};

/// Joint torques. Dimension matches the system's configuration dimension.
using Control = Eigen::VectorXd;

/// Masses, lengths and gravity of the double pendulum.
struct SystemParams {
    double m1 = 1.0;
    double m2 = 1.0;
    double l1 = 1.0;
    double l2 = 1.0;
    double g = 9.81;

    bool valid() const { return m1 > 0 && m2 > 0 && l1 > 0 && l2 > 0 && g > 0; }
};

/// Inertia and potential Hessian at a stable equilibrium.
struct Linearization {
    Mat M0;
    Mat K;
    Vec x_eq;
};

struct DivergenceError : std::runtime_error {
    double last_valid_time;
    explicit DivergenceError(double t)
        : std::runtime_error("state diverged (non-finite) at t = " + std::to_string(t)),
          last_valid_time(t) {}
};

struct SearchHorizonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateStartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnreachableEnergyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContinuationError : std::runtime_error {
    double last_good_energy;
    ContinuationError(const std::string& msg, double e)
        : std::runtime_error(msg), last_good_energy(e) {}
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace eigenmpc
