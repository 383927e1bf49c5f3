#pragma once

#include <string>
#include <vector>

#include "eigenmpc/chart.hpp"
#include "eigenmpc/integrate.hpp"

namespace eigenmpc {

/// One mode of the linearized system: K c = omega^2 M0 c.
struct LinearMode {
    double omega = 0.0;
    Vec c;  // unit 2-norm, first nonzero entry positive
};

/// One eigenmode at a fixed energy level.
struct Mode {
    std::string family;
    Vec q0;                 // rest configuration
    double half_period = 0.0;
    double energy = 0.0;
    Trajectory orbit;       // one full unforced period
};

/// Generalized symmetric eigenproblem of the linearization, modes sorted by
/// ascending frequency. Throws ModelError if M0 is not SPD.
std::vector<LinearMode> linear_modes(const Linearization& lin);

/// Solves V(s * direction) = E for s > 0 along the ray from x_eq.
Vec rest_point_on_level_set(const MechanicalSystem& sys, const Vec& direction, double E);

/// Signed velocity component orthogonal to the local path direction at the
/// first turning point of the unforced flow from (q0, 0). Zero iff the
/// orbit brakes to rest (periodic line-shaped eigenmode).
double shoot_residual(const MechanicalSystem& sys, const Vec& q0, double dt = 1e-3,
                      double t_max = 20.0);

struct ModeSearchSettings {
    double dt = 1e-3;
    double t_max = 20.0;
    double tol = 1e-8;              // |shoot residual| target (rad/s)
    double e_start = 0.05;          // first continuation rung (J)
    double ladder_factor = 1.5;
    double bracket_max_deg = 25.0;  // bracketing range around the warm start
    int max_halvings = 8;
};

/// Shooting + energy continuation from the linear regime up to energy E.
Mode find_eigenmode(const MechanicalSystem& sys, const LinearMode& family, double E,
                    const ModeSearchSettings& settings = {});

}  // namespace eigenmpc
