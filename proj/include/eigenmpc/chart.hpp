#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eigenmpc/integrate.hpp"

namespace eigenmpc {

struct Mode;  // modes.hpp

/// Polynomial parametrization of one eigenmode: each configuration
/// component is a polynomial in the scalar chart coordinate
/// x_m = c_lin^T (x - x_eq), with c_lin the family's linear-mode direction.
struct ModeChart {
    std::string family;
    int degree = 0;
    double energy = 0.0;
    std::vector<Vec> coeffs;  // per joint, monomial coefficients (ascending)
    double xm_min = 0.0, xm_max = 0.0;
    Vec c_lin;
    Vec x_eq;
    double fit_residual = 0.0;  // max configuration reconstruction error (rad)

    int dim() const { return static_cast<int>(coeffs.size()); }

    Vec position(double xm) const;          // X(x_m)
    Vec position_derivative(double xm) const;  // J_X = dX/dx_m
    Vec velocity(double xm, double xm_dot) const { return position_derivative(xm) * xm_dot; }
    Vec tangent(double xm) const;           // c(x_m) = J_X / |J_X|
    Mat perp_projector(double xm) const;    // I - c c^T at x_m
};

/// Combined {family, energy, q0, half_period, degree, coeffs_X, x_m_range}
/// export of a mode and its fitted chart.
std::string mode_chart_to_json(const Mode& mode, const ModeChart& chart);
ModeChart chart_from_json(const std::string& text);

/// I - c c^T for a unit vector c.
Mat projector_c_perp(const Vec& c);

/// Least-squares fit of the mode orbit as degree-`degree` polynomials in
/// x_m. Throws FitError on rank loss.
ModeChart fit_chart(const Mode& mode, const Vec& c_lin, const Vec& x_eq, int degree = 9);

/// Closest-point chart coordinates of a state: x_m minimizes |x - X(x_m)|
/// over [xm_min, xm_max] (grid scan + golden section + Newton polish),
/// xm_dot = c(x_m)^T xdot. Boundary minimizers are clamped.
std::pair<double, double> chart_project(const ModeChart& chart, const State& s);

}  // namespace eigenmpc
