#pragma once

#include "eigenmpc/system.hpp"

namespace eigenmpc {

/// Planar double pendulum with point masses at the link tips.
/// Angles are measured from the downward vertical; x = (th1, th2) with the
/// stretched-down configuration (0, 0) as the stable equilibrium. Angles are
/// not wrapped: the configuration space is treated as R^2.
class DoublePendulum final : public MechanicalSystem {
public:
    explicit DoublePendulum(SystemParams p = {});

    int dim() const override { return 2; }
    Vec equilibrium() const override { return Vec::Zero(2); }
    Mat mass_matrix(const Vec& x) const override;
    double potential(const Vec& x) const override;
    Vec gravity_gradient(const Vec& x) const override;
    /// C(x, xd) xd from the Christoffel symbols of the closed-form M(x).
    Vec coriolis_force(const Vec& x, const Vec& xdot) const override;

    const SystemParams& params() const { return params_; }

private:
    SystemParams params_;
    double v_offset_;  // V*(0), subtracted so V(x_eq) = 0
};

}  // namespace eigenmpc
