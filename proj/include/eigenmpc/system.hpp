#pragma once

#include "eigenmpc/types.hpp"

namespace eigenmpc {

/// Conservative mechanical system in local coordinates:
///   M(x) xdd + C(x, xd) xd + dV/dx = tau
/// All member functions are pure and safe to call concurrently.
class MechanicalSystem {
public:
    virtual ~MechanicalSystem() = default;

    virtual int dim() const = 0;
    virtual Vec equilibrium() const = 0;
    virtual Mat mass_matrix(const Vec& x) const = 0;
    virtual double potential(const Vec& x) const = 0;
    virtual Vec gravity_gradient(const Vec& x) const = 0;
    virtual Vec coriolis_force(const Vec& x, const Vec& xdot) const = 0;
};

/// xdd = M(x)^-1 (-C(x,xd)xd - dV/dx + tau)
Vec forward_dynamics(const MechanicalSystem& sys, const State& s, const Control& u);

/// E = 1/2 xd^T M(x) xd + V(x)
double energy(const MechanicalSystem& sys, const State& s);

/// Inertia and potential Hessian at the stable equilibrium.
Linearization linearize(const MechanicalSystem& sys);

/// Jacobians of the first-order field f(s, u) = (xd, forward_dynamics).
/// A is 2n x 2n (d f / d state), B is 2n x n (d f / d u). The kinematic
/// block is exact; the acceleration block uses M^-1 for d/du and central
/// differences of the force terms for the state derivatives.
void dynamics_jacobians(const MechanicalSystem& sys, const State& s, const Control& u,
                        Mat& A, Mat& B);

}  // namespace eigenmpc
