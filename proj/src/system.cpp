#include "eigenmpc/system.hpp"

#include <cmath>

namespace eigenmpc {

Vec forward_dynamics(const MechanicalSystem& sys, const State& s, const Control& u) {
    const Mat m = sys.mass_matrix(s.x);
    const Vec rhs = u - sys.coriolis_force(s.x, s.xdot) - sys.gravity_gradient(s.x);
    Eigen::FullPivLU<Mat> lu(m);
    if (!lu.isInvertible()) throw ModelError("singular inertia matrix");
    return lu.solve(rhs);
}

double energy(const MechanicalSystem& sys, const State& s) {
    return 0.5 * s.xdot.dot(sys.mass_matrix(s.x) * s.xdot) + sys.potential(s.x);
}

Linearization linearize(const MechanicalSystem& sys) {
    const int n = sys.dim();
    const Vec x_eq = sys.equilibrium();
    Linearization lin;
    lin.x_eq = x_eq;
    lin.M0 = sys.mass_matrix(x_eq);

    // Potential Hessian by central differences of the analytic gradient.
    const double h = 1e-6;
    Mat k(n, n);
    for (int j = 0; j < n; ++j) {
        Vec xp = x_eq, xm = x_eq;
        xp[j] += h;
        xm[j] -= h;
        k.col(j) = (sys.gravity_gradient(xp) - sys.gravity_gradient(xm)) / (2.0 * h);
    }
    lin.K = 0.5 * (k + k.transpose());
    return lin;
}

void dynamics_jacobians(const MechanicalSystem& sys, const State& s, const Control& u,
                        Mat& A, Mat& B) {
    const int n = sys.dim();
    A.setZero(2 * n, 2 * n);
    B.setZero(2 * n, n);
    A.topRightCorner(n, n).setIdentity();

    const Mat m = sys.mass_matrix(s.x);
    Eigen::LDLT<Mat> ldlt(m);
    B.bottomRows(n) = ldlt.solve(Mat::Identity(n, n));

    // Acceleration block by central differences of the force terms.
    auto accel = [&](const Vec& x, const Vec& xd) {
        const Vec rhs = u - sys.coriolis_force(x, xd) - sys.gravity_gradient(x);
        return Vec(sys.mass_matrix(x).ldlt().solve(rhs));
    };
    for (int j = 0; j < n; ++j) {
        const double hx = 1e-6 * std::max(1.0, std::abs(s.x[j]));
        Vec xp = s.x, xm = s.x;
        xp[j] += hx;
        xm[j] -= hx;
        A.block(n, j, n, 1) = (accel(xp, s.xdot) - accel(xm, s.xdot)) / (2.0 * hx);

        const double hv = 1e-6 * std::max(1.0, std::abs(s.xdot[j]));
        Vec vp = s.xdot, vm = s.xdot;
        vp[j] += hv;
        vm[j] -= hv;
        A.block(n, n + j, n, 1) = (accel(s.x, vp) - accel(s.x, vm)) / (2.0 * hv);
    }
}

}  // namespace eigenmpc
