#include "eigenmpc/double_pendulum.hpp"

#include <cmath>

namespace eigenmpc {

DoublePendulum::DoublePendulum(SystemParams p) : params_(p) {
    if (!p.valid()) throw ModelError("double pendulum parameters must be strictly positive");
    v_offset_ = -p.m1 * p.g * p.l1 - p.m2 * p.g * (p.l1 + p.l2);
}

Mat DoublePendulum::mass_matrix(const Vec& x) const {
    const auto& p = params_;
    const double c2 = std::cos(x[1]);
    Mat m(2, 2);
    m(0, 0) = p.m1 * p.l1 * p.l1 + p.m2 * (p.l1 + p.l2) * (p.l1 + p.l2) -
              2.0 * p.m2 * p.l1 * p.l2 * (1.0 - c2);
    m(1, 0) = p.m2 * (p.l2 * p.l2 + p.l1 * p.l2 * c2);
    m(0, 1) = m(1, 0);
    m(1, 1) = p.m2 * p.l2 * p.l2;
    return m;
}

double DoublePendulum::potential(const Vec& x) const {
    const auto& p = params_;
    const double vstar = -p.m1 * p.g * p.l1 * std::cos(x[0]) -
                         p.m2 * p.g * (p.l1 * std::cos(x[0]) + p.l2 * std::cos(x[0] + x[1]));
    return vstar - v_offset_;
}

Vec DoublePendulum::gravity_gradient(const Vec& x) const {
    const auto& p = params_;
    const double s1 = std::sin(x[0]);
    const double s12 = std::sin(x[0] + x[1]);
    Vec g(2);
    g[0] = p.m1 * p.g * p.l1 * s1 + p.m2 * p.g * (p.l1 * s1 + p.l2 * s12);
    g[1] = p.m2 * p.g * p.l2 * s12;
    return g;
}

Vec DoublePendulum::coriolis_force(const Vec& x, const Vec& xdot) const {
    // Only dM/dth2 is nonzero; contracting the Christoffel symbols gives
    //   (C xd)_1 = -a s2 (2 xd1 xd2 + xd2^2),  (C xd)_2 = a s2 xd1^2
    // with a = m2 l1 l2.
    const auto& p = params_;
    const double h = p.m2 * p.l1 * p.l2 * std::sin(x[1]);
    Vec c(2);
    c[0] = -h * (2.0 * xdot[0] * xdot[1] + xdot[1] * xdot[1]);
    c[1] = h * xdot[0] * xdot[0];
    return c;
}

}  // namespace eigenmpc
