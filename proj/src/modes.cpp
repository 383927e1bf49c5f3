#include "eigenmpc/modes.hpp"

#include <cmath>

namespace eigenmpc {

namespace {

Vec rotate2(const Vec& v, double angle) {
    Vec r(2);
    const double c = std::cos(angle), s = std::sin(angle);
    r[0] = c * v[0] - s * v[1];
    r[1] = s * v[0] + c * v[1];
    return r;
}

}  // namespace

std::vector<LinearMode> linear_modes(const Linearization& lin) {
    Eigen::LLT<Mat> llt(lin.M0);
    if (llt.info() != Eigen::Success) throw ModelError("inertia at equilibrium is not SPD");

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(lin.K, lin.M0);
    if (solver.info() != Eigen::Success) throw ModelError("generalized eigensolve failed");

    std::vector<LinearMode> modes;
    for (int i = 0; i < lin.K.rows(); ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda <= 0.0) throw ModelError("equilibrium is not a strict potential minimum");
        LinearMode m;
        m.omega = std::sqrt(lambda);
        m.c = solver.eigenvectors().col(i).normalized();
        for (int j = 0; j < m.c.size(); ++j) {
            if (std::abs(m.c[j]) > 1e-12) {
                if (m.c[j] < 0.0) m.c = -m.c;
                break;
            }
        }
        modes.push_back(std::move(m));
    }
    return modes;  // eigenvalues are returned in ascending order
}

Vec rest_point_on_level_set(const MechanicalSystem& sys, const Vec& direction, double E) {
    const Vec x_eq = sys.equilibrium();
    if (E < 0.0) throw ConfigError("rest_point_on_level_set requires E >= 0");
    if (E == 0.0) return x_eq;
    const Vec d = direction.normalized();

    const auto v_of = [&](double s) { return sys.potential(x_eq + s * d); };

    // Bracket the first upward crossing of E along the ray.
    const double s_step = 0.02;
    const double s_max = 3.0 * M_PI;
    double s_lo = 0.0, s_hi = 0.0;
    bool found = false;
    for (double s = s_step; s <= s_max; s += s_step) {
        if (v_of(s) >= E) {
            s_hi = s;
            s_lo = s - s_step;
            found = true;
            break;
        }
    }
    if (!found) throw UnreachableEnergyError("energy level not reachable along the ray");

    // Safeguarded Newton on V(s d) - E.
    double s = 0.5 * (s_lo + s_hi);
    for (int it = 0; it < 200; ++it) {
        const double f = v_of(s) - E;
        if (std::abs(f) < 1e-10) break;
        if (f > 0.0)
            s_hi = s;
        else
            s_lo = s;
        const double df = d.dot(sys.gravity_gradient(x_eq + s * d));
        double s_next = (df != 0.0) ? s - f / df : 0.5 * (s_lo + s_hi);
        if (s_next <= s_lo || s_next >= s_hi) s_next = 0.5 * (s_lo + s_hi);
        s = s_next;
    }
    return x_eq + s * d;
}

double shoot_residual(const MechanicalSystem& sys, const Vec& q0, double dt, double t_max) {
    const TurningEvent ev = find_turning_point(sys, q0, dt, t_max);

    // Path direction shortly before the event (n = 2: signed perpendicular).
    // The lookback is a fixed time offset so the residual is dt-invariant.
    constexpr double kPreOffset = 5e-3;
    const State pre = rk4_step(sys, ev.state_star, Control::Zero(sys.dim()), -kPreOffset);
    Vec d = pre.xdot;
    const double norm = d.norm();
    if (norm < 1e-15) return 0.0;
    d /= norm;
    Vec d_perp(2);
    d_perp << -d[1], d[0];
    return ev.residual.dot(d_perp);
}

namespace {

struct RungResult {
    double psi = 0.0;
    Vec q0;
};

/// Root-find of the shooting residual over the level-set rotation angle,
/// bracketing around the warm start, then bisection with secant steps.
bool solve_rung(const MechanicalSystem& sys, const LinearMode& family, double E, double psi_warm,
                const ModeSearchSettings& cfg, RungResult& out) {
    const auto residual_at = [&](double psi) {
        const Vec d = rotate2(family.c, psi);
        const Vec q0 = rest_point_on_level_set(sys, d, E);
        return shoot_residual(sys, q0, cfg.dt, cfg.t_max);
    };

    const double r_warm = residual_at(psi_warm);
    double pa = psi_warm, pb = psi_warm, ra = r_warm, rb = r_warm;
    if (std::abs(r_warm) >= cfg.tol) {
        const double max_delta = cfg.bracket_max_deg * M_PI / 180.0;
        bool bracketed = false;
        for (double delta = 0.25 * M_PI / 180.0; delta <= max_delta; delta *= 2.0) {
            for (const double sign : {+1.0, -1.0}) {
                const double psi = psi_warm + sign * std::min(delta, max_delta);
                const double r = residual_at(psi);
                if (r == 0.0 || (r > 0.0) != (r_warm > 0.0)) {
                    pa = psi_warm;
                    ra = r_warm;
                    pb = psi;
                    rb = r;
                    bracketed = true;
                    break;
                }
            }
            if (bracketed) break;
        }
        if (!bracketed) return false;

        for (int it = 0; it < 200; ++it) {
            if (std::abs(ra) < cfg.tol) {
                pb = pa;
                rb = ra;
                break;
            }
            if (std::abs(rb) < cfg.tol) break;
            if (std::abs(pb - pa) < 1e-15) break;
            double pm = pa - ra * (pb - pa) / (rb - ra);  // secant
            const double lo = std::min(pa, pb), hi = std::max(pa, pb);
            const double margin = 0.01 * (hi - lo);
            if (!(pm > lo + margin && pm < hi - margin)) pm = 0.5 * (pa + pb);
            const double rm = residual_at(pm);
            if ((rm > 0.0) == (ra > 0.0)) {
                pa = pm;
                ra = rm;
            } else {
                pb = pm;
                rb = rm;
            }
        }
    }

    out.psi = std::abs(ra) < std::abs(rb) ? pa : pb;
    const Vec d = rotate2(family.c, out.psi);
    out.q0 = rest_point_on_level_set(sys, d, E);
    return std::abs(std::min(std::abs(ra), std::abs(rb))) < cfg.tol;
}

}  // namespace

Mode find_eigenmode(const MechanicalSystem& sys, const LinearMode& family, double E,
                    const ModeSearchSettings& cfg) {
    if (E <= 0.0) throw ConfigError("find_eigenmode requires E > 0");

    double psi = 0.0;
    double e_good = 0.0;
    double e_next = std::min(cfg.e_start, E);
    int halvings = 0;
    RungResult rung;

    while (true) {
        if (solve_rung(sys, family, e_next, psi, cfg, rung)) {
            psi = rung.psi;
            e_good = e_next;
            halvings = 0;
            if (e_good >= E) break;
            e_next = std::min(e_good * cfg.ladder_factor, E);
        } else {
            if (++halvings > cfg.max_halvings)
                throw ContinuationError("eigenmode continuation breakdown at E = " +
                                            std::to_string(e_next) + " J",
                                        e_good);
            e_next = e_good + 0.5 * (e_next - e_good);
            if (e_next <= e_good) e_next = std::max(0.5 * cfg.e_start, 1e-4);
        }
    }

    const TurningEvent ev = find_turning_point(sys, rung.q0, cfg.dt, cfg.t_max);
    const double period = 2.0 * ev.t_star;
    const double dt_orbit = period / std::max(1.0, std::round(period / cfg.dt));

    Mode mode;
    mode.q0 = rung.q0;
    mode.half_period = ev.t_star;
    mode.energy = sys.potential(rung.q0);
    mode.orbit = flow(sys, State(rung.q0, Vec::Zero(sys.dim())), dt_orbit, period);
    return mode;
}

}  // namespace eigenmpc
