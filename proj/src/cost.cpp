#include "eigenmpc/cost.hpp"

#include <cmath>

namespace eigenmpc {

void StageCost::jacobians(const State& s, const Control& u, Mat& jr_s, Mat& jr_u) const {
    const int n = s.dim();
    const int m = residual_dim();
    jr_s.resize(m, 2 * n);
    jr_u.resize(m, n);

    State sp = s, sm = s;
    for (int j = 0; j < 2 * n; ++j) {
        double& vp = j < n ? sp.x[j] : sp.xdot[j - n];
        double& vm = j < n ? sm.x[j] : sm.xdot[j - n];
        const double orig = vp;
        const double h = 1e-6 * std::max(1.0, std::abs(orig));
        vp = orig + h;
        vm = orig - h;
        jr_s.col(j) = (residual(sp, u) - residual(sm, u)) / (2.0 * h);
        vp = orig;
        vm = orig;
    }
    Control up = u, um = u;
    for (int j = 0; j < n; ++j) {
        const double orig = u[j];
        const double h = 1e-6 * std::max(1.0, std::abs(orig));
        up[j] = orig + h;
        um[j] = orig - h;
        jr_u.col(j) = (residual(s, up) - residual(s, um)) / (2.0 * h);
        up[j] = orig;
        um[j] = orig;
    }
}

Vec cost_residual_curved(const MechanicalSystem& sys, const ModeChart& chart, const State& s,
                         double E_ref) {
    const int n = s.dim();
    const auto [xm, xm_dot] = chart_project(chart, s);
    const Mat perp = chart.perp_projector(xm);
    Vec z(2 * n + 1);
    z[0] = E_ref - energy(sys, s);
    z.segment(1, n) = perp * (s.x - chart.position(xm));
    z.segment(1 + n, n) = perp * (s.xdot - chart.velocity(xm, xm_dot));
    return z;
}

namespace {

class CurvedCost final : public StageCost {
public:
    CurvedCost(const MechanicalSystem& sys, CostSpec spec)
        : sys_(sys), spec_(std::move(spec)), n_(sys.dim()) {}

    int residual_dim() const override { return 2 * n_ + 1 + n_; }

    Vec residual(const State& s, const Control& u) const override {
        const Vec z = cost_residual_curved(sys_, spec_.chart, s, spec_.E_ref);
        Vec r(residual_dim());
        r[0] = std::sqrt(spec_.w_E) * z[0];
        r.segment(1, n_) = std::sqrt(spec_.w_x) * z.segment(1, n_);
        r.segment(1 + n_, n_) = std::sqrt(spec_.w_xdot) * z.segment(1 + n_, n_);
        r.tail(n_) = std::sqrt(spec_.w_F) * u;
        return r;
    }

private:
    const MechanicalSystem& sys_;
    CostSpec spec_;
    int n_;
};

class StraightCost final : public StageCost {
public:
    StraightCost(const MechanicalSystem& sys, CostSpec spec)
        : sys_(sys), spec_(std::move(spec)), n_(sys.dim()), perp_(projector_c_perp(spec_.c)) {}

    int residual_dim() const override { return 3 * n_ + 1; }

    Vec residual(const State& s, const Control& u) const override {
        const double e = energy(sys_, s);
        const double th = std::tanh(spec_.alpha * e);
        Vec r(residual_dim());
        r[0] = std::sqrt(spec_.w_E) * (spec_.E_ref - e);
        r.segment(1, n_) = std::sqrt(spec_.w_x) * (1.0 - th) * (perp_ * (s.x - spec_.x_eq));
        r.segment(1 + n_, n_) = std::sqrt(spec_.w_xdot) * (1.0 - th) * (perp_ * s.xdot);
        r.tail(n_) = std::sqrt(spec_.w_F) * (th + spec_.beta) * u;
        return r;
    }

private:
    const MechanicalSystem& sys_;
    CostSpec spec_;
    int n_;
    Mat perp_;
};

void check_weights(const CostSpec& spec) {
    if (spec.w_E < 0 || spec.w_x < 0 || spec.w_xdot < 0 || spec.w_F < 0)
        throw ConfigError("cost weights must be non-negative");
    if (spec.alpha < 0 || spec.beta < 0) throw ConfigError("alpha and beta must be non-negative");
}

}  // namespace

double running_cost_curved(const MechanicalSystem& sys, const CostSpec& spec, const State& s,
                           const Control& u) {
    return CurvedCost(sys, spec).value(s, u);
}

double running_cost_straight(const MechanicalSystem& sys, const CostSpec& spec, const State& s,
                             const Control& u) {
    return StraightCost(sys, spec).value(s, u);
}

std::unique_ptr<StageCost> make_stage_cost(const MechanicalSystem& sys, const CostSpec& spec) {
    check_weights(spec);
    if (spec.variant == CostVariant::curved) {
        if (spec.chart.coeffs.empty()) throw ConfigError("curved cost requires a mode chart");
        return std::make_unique<CurvedCost>(sys, spec);
    }
    if (spec.c.size() != sys.dim() || std::abs(spec.c.norm() - 1.0) > 1e-9)
        throw ConfigError("straight cost requires a unit mode direction");
    if (spec.x_eq.size() != sys.dim()) throw ConfigError("straight cost requires x_eq");
    return std::make_unique<StraightCost>(sys, spec);
}

}  // namespace eigenmpc
