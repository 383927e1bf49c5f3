#pragma once

#include <memory>

#include "eigenmpc/chart.hpp"
#include "eigenmpc/system.hpp"

namespace eigenmpc {

enum class CostVariant { curved, straight };

/// Running-cost configuration. `chart` is used by the curved variant;
/// `c` / `x_eq` / `alpha` / `beta` by the straight one.
struct CostSpec {
    CostVariant variant = CostVariant::straight;
    double E_ref = 0.0;
    double w_E = 0.0;
    double w_x = 0.0;
    double w_xdot = 0.0;
    double w_F = 0.0;
    double alpha = 0.0;  // straight only
    double beta = 0.0;   // straight only
    ModeChart chart;     // curved only
    Vec c;               // straight only
    Vec x_eq;            // straight only
};

/// Running cost in residual form: l(s, u) = |r(s, u)|^2 with the weights
/// folded into r as square roots (Gauss-Newton form).
class StageCost {
public:
    virtual ~StageCost() = default;
    virtual int residual_dim() const = 0;
    virtual Vec residual(const State& s, const Control& u) const = 0;

    /// d r / d (x, xdot) and d r / d u; the default uses central differences.
    virtual void jacobians(const State& s, const Control& u, Mat& jr_s, Mat& jr_u) const;

    double value(const State& s, const Control& u) const { return residual(s, u).squaredNorm(); }
};

/// Unweighted curved residual z = [E_ref - E; c_perp (x - X); c_perp (xd - Xd)].
Vec cost_residual_curved(const MechanicalSystem& sys, const ModeChart& chart, const State& s,
                         double E_ref);

double running_cost_curved(const MechanicalSystem& sys, const CostSpec& spec, const State& s,
                           const Control& u);
double running_cost_straight(const MechanicalSystem& sys, const CostSpec& spec, const State& s,
                             const Control& u);

/// Instantiates the stage cost for a spec. Throws ConfigError on
/// inconsistent specs (negative weights, missing chart/direction).
std::unique_ptr<StageCost> make_stage_cost(const MechanicalSystem& sys, const CostSpec& spec);

}  // namespace eigenmpc
