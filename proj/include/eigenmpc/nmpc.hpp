#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "eigenmpc/cost.hpp"
#include "eigenmpc/csv.hpp"
#include "eigenmpc/integrate.hpp"
#include "eigenmpc/qp.hpp"

namespace eigenmpc {

struct NmpcConfig {
    int N = 80;               // prediction horizon (shooting steps)
    double dt_shoot = 0.025;  // shooting interval (s)
    int substeps = 5;         // internal RK4 steps per shooting interval
    Vec tau_min, tau_max;     // componentwise torque bounds
    int sqp_max_iters = 30;
    double kkt_tol = 1e-6;
    bool warm_start_shift = true;  // shift-by-one warm start; cold uses zeros

    void validate(int n) const;
};

struct NlpSolution {
    std::vector<Control> controls;  // N inputs
    std::vector<State> states;      // N + 1 predicted states
    double objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Condensed multiple-shooting NLP: decision variables are the N stacked
/// controls, states are eliminated through the RK4 shooting map, and the
/// only constraints are the torque box (the initial state is pinned).
class CondensedNlp {
public:
    CondensedNlp(const MechanicalSystem& sys, const StageCost& cost, NmpcConfig cfg, State s0);

    int horizon() const { return cfg_.N; }
    int input_dim() const { return n_; }
    int num_vars() const { return cfg_.N * n_; }
    const NmpcConfig& config() const { return cfg_; }

    Vec lower_bounds() const;
    Vec upper_bounds() const;

    /// Rollout of the shooting map; objective = sum_k |r_k(s_k, u_k)|^2.
    double objective(const Vec& u_stacked, std::vector<State>* states = nullptr) const;

    /// Gauss-Newton data at u: objective value, true gradient, and the
    /// residual-Jacobian Hessian approximation 2 J^T J.
    void gauss_newton(const Vec& u_stacked, double& obj, Vec& grad, Mat& hess,
                      std::vector<State>* states = nullptr) const;

    /// Shooting map over one interval with sensitivities.
    State shoot(const State& s, const Control& u, Mat* A = nullptr, Mat* B = nullptr) const;

private:
    const MechanicalSystem& sys_;
    const StageCost& cost_;
    NmpcConfig cfg_;
    State s0_;
    int n_;
};

inline CondensedNlp build_nlp(const MechanicalSystem& sys, const StageCost& cost,
                              const NmpcConfig& cfg, const State& s0) {
    return CondensedNlp(sys, cost, cfg, s0);
}

/// Gauss-Newton SQP with a box-constrained condensed QP and Armijo
/// backtracking on the true objective.
NlpSolution sqp_solve(const CondensedNlp& nlp, const Vec& u_guess,
                      std::vector<std::int8_t>* active_set = nullptr);

/// Receding-horizon controller. Stateful (warm-start memory); one instance
/// per closed loop.
class NmpcController {
public:
    NmpcController(const MechanicalSystem& sys, std::shared_ptr<const StageCost> cost,
                   NmpcConfig cfg);

    /// Solves the NLP from the measured state and returns the first control.
    Control mpc_step(const State& measured);

    const NmpcConfig& config() const { return cfg_; }
    const NlpSolution& last_solution() const { return last_; }
    const SolverTelemetry& last_telemetry() const { return telemetry_; }
    double last_solve_ms() const { return solve_ms_; }
    bool last_converged() const { return last_.converged; }

private:
    const MechanicalSystem& sys_;
    std::shared_ptr<const StageCost> cost_;
    NmpcConfig cfg_;
    NlpSolution last_;
    std::vector<std::int8_t> active_set_;
    SolverTelemetry telemetry_;
    double solve_ms_ = 0.0;
    bool have_prev_ = false;
};

/// Alternates mpc_step and RK4 plant propagation (zero-order-hold control
/// over each shooting interval). The trajectory is sampled at plant_dt.
Trajectory closed_loop(const MechanicalSystem& sys, NmpcController& controller, const State& s0,
                       double t_end, double plant_dt = 1e-3,
                       std::vector<SolverTelemetry>* telemetry = nullptr,
                       std::vector<double>* solve_times_ms = nullptr);

}  // namespace eigenmpc
