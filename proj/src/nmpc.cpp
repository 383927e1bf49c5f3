#include "eigenmpc/nmpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eigenmpc {

void NmpcConfig::validate(int n) const {
    if (N < 1) throw ConfigError("horizon N must be >= 1");
    if (dt_shoot <= 0.0) throw ConfigError("dt_shoot must be positive");
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    if (tau_min.size() != n || tau_max.size() != n)
        throw ConfigError("torque bounds must match the input dimension");
    if ((tau_min.array() >= tau_max.array()).any())
        throw ConfigError("tau_min must be strictly below tau_max");
}

CondensedNlp::CondensedNlp(const MechanicalSystem& sys, const StageCost& cost, NmpcConfig cfg,
                           State s0)
    : sys_(sys), cost_(cost), cfg_(std::move(cfg)), s0_(std::move(s0)), n_(sys.dim()) {
    cfg_.validate(n_);
    if (!s0_.finite()) throw ConfigError("initial state must be finite");
}

Vec CondensedNlp::lower_bounds() const {
    Vec lb(num_vars());
    for (int k = 0; k < cfg_.N; ++k) lb.segment(k * n_, n_) = cfg_.tau_min;
    return lb;
}

Vec CondensedNlp::upper_bounds() const {
    Vec ub(num_vars());
    for (int k = 0; k < cfg_.N; ++k) ub.segment(k * n_, n_) = cfg_.tau_max;
    return ub;
}

State CondensedNlp::shoot(const State& s, const Control& u, Mat* A, Mat* B) const {
    const double h = cfg_.dt_shoot / cfg_.substeps;
    State cur = s;
    if (!A || !B) {
        for (int i = 0; i < cfg_.substeps; ++i) cur = rk4_step(sys_, cur, u, h);
        return cur;
    }
    const int m = 2 * n_;
    *A = Mat::Identity(m, m);
    *B = Mat::Zero(m, n_);
    Mat a_step(m, m), b_step(m, n_);
    for (int i = 0; i < cfg_.substeps; ++i) {
        cur = rk4_step_with_sensitivity(sys_, cur, u, h, a_step, b_step);
        *A = a_step * (*A);
        *B = a_step * (*B) + b_step;
    }
    return cur;
}

double CondensedNlp::objective(const Vec& u_stacked, std::vector<State>* states) const {
    double obj = 0.0;
    State s = s0_;
    if (states) {
        states->clear();
        states->reserve(cfg_.N + 1);
        states->push_back(s);
    }
    for (int k = 0; k < cfg_.N; ++k) {
        const Control u = u_stacked.segment(k * n_, n_);
        obj += cost_.value(s, u);
        s = shoot(s, u);
        if (!s.finite()) throw DivergenceError(k * cfg_.dt_shoot);
        if (states) states->push_back(s);
    }
    return obj;
}

void CondensedNlp::gauss_newton(const Vec& u_stacked, double& obj, Vec& grad, Mat& hess,
                                std::vector<State>* states_out) const {
    const int nv = num_vars();
    const int m = cost_.residual_dim();
    const int ns = 2 * n_;

    // Sequential rollout: predicted states and sensitivities S_k = d s_k / du.
    std::vector<State> states(cfg_.N + 1);
    std::vector<Mat> sens(cfg_.N + 1, Mat::Zero(ns, nv));
    states[0] = s0_;
    Mat a(ns, ns), b(ns, n_);
    for (int k = 0; k < cfg_.N; ++k) {
        const Control u = u_stacked.segment(k * n_, n_);
        states[k + 1] = shoot(states[k], u, &a, &b);
        if (!states[k + 1].finite()) throw DivergenceError(k * cfg_.dt_shoot);
        sens[k + 1] = a * sens[k];
        sens[k + 1].middleCols(k * n_, n_) += b;
    }

    // Stage residuals and Jacobians are independent given the rollout.
    Mat jac = Mat::Zero(cfg_.N * m, nv);
    Vec res(cfg_.N * m);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < cfg_.N; ++k) {
        const Control u = u_stacked.segment(k * n_, n_);
        Mat jr_s, jr_u;
        cost_.jacobians(states[k], u, jr_s, jr_u);
        res.segment(k * m, m) = cost_.residual(states[k], u);
        jac.middleRows(k * m, m) = jr_s * sens[k];
        jac.block(k * m, k * n_, m, n_) += jr_u;
    }

    obj = res.squaredNorm();
    grad = 2.0 * (jac.transpose() * res);
    hess = 2.0 * (jac.transpose() * jac);
    if (states_out) *states_out = std::move(states);
}

namespace {

double kkt_residual(const Vec& u, const Vec& grad, const Vec& lb, const Vec& ub) {
    const Vec proj = (u - grad).cwiseMax(lb).cwiseMin(ub);
    return (u - proj).cwiseAbs().maxCoeff();
}

}  // namespace

NlpSolution sqp_solve(const CondensedNlp& nlp, const Vec& u_guess,
                      std::vector<std::int8_t>* active_set) {
    const int nv = nlp.num_vars();
    const int n = nlp.input_dim();
    const Vec lb = nlp.lower_bounds();
    const Vec ub = nlp.upper_bounds();
    const NmpcConfig& cfg = nlp.config();

    Vec u = u_guess.size() == nv ? Vec(u_guess.cwiseMax(lb).cwiseMin(ub)) : Vec(Vec::Zero(nv));

    NlpSolution sol;
    double obj = 0.0;
    Vec grad;
    Mat hess;
    std::vector<State> states;
    nlp.gauss_newton(u, obj, grad, hess, &states);

    std::vector<std::int8_t> working =
        active_set && static_cast<int>(active_set->size()) == nv
            ? *active_set
            : std::vector<std::int8_t>(nv, 0);

    int iter = 0;
    for (; iter < cfg.sqp_max_iters; ++iter) {
        sol.kkt_residual = kkt_residual(u, grad, lb, ub);
        if (sol.kkt_residual < cfg.kkt_tol) {
            sol.converged = true;
            break;
        }

        Mat h_reg = hess;
        h_reg.diagonal().array() += 1e-9 * (1.0 + hess.trace() / nv);
        const BoxQpResult qp = solve_box_qp(h_reg, grad, lb - u, ub - u, &working);
        working = qp.active;
        const Vec p = qp.x;

        const double slope = grad.dot(p);
        if (slope >= 0.0) break;  // no descent direction; keep best-so-far

        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            double trial_obj;
            try {
                trial_obj = nlp.objective(u + step * p);
            } catch (const DivergenceError&) {
                step *= 0.5;
                continue;
            }
            if (trial_obj <= obj + 1e-4 * step * slope) {
                u += step * p;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // line-search failure; flag non-converged

        nlp.gauss_newton(u, obj, grad, hess, &states);
    }
    if (!sol.converged) sol.kkt_residual = kkt_residual(u, grad, lb, ub);

    sol.iterations = iter;
    sol.objective = obj;
    sol.states = states;
    sol.controls.resize(cfg.N);
    for (int k = 0; k < cfg.N; ++k) sol.controls[k] = u.segment(k * n, n);
    if (active_set) *active_set = working;
    return sol;
}

NmpcController::NmpcController(const MechanicalSystem& sys, std::shared_ptr<const StageCost> cost,
                               NmpcConfig cfg)
    : sys_(sys), cost_(std::move(cost)), cfg_(std::move(cfg)) {
    cfg_.validate(sys_.dim());
}

Control NmpcController::mpc_step(const State& measured) {
    const int n = sys_.dim();
    const int nv = cfg_.N * n;

    Vec guess = Vec::Zero(nv);
    if (have_prev_ && cfg_.warm_start_shift) {
        for (int k = 0; k + 1 < cfg_.N; ++k)
            guess.segment(k * n, n) = last_.controls[k + 1];
        guess.segment((cfg_.N - 1) * n, n) = last_.controls[cfg_.N - 1];
        // Shift the warm active set along with the controls.
        if (static_cast<int>(active_set_.size()) == nv) {
            std::rotate(active_set_.begin(), active_set_.begin() + n, active_set_.end());
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const CondensedNlp nlp(sys_, *cost_, cfg_, measured);
    last_ = sqp_solve(nlp, guess, &active_set_);
    solve_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();

    telemetry_.sqp_iters = last_.iterations;
    telemetry_.kkt = last_.kkt_residual;
    telemetry_.objective = last_.objective;
    have_prev_ = true;
    return last_.controls.front();
}

Trajectory closed_loop(const MechanicalSystem& sys, NmpcController& controller, const State& s0,
                       double t_end, double plant_dt,
                       std::vector<SolverTelemetry>* telemetry,
                       std::vector<double>* solve_times_ms) {
    const double dt_sample = controller.config().dt_shoot;
    if (t_end < dt_sample) throw ConfigError("closed_loop requires t_end >= the sampling period");
    const auto steps_per_sample = static_cast<int>(std::llround(dt_sample / plant_dt));
    if (steps_per_sample < 1 || std::abs(steps_per_sample * plant_dt - dt_sample) > 1e-12)
        throw ConfigError("plant_dt must divide the sampling period");

    const auto samples = static_cast<std::size_t>(std::llround(t_end / dt_sample));
    const int n = sys.dim();

    Trajectory traj;
    traj.times.reserve(samples * steps_per_sample + 1);
    State s = s0;
    traj.times.push_back(0.0);
    traj.states.push_back(s);
    traj.energies.push_back(energy(sys, s));

    std::size_t step_count = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const Control u = controller.mpc_step(s);
        if (telemetry) telemetry->push_back(controller.last_telemetry());
        if (solve_times_ms) solve_times_ms->push_back(controller.last_solve_ms());
        for (int i = 0; i < steps_per_sample; ++i) {
            s = rk4_step(sys, s, u, plant_dt);
            ++step_count;
            if (!s.finite()) throw DivergenceError(static_cast<double>(step_count - 1) * plant_dt);
            traj.times.push_back(static_cast<double>(step_count) * plant_dt);
            traj.states.push_back(s);
            traj.inputs.push_back(u);
            traj.energies.push_back(energy(sys, s));
        }
    }
    (void)n;
    return traj;
}

}  // namespace eigenmpc
