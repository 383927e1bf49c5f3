#pragma once

#include <string>
#include <vector>

#include "eigenmpc/cost.hpp"
#include "eigenmpc/metrics.hpp"
#include "eigenmpc/modes.hpp"
#include "eigenmpc/nmpc.hpp"

namespace eigenmpc {

/// A complete, deterministic closed-loop experiment description.
struct Scenario {
    std::string name = "custom";
    SystemParams params;
    CostVariant variant = CostVariant::straight;
    std::string family = "in-phase";  // "in-phase" | "anti-phase"
    double E_ref = 14.0;
    double w_E = 5.0;
    double w_x = 50.0;
    double w_xdot = 2500.0;
    double w_F = 225.0;
    double alpha = 0.1;
    double beta = 0.1;
    int chart_degree = 9;
    std::vector<double> x0 = {0.01, 0.01};
    std::vector<double> xdot0 = {0.0, 0.0};
    double t_end = 30.0;
    int N = 80;
    double dt_shoot = 0.025;
    int substeps = 5;
    double tau_limit = 1.0;
    int sqp_max_iters = 30;
    double kkt_tol = 1e-5;
    double plant_dt = 1e-3;

    State initial_state() const;
};

struct RunReport {
    std::string scenario;
    std::string csv_path;
    double settling_time_s = -1.0;
    double final_torque_rms_Nm = 0.0;
    double hausdorff_to_mode_rad = -1.0;
    double max_perp_dist_rad = 0.0;
    double energy_error_J = 0.0;
    int bound_violations = 0;
    double mean_solve_ms = 0.0;
    int samples = 0;
    bool all_converged = true;
};

/// Preset names: fig2_alpha_sweep, fig3_modes, fig4_straight, fig5_curved,
/// fig6_large_ic. Throws ConfigError for unknown names.
std::vector<Scenario> preset(const std::string& name);

/// Executes the closed loop, writes <name>.csv (+ optional SVG plots and a
/// <name>_report.json) under out_dir, and computes all metrics. The
/// eigenmode at E_ref is found for the mode-similarity metric.
RunReport run_scenario(const Scenario& sc, const std::string& out_dir, bool svg = false);

/// Metrics recomputation from a trajectory (e.g. one re-read from CSV).
/// mode_path, when given, supplies the eigenmode configuration path for
/// the Hausdorff metric.
RunReport compute_metrics(const Scenario& sc, const Trajectory& traj,
                          const PointSet* mode_path = nullptr);

/// Runs the base scenario once per parameter value (in parallel); the
/// output names embed the parameter value. param is one of
/// {alpha, beta, E_ref, w_E, w_x, w_xdot, w_F}.
std::vector<RunReport> sweep(const Scenario& base, const std::string& param,
                             const std::vector<double>& values, const std::string& out_dir,
                             bool svg = false);

/// JSON (de)serialization of a Scenario. Unknown keys are rejected.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);
std::string report_to_json(const RunReport& report);

}  // namespace eigenmpc
