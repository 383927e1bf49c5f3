#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eigenmpc/integrate.hpp"

namespace eigenmpc {

/// Per-MPC-sample solver telemetry. Values are repeated on every CSV row
/// belonging to the sample.
struct SolverTelemetry {
    int sqp_iters = 0;
    double kkt = 0.0;
    double objective = 0.0;
};

/// Writes `t,th1,th2,th1dot,th2dot,tau1,tau2,E` (9-digit fixed precision).
/// When telemetry is given (one entry per control sample of length
/// sample_steps plant steps), the columns `sqp_iters,kkt,objective` are
/// appended.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<SolverTelemetry>* telemetry = nullptr,
                          std::size_t sample_steps = 1);

/// Reads back a CSV produced by write_trajectory_csv (telemetry columns,
/// if present, are ignored).
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace eigenmpc
