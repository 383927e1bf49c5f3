#pragma once

#include <string>

#include "eigenmpc/integrate.hpp"

namespace eigenmpc {

/// Presentation-only polyline plots: joint-space path, energy vs time and
/// torques vs time, written as <stem>_path.svg, <stem>_energy.svg and
/// <stem>_torque.svg.
void write_run_svgs(const std::string& stem, const Trajectory& traj);

}  // namespace eigenmpc
