#pragma once

#include <vector>

#include "eigenmpc/integrate.hpp"

namespace eigenmpc {

using PointSet = std::vector<Vec>;  // configuration-space points

/// Symmetric Hausdorff distance under the Euclidean metric. The _serial
/// variant is the reference implementation; hausdorff_distance runs the
/// same computation with OpenMP and must agree exactly.
double hausdorff_distance_serial(const PointSet& a, const PointSet& b);
double hausdorff_distance(const PointSet& a, const PointSet& b);

/// Maximum perpendicular distance of the points to the line x_eq + s * c.
double straightness_serial(const PointSet& path, const Vec& c, const Vec& x_eq);
double straightness(const PointSet& path, const Vec& c, const Vec& x_eq);

/// Configuration points of a trajectory slice [t_from, t_to].
PointSet configuration_path(const Trajectory& traj, double t_from = 0.0, double t_to = -1.0);

/// Arc-length resampling of a polyline to `count` points.
PointSet resample_path(const PointSet& path, int count);

/// First time after which |E - E_ref| <= band holds for at least
/// `hold_time` seconds and through the end of the run; negative if never.
double settling_time(const Trajectory& traj, double e_ref, double band, double hold_time);

/// RMS of the stacked torque samples in [t_from, t_to].
double torque_rms(const Trajectory& traj, double t_from, double t_to);

/// Number of samples with any |tau_i| > limit + tol.
int count_bound_violations(const Trajectory& traj, double limit, double tol = 1e-9);

/// Median spacing between kinetic-energy minima in the slice, doubled
/// (period of the oscillation); falls back to `fallback` if fewer than two
/// minima are present.
double estimate_period(const Trajectory& traj, double t_from, double fallback);

}  // namespace eigenmpc
