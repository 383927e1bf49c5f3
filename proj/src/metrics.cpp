#include "eigenmpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace eigenmpc {

namespace {

double directed_hausdorff_serial(const PointSet& a, const PointSet& b) {
    double worst = 0.0;
    for (const Vec& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& q : b) best = std::min(best, (p - q).squaredNorm());
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double directed_hausdorff_omp(const PointSet& a, const PointSet& b) {
    double worst = 0.0;
    const auto na = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (std::int64_t i = 0; i < na; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& q : b) best = std::min(best, (a[i] - q).squaredNorm());
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance_serial(const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty()) throw ConfigError("hausdorff_distance requires non-empty sets");
    return std::max(directed_hausdorff_serial(a, b), directed_hausdorff_serial(b, a));
}

double hausdorff_distance(const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty()) throw ConfigError("hausdorff_distance requires non-empty sets");
    return std::max(directed_hausdorff_omp(a, b), directed_hausdorff_omp(b, a));
}

double straightness_serial(const PointSet& path, const Vec& c, const Vec& x_eq) {
    if (path.empty()) throw ConfigError("straightness requires a non-empty path");
    const Vec cu = c.normalized();
    double worst = 0.0;
    for (const Vec& p : path) {
        const Vec d = p - x_eq;
        worst = std::max(worst, (d - cu * cu.dot(d)).norm());
    }
    return worst;
}

double straightness(const PointSet& path, const Vec& c, const Vec& x_eq) {
    if (path.empty()) throw ConfigError("straightness requires a non-empty path");
    const Vec cu = c.normalized();
    double worst = 0.0;
    const auto np = static_cast<std::int64_t>(path.size());
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (std::int64_t i = 0; i < np; ++i) {
        const Vec d = path[i] - x_eq;
        worst = std::max(worst, (d - cu * cu.dot(d)).norm());
    }
    return worst;
}

PointSet configuration_path(const Trajectory& traj, double t_from, double t_to) {
    if (t_to < 0.0) t_to = traj.times.empty() ? 0.0 : traj.times.back();
    PointSet pts;
    for (std::size_t i = 0; i < traj.size(); ++i)
        if (traj.times[i] >= t_from - 1e-12 && traj.times[i] <= t_to + 1e-12)
            pts.push_back(traj.states[i].x);
    return pts;
}

PointSet resample_path(const PointSet& path, int count) {
    if (path.empty() || count < 1) throw ConfigError("resample_path requires a non-empty path");
    if (path.size() == 1) return PointSet(count, path.front());

    std::vector<double> arc(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i)
        arc[i] = arc[i - 1] + (path[i] - path[i - 1]).norm();
    const double total = arc.back();
    if (total <= 0.0) return PointSet(count, path.front());

    PointSet out;
    out.reserve(count);
    std::size_t seg = 0;
    for (int k = 0; k < count; ++k) {
        const double target = total * k / (count - 1);
        while (seg + 1 < arc.size() - 1 && arc[seg + 1] < target) ++seg;
        const double span = arc[seg + 1] - arc[seg];
        const double t = span > 0.0 ? (target - arc[seg]) / span : 0.0;
        out.push_back(path[seg] + t * (path[seg + 1] - path[seg]));
    }
    return out;
}

double settling_time(const Trajectory& traj, double e_ref, double band, double hold_time) {
    if (traj.size() == 0) return -1.0;
    // Last violation; the band must hold from there through the end.
    std::ptrdiff_t last_violation = -1;
    for (std::size_t i = 0; i < traj.size(); ++i)
        if (std::abs(traj.energies[i] - e_ref) > band) last_violation = static_cast<std::ptrdiff_t>(i);
    if (last_violation + 1 >= static_cast<std::ptrdiff_t>(traj.size())) return -1.0;
    const double t_settle = traj.times[last_violation + 1];
    if (traj.times.back() - t_settle < hold_time) return -1.0;
    return t_settle;
}

double torque_rms(const Trajectory& traj, double t_from, double t_to) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.inputs.size(); ++i) {
        if (traj.times[i] < t_from || traj.times[i] > t_to) continue;
        acc += traj.inputs[i].squaredNorm();
        count += traj.inputs[i].size();
    }
    return count ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
}

int count_bound_violations(const Trajectory& traj, double limit, double tol) {
    int violations = 0;
    for (const Control& u : traj.inputs)
        if ((u.cwiseAbs().array() > limit + tol).any()) ++violations;
    return violations;
}

double estimate_period(const Trajectory& traj, double t_from, double fallback) {
    // Speed minima mark the turning points; two per period.
    std::vector<double> minima_times;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        if (traj.times[i] < t_from) continue;
        const double s0 = traj.states[i - 1].xdot.squaredNorm();
        const double s1 = traj.states[i].xdot.squaredNorm();
        const double s2 = traj.states[i + 1].xdot.squaredNorm();
        if (s0 > s1 && s1 < s2) minima_times.push_back(traj.times[i]);
    }
    if (minima_times.size() < 2) return fallback;
    std::vector<double> gaps;
    for (std::size_t i = 1; i < minima_times.size(); ++i)
        gaps.push_back(minima_times[i] - minima_times[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    return 2.0 * gaps[gaps.size() / 2];
}

}  // namespace eigenmpc
