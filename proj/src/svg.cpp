#include "eigenmpc/svg.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace eigenmpc {

namespace {

struct Series {
    std::string color;
    std::vector<double> xs, ys;
};

void write_svg(const std::string& path, const std::vector<Series>& series) {
    constexpr double w = 640.0, h = 480.0, margin = 40.0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (double v : s.xs) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.ys) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            const double px = margin + (s.xs[i] - xmin) / (xmax - xmin) * (w - 2 * margin);
            const double py = h - margin - (s.ys[i] - ymin) / (ymax - ymin) * (h - 2 * margin);
            out << px << "," << py << " ";
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void write_run_svgs(const std::string& stem, const Trajectory& traj) {
    Series path{"steelblue", {}, {}};
    Series energy{"darkorange", {}, {}};
    Series tau1{"steelblue", {}, {}};
    Series tau2{"firebrick", {}, {}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        path.xs.push_back(traj.states[i].x[0]);
        path.ys.push_back(traj.states[i].x[1]);
        energy.xs.push_back(traj.times[i]);
        energy.ys.push_back(traj.energies[i]);
        if (i < traj.inputs.size()) {
            tau1.xs.push_back(traj.times[i]);
            tau1.ys.push_back(traj.inputs[i][0]);
            tau2.xs.push_back(traj.times[i]);
            tau2.ys.push_back(traj.inputs[i][1]);
        }
    }
    write_svg(stem + "_path.svg", {path});
    write_svg(stem + "_energy.svg", {energy});
    write_svg(stem + "_torque.svg", {tau1, tau2});
}

}  // namespace eigenmpc
