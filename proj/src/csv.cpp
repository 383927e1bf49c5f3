#include "eigenmpc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace eigenmpc {

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<SolverTelemetry>* telemetry,
                          std::size_t sample_steps) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot open " + path + " for writing");

    std::fputs("t,th1,th2,th1dot,th2dot,tau1,tau2,E", f);
    if (telemetry) std::fputs(",sqp_iters,kkt,objective", f);
    std::fputc('\n', f);

    const int n = traj.states.empty() ? 0 : traj.states.front().dim();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State& s = traj.states[i];
        // Inputs are per step; the last sample repeats the final input.
        const std::size_t ui = i < traj.inputs.size() ? i : (traj.inputs.empty() ? 0 : traj.inputs.size() - 1);
        std::fprintf(f, "%.9f", traj.times[i]);
        for (int j = 0; j < n; ++j) std::fprintf(f, ",%.9f", s.x[j]);
        for (int j = 0; j < n; ++j) std::fprintf(f, ",%.9f", s.xdot[j]);
        for (int j = 0; j < n; ++j)
            std::fprintf(f, ",%.9f", traj.inputs.empty() ? 0.0 : traj.inputs[ui][j]);
        std::fprintf(f, ",%.9f", traj.energies[i]);
        if (telemetry) {
            std::size_t k = sample_steps > 0 ? i / sample_steps : 0;
            if (k >= telemetry->size() && !telemetry->empty()) k = telemetry->size() - 1;
            const SolverTelemetry& tel =
                telemetry->empty() ? SolverTelemetry{} : (*telemetry)[k];
            std::fprintf(f, ",%d,%.9f,%.9f", tel.sqp_iters, tel.kkt, tel.objective);
        }
        std::fputc('\n', f);
    }
    std::fclose(f);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV " + path);

    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() < 8) throw ConfigError("short CSV row in " + path);
        traj.times.push_back(vals[0]);
        Vec x(2), xd(2), u(2);
        x << vals[1], vals[2];
        xd << vals[3], vals[4];
        u << vals[5], vals[6];
        traj.states.emplace_back(x, xd);
        traj.inputs.push_back(u);
        traj.energies.push_back(vals[7]);
    }
    if (!traj.inputs.empty()) traj.inputs.pop_back();  // last row repeats the final input
    return traj;
}

}  // namespace eigenmpc
