#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eigenmpc/double_pendulum.hpp"
#include "eigenmpc/scenario.hpp"

using namespace eigenmpc;

namespace {

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

void print_report(const RunReport& rep) {
    std::cout << rep.scenario << ": settling=" << rep.settling_time_s
              << " s, final torque RMS=" << rep.final_torque_rms_Nm
              << " Nm, straightness=" << rep.max_perp_dist_rad
              << " rad, hausdorff-to-mode=" << rep.hausdorff_to_mode_rad
              << " rad, |E-E_ref|=" << rep.energy_error_J
              << " J, bound violations=" << rep.bound_violations
              << ", mean solve=" << rep.mean_solve_ms << " ms\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EigenMPC: eigenmode finding and eigenmanifold-stabilizing NMPC"};
    app.require_subcommand(1);

    // modes
    auto* modes_cmd = app.add_subcommand("modes", "find an eigenmode at a given energy");
    std::string family = "in-phase";
    double mode_energy = 2.0;
    std::string export_path, orbit_csv;
    int degree = 9;
    modes_cmd->add_option("--family", family, "in-phase | anti-phase")
        ->check(CLI::IsMember({"in-phase", "anti-phase"}));
    modes_cmd->add_option("--energy", mode_energy, "energy level (J)")->required();
    modes_cmd->add_option("--export", export_path, "write mode + chart JSON here");
    modes_cmd->add_option("--orbit-csv", orbit_csv, "write the orbit trajectory CSV here");
    modes_cmd->add_option("--degree", degree, "chart polynomial degree");

    // run
    auto* run_cmd = app.add_subcommand("run", "run a closed-loop scenario");
    std::string preset_name, config_path, out_dir = "out";
    bool svg = false;
    run_cmd->add_option("--preset", preset_name, "preset scenario name");
    run_cmd->add_option("--config", config_path, "scenario JSON file");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_flag("--svg", svg, "write SVG plots");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a preset over a parameter sweep");
    std::string sweep_preset = "fig2_alpha_sweep", sweep_param = "alpha";
    std::string sweep_values = "0,0.05,0.1,0.2";
    std::string sweep_out = "out";
    sweep_cmd->add_option("--preset", sweep_preset, "preset scenario name")->required();
    sweep_cmd->add_option("--param", sweep_param, "parameter to vary")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*modes_cmd) {
            const DoublePendulum plant;
            const auto lms = linear_modes(linearize(plant));
            const LinearMode& lm = family == "anti-phase" ? lms.back() : lms.front();
            Mode mode = find_eigenmode(plant, lm, mode_energy);
            mode.family = family;
            const ModeChart chart = fit_chart(mode, lm.c, plant.equilibrium(), degree);
            std::cout << family << " eigenmode at E = " << mode.energy
                      << " J: q0 = (" << mode.q0.transpose() << "), half period = "
                      << mode.half_period << " s, chart fit residual = " << chart.fit_residual
                      << " rad\n";
            if (!export_path.empty())
                std::ofstream(export_path) << mode_chart_to_json(mode, chart) << "\n";
            if (!orbit_csv.empty()) write_trajectory_csv(orbit_csv, mode.orbit);
            return 0;
        }
        if (*run_cmd) {
            std::vector<Scenario> scenarios;
            if (!preset_name.empty()) {
                scenarios = preset(preset_name);
            } else if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw ConfigError("cannot open " + config_path);
                std::stringstream buf;
                buf << in.rdbuf();
                scenarios.push_back(scenario_from_json(buf.str()));
            } else {
                std::cerr << "run requires --preset or --config\n";
                return 1;
            }
            if (preset_name == "fig2_alpha_sweep") {
                for (const auto& rep :
                     sweep(scenarios.front(), "alpha", {0.0, 0.05, 0.1, 0.2}, out_dir, svg))
                    print_report(rep);
                return 0;
            }
            for (const auto& sc : scenarios) print_report(run_scenario(sc, out_dir, svg));
            return 0;
        }
        if (*sweep_cmd) {
            const auto scenarios = preset(sweep_preset);
            for (const auto& rep :
                 sweep(scenarios.front(), sweep_param, parse_values(sweep_values), sweep_out))
                print_report(rep);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
