// gfdg: energy-stable RK-DG solver for fourth-order gradient flows.
//
// Subcommands:
//   accuracy-space   mesh-refinement error study on a manufactured solution
//   accuracy-time    time-step refinement study
//   simulate         pattern-formation run with energy CSV + snapshots
//   check-tableau    print a Butcher array and its stability certificate
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gfdg/experiments.hpp"

using namespace gfdg;

namespace {

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                      const RunConfig& defaults)
{
    RunConfig cfg = defaults;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot open config file " + path);
        cfg = parse_config(is);
    }
    for (const auto& o : overrides) apply_override(cfg, o);
    validate(cfg);
    return cfg;
}

RunConfig spatial_defaults()
{
    RunConfig c;
    const double pi = 3.14159265358979323846;
    c.x_min = c.y_min = -2 * pi;
    c.x_max = c.y_max = 2 * pi;
    c.degree = 1;
    c.epsilon = 0.025;
    c.g = 0.0;
    c.tableau = "gl4";
    c.tau = 1e-3;
    c.t_final = 0.01;
    c.pc_iterations = 10;
    c.pc_tolerance = 1e-10;
    c.init_name = "sine-half";
    c.source = "sine-half";
    c.solver_mode = "frozen";
    return c;
}

RunConfig temporal_defaults()
{
    RunConfig c;
    const double pi = 3.14159265358979323846;
    c.x_min = c.y_min = -4 * pi;
    c.x_max = c.y_max = 4 * pi;
    c.nx = c.ny = 64;
    c.degree = 3;
    c.epsilon = 0.025;
    c.g = 0.0;
    c.tableau = "gl4";
    c.tau = 0.25;
    c.t_final = 1.5;
    c.pc_iterations = 2;
    c.pc_tolerance = 1e-10;
    c.init_name = "sine-quarter";
    c.source = "sine-quarter";
    c.solver_mode = "frozen";
    return c;
}

RunConfig simulate_defaults()
{
    RunConfig c;
    c.x_min = c.y_min = 0.0;
    c.x_max = c.y_max = 100.0;
    c.nx = c.ny = 128;
    c.degree = 2;
    c.epsilon = 0.3;
    c.g = 0.0;
    c.tableau = "gl4";
    c.tau = 0.1;
    c.t_final = 198.0;
    c.pc_iterations = 2;
    c.pc_tolerance = 1e-10;
    c.init_type = "random";
    c.seed = 42;
    c.amplitude = 0.1;
    c.source = "none";
    c.solver_mode = "frozen";
    c.energy_csv = "energy.csv";
    c.snapshot_dir = "snapshots";
    c.snapshot_every = 330;    // six snapshots over the default 1980 steps
    return c;
}

void write_study_csv(const std::string& path, const StudyResult& r,
                     const std::string& label)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << label << ",err_l2,order_l2,err_linf,order_linf\n";
    os << std::setprecision(17);
    for (const auto& row : r.table.rows) {
        os << row.resolution << ',' << row.err_l2 << ',';
        if (row.order_l2) os << *row.order_l2;
        os << ',' << row.err_linf << ',';
        if (row.order_linf) os << *row.order_linf;
        os << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-stable RK-DG solver for fourth-order gradient flows"};
    app.require_subcommand(1);

    std::string config_path, out_path, mesh_list = "8,16,32,64";
    std::string tau_list = "0.25,0.125,0.0625,0.03125";
    std::vector<std::string> overrides;
    bool show_config = false;
    std::string dump_operator_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "config file (key = value with [sections])");
        cmd->add_option("--set", overrides,
                        "override a config key, e.g. --set time.tau=0.05")
            ->take_all();
        cmd->add_flag("--print-config", show_config,
                      "print the effective config and exit");
    };

    auto* space_cmd = app.add_subcommand(
        "accuracy-space", "mesh-refinement accuracy study (manufactured solution)");
    add_common(space_cmd);
    space_cmd->add_option("--mesh-sizes", mesh_list, "comma list of N (cells per axis)");
    space_cmd->add_option("--out", out_path, "write the table as CSV");

    auto* time_cmd =
        app.add_subcommand("accuracy-time", "time-step refinement accuracy study");
    add_common(time_cmd);
    time_cmd->add_option("--taus", tau_list, "comma list of time steps");
    time_cmd->add_option("--out", out_path, "write the table as CSV");

    auto* sim_cmd = app.add_subcommand(
        "simulate", "pattern-formation simulation with energy/snapshot output");
    add_common(sim_cmd);
    sim_cmd->add_option("--dump-operator", dump_operator_path,
                        "write the assembled spatial operator in 'row col value' text");

    std::string tab_name, tab_file;
    auto* tab_cmd = app.add_subcommand("check-tableau",
                                       "print a Butcher array, its stability matrix, "
                                       "eigenvalues and verdict");
    tab_cmd->add_option("--name", tab_name,
                        "builtin: qz2 | crouzeix3 | gl4 | backward-euler | "
                        "implicit-midpoint");
    tab_cmd->add_option("--file", tab_file, "coefficient file (stages/A/b/c lines)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (space_cmd->parsed() || time_cmd->parsed()) {
            const bool spatial = space_cmd->parsed();
            RunConfig cfg = load_config(config_path, overrides,
                                        spatial ? spatial_defaults() : temporal_defaults());
            if (show_config) {
                std::cout << print_config(cfg);
                return 0;
            }
            StudyResult res;
            if (spatial) {
                std::vector<int> sizes;
                for (double v : parse_double_list(mesh_list))
                    sizes.push_back(static_cast<int>(v));
                res = accuracy_space_study(cfg, sizes, &std::cout);
            } else {
                res = accuracy_time_study(cfg, parse_double_list(tau_list), &std::cout);
            }
            print_eoc_table(res.table, std::cout);
            if (!out_path.empty())
                write_study_csv(out_path, res, res.table.resolution_label);
        } else if (sim_cmd->parsed()) {
            RunConfig cfg = load_config(config_path, overrides, simulate_defaults());
            if (show_config) {
                std::cout << print_config(cfg);
                return 0;
            }
            if (!dump_operator_path.empty()) {
                ProblemSetup setup = build_setup(cfg);
                std::ofstream os(dump_operator_path);
                if (!os) throw std::runtime_error("cannot open " + dump_operator_path);
                setup.G->dump_coordinate(os);
            }
            SimulateResult res = simulate(cfg, &std::cout);
            std::cout << "final t = " << res.final_state.t
                      << ", E - C0|Omega| = " << res.energy.back().energy_shifted
                      << ", snapshots: " << res.snapshots_written << "\n";
        } else if (tab_cmd->parsed()) {
            ButcherTableau t;
            if (!tab_name.empty()) {
                t = builtin_tableau(tab_name);
            } else if (!tab_file.empty()) {
                std::ifstream is(tab_file);
                if (!is) throw std::runtime_error("cannot open tableau file " + tab_file);
                t = parse_tableau_text(is);
            } else {
                throw std::runtime_error("check-tableau needs --name or --file");
            }
            std::cout << "tableau: " << t.name << "\n";
            print_butcher_array(t, std::cout);
            std::cout << "consistency defect (c - A*1, sum b - 1): "
                      << t.consistency_defect() << "\n";
            const Eigen::MatrixXd M = stability_matrix(t);
            std::cout << "stability matrix M:\n" << M << "\n";
            const auto v = certify_algebraically_stable(t);
            std::cout << "eigenvalues of M: " << v.eigenvalues.transpose() << "\n";
            std::cout << "verdict: " << (v.stable ? "stable" : "UNSTABLE: " + v.reason)
                      << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
