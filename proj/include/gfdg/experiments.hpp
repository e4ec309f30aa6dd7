/// @file experiments.hpp
/// Experiment drivers shared by the CLI and the acceptance suite: accuracy
/// studies (mesh and time-step refinement against manufactured solutions)
/// and pattern-formation simulation with energy/snapshot output.
#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gfdg/config.hpp"
#include "gfdg/diagnostics.hpp"
#include "gfdg/stepper.hpp"
#include "gfdg/vtk.hpp"

namespace gfdg {

struct ProblemSetup {
    SpacePtr space;
    std::shared_ptr<GOperator> G;
    Potential pot;
    ButcherTableau tableau;
    SolverOptions solver;
    SourceFn source;   // empty when cfg.source == "none"
};

inline Potential build_potential(const RunConfig& cfg)
{
    if (cfg.potential == "swift-hohenberg") {
        Potential p = swift_hohenberg(cfg.epsilon, cfg.g, cfg.C0);
        p.a = cfg.a;
        return p;
    }
    if (cfg.potential == "zero") return zero_potential(cfg.C0, cfg.a);
    throw std::invalid_argument("unknown potential '" + cfg.potential + "'");
}

inline ProblemSetup build_setup(const RunConfig& cfg)
{
    validate(cfg);
    ProblemSetup s;
    const BcKind bc = (cfg.bc == "periodic") ? BcKind::periodic : BcKind::natural;
    const Mesh mesh = (cfg.dim == 1)
                          ? build_mesh_1d(cfg.x_min, cfg.x_max, cfg.nx, bc)
                          : build_mesh_2d(cfg.x_min, cfg.x_max, cfg.nx, cfg.y_min,
                                          cfg.y_max, cfg.ny, bc);
    s.space = make_space(mesh, cfg.degree, cfg.quad_points > 0 ? cfg.quad_points : -1);
    s.pot = build_potential(cfg);
    s.G = std::make_shared<GOperator>(s.space, s.pot.a);
    s.tableau = builtin_tableau(cfg.tableau);
    s.solver.mode = (cfg.solver_mode == "frozen") ? SolverMode::frozen
                                                  : SolverMode::direct;
    s.solver.rtol = cfg.solver_rtol;
    if (cfg.source != "none")
        s.source = manufactured_source(cfg.epsilon, cfg.g, cfg.source);
    return s;
}

struct StudyResult {
    EocTable table;
    std::vector<double> resolution, err_l2, err_linf;
};

/// Mesh-refinement accuracy study: runs the manufactured problem named by
/// init.name on every N in `mesh_sizes` with fixed tau, then reports errors
/// and orders at t_final.
inline StudyResult accuracy_space_study(RunConfig cfg, const std::vector<int>& mesh_sizes,
                                        std::ostream* log = nullptr)
{
    if (cfg.init_type != "named")
        throw std::invalid_argument("accuracy study needs a named exact solution");
    const ManufacturedSolution ms = manufactured_solution(cfg.init_name);
    StudyResult out;
    for (int n : mesh_sizes) {
        cfg.nx = cfg.ny = n;
        ProblemSetup setup = build_setup(cfg);
        Stepper stepper(setup.G, setup.pot, setup.tableau, cfg.tau, setup.solver,
                        setup.source);
        StepState st = stepper.initial_state(ms.exact_at(0.0));
        st = stepper.run(std::move(st), cfg.step_count(), cfg.pc_iterations,
                         cfg.pc_tolerance);
        out.resolution.push_back(n);
        out.err_l2.push_back(error_l2(st.u_h, ms.exact_at(st.t)));
        out.err_linf.push_back(error_linf(st.u_h, ms.exact_at(st.t)));
        if (log)
            *log << "N=" << n << "  L2=" << out.err_l2.back()
                 << "  Linf=" << out.err_linf.back() << "\n";
    }
    out.table = eoc("N", out.resolution, out.err_l2, out.err_linf);
    return out;
}

/// Time-step refinement study at fixed mesh: runs every tau in `taus` up to
/// the same final time t_final.
inline StudyResult accuracy_time_study(RunConfig cfg, const std::vector<double>& taus,
                                       std::ostream* log = nullptr)
{
    if (cfg.init_type != "named")
        throw std::invalid_argument("accuracy study needs a named exact solution");
    if (!(cfg.t_final > 0.0))
        throw std::invalid_argument("accuracy-time study needs time.t_final");
    const ManufacturedSolution ms = manufactured_solution(cfg.init_name);
    StudyResult out;
    ProblemSetup setup = build_setup(cfg);
    for (double tau : taus) {
        cfg.tau = tau;
        cfg.steps = 0;
        validate(cfg);
        Stepper stepper(setup.G, setup.pot, setup.tableau, tau, setup.solver,
                        setup.source);
        StepState st = stepper.initial_state(ms.exact_at(0.0));
        st = stepper.run(std::move(st), cfg.step_count(), cfg.pc_iterations,
                         cfg.pc_tolerance);
        out.resolution.push_back(tau);
        out.err_l2.push_back(error_l2(st.u_h, ms.exact_at(st.t)));
        out.err_linf.push_back(error_linf(st.u_h, ms.exact_at(st.t)));
        if (log)
            *log << "tau=" << tau << "  L2=" << out.err_l2.back()
                 << "  Linf=" << out.err_linf.back() << "\n";
    }
    out.table = eoc("tau", out.resolution, out.err_l2, out.err_linf);
    return out;
}

struct SimulateResult {
    StepState final_state;
    int snapshots_written = 0;
    std::vector<EnergyRecord> energy;
};

/// Pattern-formation run: seeded random (or named) initial data, per-step
/// energy records (optionally CSV), periodic field snapshots (VTK or CSV).
inline SimulateResult simulate(const RunConfig& cfg, std::ostream* log = nullptr)
{
    ProblemSetup setup = build_setup(cfg);
    Stepper stepper(setup.G, setup.pot, setup.tableau, cfg.tau, setup.solver,
                    setup.source);
    StepState st;
    if (cfg.init_type == "random")
        st = stepper.initial_state(random_cell_means(setup.space, cfg.seed, cfg.amplitude));
    else
        st = stepper.initial_state(manufactured_solution(cfg.init_name).exact_at(0.0));

    const int n_steps = cfg.step_count();
    const std::vector<double> snap_times = parse_double_list(cfg.snapshot_times);

    std::ofstream csv;
    if (!cfg.energy_csv.empty()) {
        csv.open(cfg.energy_csv);
        if (!csv) throw std::runtime_error("cannot open " + cfg.energy_csv);
        write_energy_csv_header(csv);
    }
    if (!cfg.snapshot_dir.empty())
        std::filesystem::create_directories(cfg.snapshot_dir);

    SimulateResult result;
    const double c0_shift = setup.pot.C0 * setup.space->mesh().domain_measure();
    EnergyRecord rec;
    rec.step = 0;
    rec.time = 0.0;
    rec.energy = discrete_energy(st.q_h, st.U_h);
    rec.energy_shifted = rec.energy - c0_shift;
    result.energy.push_back(rec);
    if (csv.is_open()) write_energy_csv_row(csv, rec);

    auto snapshot = [&](const StepState& s, int step) {
        if (cfg.snapshot_dir.empty()) return;
        const PlotGrid grid = sample_plot_grid(s.u_h, cfg.plot_samples);
        std::ostringstream name;
        name << cfg.snapshot_dir << "/u_" << std::setw(6) << std::setfill('0') << step
             << (cfg.snapshot_format == "vtk" ? ".vtk" : ".csv");
        if (cfg.snapshot_format == "vtk")
            write_vtk_rectilinear(name.str(), grid);
        else
            write_csv_grid(name.str(), grid);
        ++result.snapshots_written;
    };
    auto wants_snapshot = [&](int step, double t) {
        if (cfg.snapshot_dir.empty()) return false;
        if (step == n_steps) return true;
        if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) return true;
        for (double target : snap_times)
            if (std::abs(t - target) <= 0.5 * cfg.tau) return true;
        return false;
    };
    if (wants_snapshot(0, 0.0) || !snap_times.empty() || cfg.snapshot_every > 0)
        snapshot(st, 0);

    double prev_energy = rec.energy;
    st = stepper.run(std::move(st), n_steps, cfg.pc_iterations, cfg.pc_tolerance,
                     [&](int step, const StepState& s, const StepDiagnostics& d) {
                         EnergyRecord r;
                         r.step = step;
                         r.time = s.t;
                         r.energy = d.energy;
                         r.energy_shifted = d.energy_shifted;
                         r.dissipation = prev_energy - d.energy;
                         r.dissipation_bound = d.dissipation_bound;
                         r.pc_iterations = d.pc_iterations;
                         prev_energy = d.energy;
                         result.energy.push_back(r);
                         if (csv.is_open()) write_energy_csv_row(csv, r);
                         if (wants_snapshot(step, s.t)) snapshot(s, step);
                         if (log && (step % 100 == 0 || step == n_steps))
                             *log << "step " << step << "  t=" << s.t
                                  << "  E_shifted=" << r.energy_shifted << "\n";
                     });
    result.final_state = std::move(st);
    return result;
}

} // namespace gfdg
