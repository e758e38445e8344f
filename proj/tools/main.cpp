// dswell: command-line driver for the well-model experiments.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "checks.hpp"
#include "dswell/export.hpp"

namespace fs = std::filesystem;
using namespace dswell;
using dswell::cli::CheckResult;
using dswell::cli::fmt;

namespace {

struct Globals {
    std::string config;
    std::string out = "dswell-out";
    int threads = 0;
    bool check = false;
};

std::string num(double v) { return format_number(v); }
std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

Scenario resolve(const Globals& g, Scenario fallback)
{
    return g.config.empty() ? fallback : load_scenario(g.config);
}

std::string path(const Globals& g, const std::string& name) { return (fs::path(g.out) / name).string(); }

void progress(const std::string& msg) { std::cerr << msg << '\n'; }

/// Writes the summary to stdout and to <out>/<name>, appends the check lines
/// when --check is active and returns the exit code.
int finish(const Globals& g, const std::string& name, std::ostringstream& summary,
           const std::vector<CheckResult>& checks)
{
    int failed = 0;
    if (g.check) {
        summary << "\nchecks:\n";
        for (const auto& c : checks) {
            summary << (c.pass ? "  PASS " : "  FAIL ") << c.name;
            if (!c.detail.empty()) summary << " (" << c.detail << ')';
            summary << '\n';
            failed += c.pass ? 0 : 1;
        }
        if (checks.empty()) summary << "  (no thresholds for this command)\n";
    }
    std::cout << summary.str();
    write_file(path(g, name), [&](std::ostream& os) { os << summary.str(); });
    return failed == 0 ? 0 : 1;
}

int cmd_analytic(const Globals& g)
{
    const Scenario s = resolve(g, Scenario::infinite_well(1.0));
    s.validate();
    save_scenario(s, path(g, "scenario.json"));
    const PermeabilityTensor k = s.permeability.build();
    const WellDescription well = s.well.description();
    const TransformChain chain = build_transform(k, well);
    const KernelSpec kernel = s.kernel.build(chain, s.mesh(0).h_max());
    const AnalyticSolution exact(k, well, s.fluid, kernel);

    const Lattice lattice{s.domain, s.output.lattice};
    const auto p = sample_lattice(lattice, [&](const Vec3& x) { return exact.pressure(x); });
    if (s.output.csv) write_file(path(g, "analytic_field.csv"), [&](std::ostream& os) { write_lattice_csv(os, lattice, p); });
    if (s.output.vtk)
        write_file(path(g, "analytic_field.vtk"),
                   [&](std::ostream& os) { write_vtk_lattice(os, lattice, p, "analytic pressure " + s.name); });

    Table t({"quantity", "value"});
    const Vec3 ev = k.eigenvalues();
    t.add_row({"k_eigenvalue_1", num(ev[0])});
    t.add_row({"k_eigenvalue_2", num(ev[1])});
    t.add_row({"k_eigenvalue_3", num(ev[2])});
    t.add_row({"k_iso", num(chain.k_iso)});
    t.add_row({"axial_scale", num(chain.axial_scale)});
    t.add_row({"ellipse_a", num(chain.a)});
    t.add_row({"ellipse_b", num(chain.b)});
    t.add_row({"focal_f", num(chain.f)});
    t.add_row({"zeta", num(chain.zeta)});
    t.add_row({"kernel_inner", num(kernel.inner)});
    t.add_row({"kernel_outer", num(kernel.outer)});
    t.add_row({"xi", num(xi_anisotropic(kernel, chain.a + chain.b))});
    t.add_row({"rate_hat", num(exact.rate_hat())});
    t.add_row({"center_pressure", num(exact.center_pressure())});
    write_file(path(g, "analytic.csv"), [&](std::ostream& os) { t.write_csv(os); });

    std::ostringstream summary;
    summary << "analytic solution for '" << s.name << "' on a " << lattice.points[0] << "x" << lattice.points[1] << "x"
            << lattice.points[2] << " lattice\n\n";
    t.write_text(summary);
    return finish(g, "analytic_summary.txt", summary, {});
}

int cmd_run(const Globals& g, int level)
{
    const Scenario s = resolve(g, Scenario::infinite_well(1.0));
    save_scenario(s, path(g, "scenario.json"));
    const RunResult r = run_scenario(s, level);
    if (s.output.csv) write_file(path(g, "run_cells.csv"), [&](std::ostream& os) { write_cells_csv(os, r.mesh, r.pressure); });
    if (s.output.vtk)
        write_file(path(g, "run_pressure.vtk"),
                   [&](std::ostream& os) { write_vtk_cells(os, r.mesh, r.pressure, "pressure " + s.name); });

    Table t({"quantity", "value"});
    const CellIndex& n = r.mesh.counts();
    t.add_row({"cells", std::to_string(n[0]) + "x" + std::to_string(n[1]) + "x" + std::to_string(n[2])});
    t.add_row({"h_max", num(r.mesh.h_max())});
    t.add_row({"model", to_string(s.model)});
    t.add_row({"scheme", to_string(s.scheme)});
    t.add_row({"well_pressure", num(r.well_pressure)});
    t.add_row({"total_source", num(r.total_source)});
    t.add_row({"well_pieces", std::to_string(r.coupling.pieces.size())});
    if (r.kernel) t.add_row({"kernel_outer", num(r.kernel->outer)});
    if (r.errors) {
        t.add_row({"E_p", num(r.errors->pressure)});
        t.add_row({"E_q", num(r.errors->source)});
    }
    t.add_row({"solver", r.report.method});
    t.add_row({"iterations", std::to_string(r.report.iterations)});
    t.add_row({"relative_residual", num(r.report.relative_residual)});
    write_file(path(g, "run.csv"), [&](std::ostream& os) { t.write_csv(os); });

    std::ostringstream summary;
    summary << "run '" << s.name << "' at refinement level " << level << "\n\n";
    t.write_text(summary);
    return finish(g, "run_summary.txt", summary, {{"linear solver converged", r.report.converged, r.report.method}});
}

int cmd_convergence(const Globals& g, int levels, const std::vector<double>& alphas)
{
    std::vector<Scenario> cases;
    if (!alphas.empty()) {
        const Scenario base = resolve(g, Scenario::infinite_well(1.0));
        if (base.permeability.tensor) throw std::invalid_argument("--alpha cannot override an explicit tensor");
        for (double a : alphas) {
            Scenario s = base;
            s.permeability.alpha = a;
            cases.push_back(s);
        }
    } else if (!g.config.empty()) {
        cases.push_back(load_scenario(g.config));
    } else {
        for (double a : {1.0, 10.0, 50.0, 100.0}) cases.push_back(Scenario::infinite_well(a));
    }
    save_scenario(cases.front(), path(g, "scenario.json"));

    Table t({"alpha", "level", "nx", "ny", "nz", "h_max", "E_p", "E_q", "rate_p", "rate_q", "iterations"});
    std::vector<CheckResult> checks;
    std::ostringstream failures;
    for (const auto& s : cases) {
        const ConvergenceTable table = run_convergence(s, levels, progress);
        for (const auto& r : table.rows)
            t.add_row({num(table.alpha), std::to_string(r.level), std::to_string(r.cells[0]), std::to_string(r.cells[1]),
                       std::to_string(r.cells[2]), num(r.h_max), num(r.e_p), num(r.e_q), opt(r.rate_p), opt(r.rate_q),
                       std::to_string(r.iterations)});
        if (table.failure) failures << "alpha=" << table.alpha << " stopped at " << *table.failure << '\n';
        const auto c = cli::check_convergence(table);
        checks.insert(checks.end(), c.begin(), c.end());
    }
    write_file(path(g, "convergence.csv"), [&](std::ostream& os) { t.write_csv(os); });

    std::ostringstream summary;
    summary << "convergence study, " << levels << " levels\n\n";
    t.write_text(summary);
    summary << failures.str();
    return finish(g, "convergence_summary.txt", summary, checks);
}

int cmd_kernel_study(const Globals& g, const KernelStudyOptions& opts)
{
    const Scenario s = resolve(g, Scenario::infinite_well(100.0));
    save_scenario(s, path(g, "scenario.json"));
    const KernelStudyResult r = run_kernel_study(s, opts, progress);

    Table t({"regime", "well_radius", "ratio", "outer", "E_q_exact", "E_q_simplified", "note"});
    for (const auto& row : r.rows)
        t.add_row({row.regime, num(row.well_radius), num(row.ratio), num(row.outer), opt(row.e_q_exact),
                   opt(row.e_q_simplified), row.note.empty() ? "" : "\"" + row.note + "\""});
    write_file(path(g, "kernel_study.csv"), [&](std::ostream& os) { t.write_csv(os); });

    std::ostringstream summary;
    summary << "kernel study for '" << s.name << "' (alpha " << s.permeability.alpha << ")\n\n";
    t.write_text(summary);
    summary << "\nfar regime E_q reduction per doubling: " << opt(r.far_reduction_per_doubling)
            << "\nfar regime largest simplified/exact change: " << opt(r.far_max_relative_change)
            << "\nnear regime smallest simplified/exact factor: " << opt(r.near_min_factor) << '\n';
    return finish(g, "kernel_study_summary.txt", summary, cli::check_kernel_study(r));
}

int cmd_rotation(const Globals& g, const RotationSweepOptions& opts)
{
    const Scenario s = resolve(g, Scenario::infinite_well(100.0));
    save_scenario(s, path(g, "scenario.json"));
    const RotationSweepResult r = run_rotation_sweep(s, opts, progress);

    Table t({"family", "angle1_deg", "angle2_deg", "E_q"});
    for (const auto& row : r.rows) t.add_row({row.family, num(row.angle1_deg), num(row.angle2_deg), opt(row.e_q)});
    write_file(path(g, "rotation_sweep.csv"), [&](std::ostream& os) { t.write_csv(os); });

    std::ostringstream summary;
    summary << "rotation sweep for '" << s.name << "', " << r.rows.size() << " runs\n";
    for (const auto& [family, spread] : r.spread) summary << "  " << family << ": max/min E_q = " << num(spread) << '\n';
    return finish(g, "rotation_sweep_summary.txt", summary, cli::check_rotation(r));
}

int cmd_compare(const Globals& g, bool full)
{
    const Scenario s = resolve(g, Scenario::slanted_box());
    save_scenario(s, path(g, "scenario.json"));
    const ComparisonResult r = run_comparison(s, {.levels = full ? 4 : 2}, progress);

    Table t({"level", "nx", "ny", "nz", "h_max", "Q_fixed", "Q_adaptive", "Q_peaceman", "E_Q_fixed", "E_Q_adaptive",
             "E_Q_peaceman"});
    for (const auto& row : r.rows)
        t.add_row({std::to_string(row.level), std::to_string(row.cells[0]), std::to_string(row.cells[1]),
                   std::to_string(row.cells[2]), num(row.h_max), num(row.q_fixed), num(row.q_adaptive),
                   num(row.q_peaceman), num(row.e_fixed), num(row.e_adaptive), num(row.e_peaceman)});
    write_file(path(g, "comparison.csv"), [&](std::ostream& os) { t.write_csv(os); });
    for (const auto& p : r.profiles)
        write_file(path(g, "profile_" + p.label + ".csv"),
                   [&](std::ostream& os) { write_points_csv(os, p.points, p.pressure); });

    std::ostringstream summary;
    summary << "model comparison for '" << s.name << "', reference " << r.reference_cells[0] << "x" << r.reference_cells[1]
            << "x" << r.reference_cells[2] << " with Q = " << num(r.q_reference) << "\n\n";
    t.write_text(summary);
    return finish(g, "comparison_summary.txt", summary, cli::check_comparison(r, full));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Distributed-source well model for anisotropic Darcy flow"};
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    if (const char* env = std::getenv("DSWELL_THREADS")) g.threads = std::atoi(env);
    app.add_option("--config", g.config, "Scenario file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "OpenMP threads (default DSWELL_THREADS, else the runtime default)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--check", g.check, "Exit with status 1 if an acceptance threshold is violated");

    auto* analytic = app.add_subcommand("analytic", "Sample the analytic solution on a lattice");
    int level = 0;
    auto* run = app.add_subcommand("run", "Solve one scenario");
    run->add_option("--level", level, "Uniform refinement level")->check(CLI::Range(0, 6))->capture_default_str();

    int levels = 3;
    std::vector<double> alphas;
    auto* convergence = app.add_subcommand("convergence", "Grid convergence of E_p and E_q");
    convergence->add_option("--levels", levels, "Number of levels")->check(CLI::Range(1, 6))->capture_default_str();
    convergence->add_option("--alpha", alphas, "Anisotropy ratios (comma separated)")->delimiter(',');

    KernelStudyOptions ks;
    auto* kernel = app.add_subcommand("kernel-study", "E_q against the outer kernel radius");
    kernel->add_option("--far-ratios", ks.far_ratios, "Outer radius / (a + b) for the thin well")->delimiter(',');
    kernel->add_option("--near-ratios", ks.near_ratios, "Outer radius / (a + b) for the thick well")->delimiter(',');
    kernel->add_option("--near-radius", ks.near_well_radius, "Well radius of the near regime [m]")->capture_default_str();

    RotationSweepOptions rs;
    std::string family = "both";
    auto* rotation = app.add_subcommand("rotation-sweep", "E_q over rotations of K or of the well");
    rotation->add_option("--start", rs.start_deg, "First angle [deg]")->capture_default_str();
    rotation->add_option("--stop", rs.stop_deg, "Last angle [deg]")->capture_default_str();
    rotation->add_option("--step", rs.step_deg, "Angle step [deg]")->capture_default_str();
    rotation->add_option("--family", family, "permeability, well or both")
        ->check(CLI::IsMember({"permeability", "well", "both"}))
        ->capture_default_str();

    bool full = false;
    auto* compare = app.add_subcommand("compare", "Distributed source against Peaceman on the slanted-well box");
    compare->add_flag("--full", full, "Four test levels against a 160x320x160 reference");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (g.threads > 0) omp_set_num_threads(g.threads);
#endif

    try {
        fs::create_directories(g.out);
        if (*analytic) return cmd_analytic(g);
        if (*run) return cmd_run(g, level);
        if (*convergence) return cmd_convergence(g, levels, alphas);
        if (*kernel) return cmd_kernel_study(g, ks);
        if (*rotation) {
            rs.rotate_permeability = family != "well";
            rs.rotate_well = family != "permeability";
            return cmd_rotation(g, rs);
        }
        if (*compare) return cmd_compare(g, full);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
