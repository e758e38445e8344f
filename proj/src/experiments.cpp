#include "dswell/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace dswell {

namespace {

std::string describe(const char* fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScalarField constant_field(double v)
{
    if (v == 0.0) return {};
    return [v](const Vec3&) { return v; };
}

}  // namespace

double exterior_extension(const TransformChain& chain, const KernelSpec& kernel, const Box& domain,
                          const WellLine& line)
{
    const auto clip = clip_line(line, domain);
    if (!clip) return 0.0;

    // A support point at w-radius rho_o lies at most (rho_o + f^2/rho_o)/2 from
    // the axis in the stretched plane, and S^{-1} stretches by at most sigma_max.
    const Vec3 sv = symmetric_eigen(chain.stretch_inverse).values;
    const double sigma = std::max(std::abs(sv[0]), std::abs(sv[2]));
    const double rho = kernel.outer;
    const double reach = sigma * 0.5 * (rho + chain.f * chain.f / rho);

    double extension = 0.0;
    for (double s : {clip->first, clip->second}) {
        const Vec3 x = line.at(s);
        std::size_t face = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < 3; ++d) {
            const double gap = std::min(std::abs(x[d] - domain.lower[d]), std::abs(x[d] - domain.upper[d]));
            if (gap < best) best = gap, face = d;
        }
        const double crossing = std::max(std::abs(line.direction[face]), 0.05);
        extension = std::max(extension, reach / crossing);
    }
    return extension;
}

RunResult run_scenario(const Scenario& s, int refinement)
{
    s.validate();
    RunResult r{.mesh = s.mesh(refinement)};
    const PermeabilityTensor k = s.permeability.build();
    const WellDescription well = s.well.description();
    const WellLine line = s.well.line();
    r.chain = build_transform(k, well);
    const KernelSpec kernel = s.kernel.build(r.chain, r.mesh.h_max());
    if (s.model == WellModel::distributed) r.kernel = kernel;

    BoundarySpec bc;
    if (s.boundary.analytic) {
        auto exact = std::make_shared<const AnalyticSolution>(k, well, s.fluid, kernel);
        const ScalarField pe = [exact](const Vec3& x) { return exact->pressure(x); };
        bc = BoundarySpec::all_dirichlet(pe);
        bc.free_region = s.boundary.free_region;
        bc.constrained_value = pe;
        r.exact = std::move(exact);
    } else {
        for (std::size_t d = 0; d < 6; ++d) {
            const auto& side = s.boundary.sides[d];
            bc.sides[d] = {side.kind, constant_field(side.value)};
        }
    }

    const FluxOperator op(r.mesh, k, s.fluid, bc, s.scheme);
    FluxSystem flux = op.assemble();
    r.region_types = op.num_region_types();
    r.worst_local_rcond = op.worst_local_rcond();

    WellCoupling coupling;
    if (s.model == WellModel::distributed) {
        DistributedWellOptions opts;
        opts.jacobian = s.kernel.jacobian;
        opts.sampling_spacing = s.kernel.sampling_spacing;
        if (r.exact && !s.well.is_segment()) {
            opts.exterior_extension = exterior_extension(r.chain, kernel, s.domain, line);
            opts.exterior_center_pressure = r.exact->center_pressure();
        }
        coupling = couple_distributed(op, flux, well, kernel, line, opts);
    } else {
        coupling = couple_peaceman(op, flux, well, line);
    }

    const std::size_t n = r.mesh.num_cells();
    DiscreteSystem sys = s.well.closure == WellClosure::pressure ? assemble_well(std::move(flux), coupling)
                                                                 : assemble_well_rate(std::move(flux), coupling, s.well.rate);
    DiscreteSolution sol = solve_pressure(sys, s.solver);
    if (sys.well_unknown) coupling.well_pressure = sol.pressure[*sys.well_unknown];
    sol.pressure.resize(n);
    sys.constrained.resize(n);

    r.report = sol.report;
    r.well_pressure = coupling.well_pressure;
    r.total_source = evaluate_well(coupling, sys.constrained, sol.pressure).total;
    if (r.exact) r.errors = error_norms(r.mesh, sys.constrained, sol.pressure, *r.exact, coupling);
    r.pressure = std::move(sol.pressure);
    r.constrained = std::move(sys.constrained);
    r.coupling = std::move(coupling);
    return r;
}

std::optional<double> observed_rate(double coarse, double fine)
{
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
    return std::log2(coarse / fine);
}

ConvergenceTable run_convergence(const Scenario& s, int levels, const Progress& progress)
{
    if (!s.boundary.analytic) throw std::invalid_argument("convergence study needs the analytic boundary setup");
    if (levels < 1) throw std::invalid_argument("convergence study needs at least one level");
    ConvergenceTable table{.alpha = s.permeability.alpha};
    for (int level = 0; level < levels; ++level) {
        const auto t0 = std::chrono::steady_clock::now();
        RunResult run;
        try {
            run = run_scenario(s, level);
        } catch (const SolverError& e) {
            table.failure = "level " + std::to_string(level) + ": " + e.what();
            break;
        }
        ConvergenceRow row{.level = level,
                           .cells = run.mesh.counts(),
                           .h_max = run.mesh.h_max(),
                           .e_p = run.errors->pressure,
                           .e_q = run.errors->source,
                           .iterations = run.report.iterations,
                           .method = run.report.method};
        if (!table.rows.empty()) {
            row.rate_p = observed_rate(table.rows.back().e_p, row.e_p);
            row.rate_q = observed_rate(table.rows.back().e_q, row.e_q);
        }
        table.rows.push_back(row);
        if (progress)
            progress(describe("alpha=%g level %g: E_p=%.4e E_q=%.4e", table.alpha, level, row.e_p, row.e_q)
                     + describe(" (%.1f s)", seconds_since(t0)));
    }
    return table;
}

KernelStudyResult run_kernel_study(const Scenario& base, const KernelStudyOptions& opts, const Progress& progress)
{
    if (!base.boundary.analytic) throw std::invalid_argument("kernel study needs the analytic boundary setup");
    KernelStudyResult result;

    const auto study = [&](const std::string& regime, double radius, const std::vector<double>& ratios) {
        for (double ratio : ratios) {
            Scenario s = base;
            s.model = WellModel::distributed;
            s.well.radius = radius;
            s.kernel.outer_ratio = ratio;
            s.kernel.outer.reset();
            s.kernel.adaptive = false;

            KernelStudyRow row{.regime = regime, .well_radius = radius, .ratio = ratio};
            const TransformChain chain = build_transform(s.permeability.build(), s.well.description());
            try {
                const KernelSpec k = s.kernel.build(chain, 1.0);
                row.outer = k.outer;
                xi_anisotropic(k, chain.a + chain.b);
            } catch (const std::invalid_argument& e) {
                row.note = e.what();
                result.rows.push_back(row);
                continue;
            }
            for (JacobianMode mode : {JacobianMode::exact, JacobianMode::simplified}) {
                s.kernel.jacobian = mode;
                try {
                    const double e = run_scenario(s, opts.refinement).errors->source;
                    (mode == JacobianMode::exact ? row.e_q_exact : row.e_q_simplified) = e;
                } catch (const SolverError& e) {
                    row.note = e.what();
                }
            }
            if (progress && row.e_q_exact && row.e_q_simplified)
                progress(regime + describe(" ratio %g: E_q exact %.4e, simplified %.4e", ratio, *row.e_q_exact,
                                           *row.e_q_simplified));
            result.rows.push_back(row);
        }
    };
    study("far", opts.far_well_radius, opts.far_ratios);
    study("near", opts.near_well_radius, opts.near_ratios);

    std::vector<const KernelStudyRow*> far, near;
    for (const auto& row : result.rows) {
        if (!row.e_q_exact || !row.e_q_simplified) continue;
        (row.regime == "far" ? far : near).push_back(&row);
    }
    if (far.size() >= 2) {
        const double doublings = std::log2(far.back()->ratio / far.front()->ratio);
        if (doublings > 0.0)
            result.far_reduction_per_doubling = std::pow(*far.front()->e_q_exact / *far.back()->e_q_exact, 1.0 / doublings);
    }
    for (const auto* row : far) {
        const double change = std::abs(*row->e_q_simplified / *row->e_q_exact - 1.0);
        result.far_max_relative_change = std::max(result.far_max_relative_change.value_or(0.0), change);
    }
    for (const auto* row : near) {
        const double factor = *row->e_q_simplified / *row->e_q_exact;
        result.near_min_factor = std::min(result.near_min_factor.value_or(factor), factor);
    }
    return result;
}

RotationSweepResult run_rotation_sweep(const Scenario& base, const RotationSweepOptions& opts, const Progress& progress)
{
    if (!base.boundary.analytic || base.well.is_segment())
        throw std::invalid_argument("rotation sweep needs the infinite-well analytic setup");
    if (!(opts.step_deg > 0.0) || opts.stop_deg < opts.start_deg) throw std::invalid_argument("invalid angle range");

    std::vector<double> angles;
    const int steps = static_cast<int>(std::floor((opts.stop_deg - opts.start_deg) / opts.step_deg + 1e-9));
    for (int i = 0; i <= steps; ++i) angles.push_back(opts.start_deg + opts.step_deg * i);

    RotationSweepResult result;
    const auto sweep = [&](const std::string& family) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double g1 : angles) {
            for (double g2 : angles) {
                Scenario s = base;
                if (family == "permeability") {
                    s.permeability.tensor.reset();
                    s.permeability.gamma1_deg = g1;
                    s.permeability.gamma2_deg = g2;
                } else {
                    s.well.beta1_deg = g1;
                    s.well.beta2_deg = g2;
                }
                RotationRow row{.family = family, .angle1_deg = g1, .angle2_deg = g2};
                try {
                    row.e_q = run_scenario(s, opts.refinement).errors->source;
                    lo = std::min(lo, *row.e_q);
                    hi = std::max(hi, *row.e_q);
                } catch (const std::exception& e) {
                    row.note = e.what();
                }
                if (progress)
                    progress(family + describe(" %g/%g deg: E_q %.4e", g1, g2, row.e_q.value_or(std::nan(""))));
                result.rows.push_back(row);
            }
        }
        if (hi > 0.0 && lo > 0.0) result.spread.emplace_back(family, hi / lo);
    };
    if (opts.rotate_permeability) sweep("permeability");
    if (opts.rotate_well) sweep("well");
    return result;
}

Profile line_profile(const std::string& label, const StructuredMesh& mesh, std::span<const double> p, std::size_t axis,
                     const Vec3& through)
{
    if (axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
    Profile out{.label = label};
    const auto n = mesh.counts()[axis];
    for (int i = 0; i < n; ++i) {
        Vec3 x = through;
        x[axis] = mesh.bounds().lower[axis] + (i + 0.5) * mesh.spacing()[axis];
        const auto cell = mesh.locate(x);
        if (!cell) continue;
        out.points.push_back(mesh.center(*cell));
        out.pressure.push_back(p[*cell]);
    }
    return out;
}

ComparisonResult run_comparison(const Scenario& base, const ComparisonOptions& opts, const Progress& progress)
{
    if (opts.levels < 1) throw std::invalid_argument("comparison needs at least one test level");
    const Box& box = base.domain;
    const Vec3 centre = 0.5 * (box.lower + box.upper);

    Scenario fixed = base;
    fixed.model = WellModel::distributed;
    fixed.kernel.adaptive = false;
    Scenario adaptive = fixed;
    adaptive.kernel.adaptive = true;
    adaptive.kernel.adaptive_reference_h = base.mesh(0).h_max();
    Scenario peaceman = base;
    peaceman.model = WellModel::peaceman;

    ComparisonResult result;
    const auto add_profiles = [&](const std::string& name, const RunResult& run) {
        result.profiles.push_back(line_profile(name + "_x", run.mesh, run.pressure, 0, centre));
        result.profiles.push_back(line_profile(name + "_y", run.mesh, run.pressure, 1, centre));
    };

    const auto timed = [&](const std::string& what, const Scenario& s, int level) {
        const auto t0 = std::chrono::steady_clock::now();
        RunResult run = run_scenario(s, level);
        if (progress) progress(what + describe(" level %g: Q = %.10g (%.1f s)", level, run.total_source, seconds_since(t0)));
        return run;
    };

    RunResult ref = timed("reference", fixed, opts.levels);
    result.reference_cells = ref.mesh.counts();
    result.q_reference = ref.total_source;
    add_profiles("reference", ref);

    for (int level = 0; level < opts.levels; ++level) {
        const RunResult a = timed("fixed kernel", fixed, level);
        const RunResult b = timed("adaptive kernel", adaptive, level);
        const RunResult c = timed("peaceman", peaceman, level);
        result.rows.push_back({.level = level,
                               .cells = a.mesh.counts(),
                               .h_max = a.mesh.h_max(),
                               .q_fixed = a.total_source,
                               .q_adaptive = b.total_source,
                               .q_peaceman = c.total_source,
                               .e_fixed = total_source_error(a.total_source, result.q_reference),
                               .e_adaptive = total_source_error(b.total_source, result.q_reference),
                               .e_peaceman = total_source_error(c.total_source, result.q_reference)});
        if (level + 1 == opts.levels) {
            add_profiles("fixed", a);
            add_profiles("adaptive", b);
            add_profiles("peaceman", c);
        }
    }
    return result;
}

}  // namespace dswell
