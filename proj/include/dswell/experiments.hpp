#pragma once

// Scenario runs and the parameter studies built from them. The functions here
// return plain result structs; the CLI and the acceptance test decide how to
// print and judge them.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dswell/scenario.hpp"

namespace dswell {

struct RunResult {
    StructuredMesh mesh;
    std::vector<double> pressure;  ///< per cell
    std::vector<char> constrained;
    WellCoupling coupling;
    SolverReport report;
    TransformChain chain;
    std::optional<KernelSpec> kernel;         ///< distributed model only
    std::shared_ptr<const AnalyticSolution> exact;  ///< analytic setups only
    double well_pressure = 0.0;
    double total_source = 0.0;  ///< Q over free cells [kg/s]
    std::optional<ErrorNorms> errors;
    std::size_t region_types = 0;
    double worst_local_rcond = 0.0;
};

/// Assembles and solves one scenario on mesh(refinement). Throws SolverError
/// if the linear solve fails.
RunResult run_scenario(const Scenario& s, int refinement = 0);

/// Distance the infinite well has to be continued past the mesh so that
/// every support ellipse that can reach the mesh is included.
double exterior_extension(const TransformChain& chain, const KernelSpec& kernel, const Box& domain,
                          const WellLine& line);

/// log2(coarse / fine); empty if either value is not positive.
std::optional<double> observed_rate(double coarse, double fine);

using Progress = std::function<void(const std::string&)>;

struct ConvergenceRow {
    int level = 0;
    CellIndex cells{};
    double h_max = 0.0;
    double e_p = 0.0;
    double e_q = 0.0;
    std::optional<double> rate_p;
    std::optional<double> rate_q;
    int iterations = 0;
    std::string method;
};

struct ConvergenceTable {
    double alpha = 1.0;
    std::vector<ConvergenceRow> rows;
    /// Set when a level failed; rows holds the completed levels.
    std::optional<std::string> failure;
};

/// Levels 0 .. levels-1 of an analytic scenario.
ConvergenceTable run_convergence(const Scenario& s, int levels, const Progress& progress = {});

struct KernelStudyOptions {
    /// Far regime: thin well, outer radius a large multiple of a + b.
    double far_well_radius = 0.1;
    std::vector<double> far_ratios{100.0, 200.0, 400.0};
    /// Near regime: well radius comparable to the cell size.
    double near_well_radius = 10.0;
    std::vector<double> near_ratios{1.5, 2.0, 3.0, 4.0};
    int refinement = 0;
};

struct KernelStudyRow {
    std::string regime;  ///< "far" or "near"
    double well_radius = 0.0;
    double ratio = 0.0;
    double outer = 0.0;  ///< w-plane outer radius [m]
    std::optional<double> e_q_exact;
    std::optional<double> e_q_simplified;
    std::string note;  ///< reason when a kernel is not admissible
};

struct KernelStudyResult {
    std::vector<KernelStudyRow> rows;
    /// Geometric-mean reduction of the exact-Jacobian E_q per doubling of the
    /// outer radius over the far ratios.
    std::optional<double> far_reduction_per_doubling;
    /// Largest |E_q(simplified) / E_q(exact) - 1| in the far regime.
    std::optional<double> far_max_relative_change;
    /// Smallest E_q(simplified) / E_q(exact) in the near regime.
    std::optional<double> near_min_factor;
};

KernelStudyResult run_kernel_study(const Scenario& base, const KernelStudyOptions& opts = {},
                                   const Progress& progress = {});

struct RotationSweepOptions {
    double start_deg = 0.0;
    double stop_deg = 90.0;
    double step_deg = 10.0;
    bool rotate_permeability = true;
    bool rotate_well = true;
    int refinement = 0;
};

struct RotationRow {
    std::string family;  ///< "permeability" (gamma angles) or "well" (beta angles)
    double angle1_deg = 0.0;
    double angle2_deg = 0.0;
    std::optional<double> e_q;
    std::string note;
};

struct RotationSweepResult {
    std::vector<RotationRow> rows;
    /// max E_q / min E_q per family over the successful runs.
    std::vector<std::pair<std::string, double>> spread;
};

RotationSweepResult run_rotation_sweep(const Scenario& base, const RotationSweepOptions& opts = {},
                                       const Progress& progress = {});

struct ComparisonOptions {
    /// Test levels 0 .. levels-1; the reference is the distributed model with
    /// the fixed kernel on level `levels`.
    int levels = 2;
};

struct ComparisonRow {
    int level = 0;
    CellIndex cells{};
    double h_max = 0.0;
    double q_fixed = 0.0;
    double q_adaptive = 0.0;
    double q_peaceman = 0.0;
    double e_fixed = 0.0;
    double e_adaptive = 0.0;
    double e_peaceman = 0.0;
};

struct Profile {
    std::string label;  ///< model and line, for example "reference_x"
    std::vector<Vec3> points;
    std::vector<double> pressure;
};

struct ComparisonResult {
    std::vector<ComparisonRow> rows;
    CellIndex reference_cells{};
    double q_reference = 0.0;
    /// Cell pressures along the lines (., 0, 50) and (0, ., 50) through the
    /// box centre for the reference and the finest test level of each model.
    std::vector<Profile> profiles;
};

ComparisonResult run_comparison(const Scenario& base, const ComparisonOptions& opts = {},
                                 const Progress& progress = {});

/// Cells crossed by the axis-parallel line through `through` along `axis`.
Profile line_profile(const std::string& label, const StructuredMesh& mesh, std::span<const double> p,
                     std::size_t axis, const Vec3& through);

}  // namespace dswell
