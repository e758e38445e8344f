#pragma once

// Well coupling on top of the flux discretization, the global solve, and the
// discrete error measures.
//
// Distributed-source coupling: every well piece I (one per intersected cell)
// has the specific rate q_hat_I = tau (p_w - p0_I) with tau = 2 pi (rho k_I /
// mu) Xi, where p0_I is the pressure of the carrier cell containing I. The
// source of a support cell K is sum_I q_hat_I W_KI with the kernel weights W.
// This couples K to carrier cells that are not its neighbours.

#include <optional>
#include <span>
#include <vector>

#include "dswell/kernels.hpp"
#include "dswell/mpfa.hpp"
#include "dswell/solver.hpp"

namespace dswell {

enum class WellModel { distributed, peaceman };

struct WellPiece {
    double s_begin = 0.0;  ///< line parameters measured from the well point
    double s_end = 0.0;
    double length = 0.0;
    std::optional<std::size_t> carrier;            ///< cell holding p0; empty outside the mesh
    std::optional<double> known_center_pressure;   ///< p0 when the carrier is not a free unknown
    bool counts_for_error = false;                 ///< carrier is a free cell
    double coefficient = 0.0;                      ///< tau (distributed) or well index (Peaceman)
    SegmentWeights weights;                        ///< distributed model only
};

struct WellCoupling {
    WellModel model = WellModel::distributed;
    double well_pressure = 0.0;
    double zeta = 1.0;
    std::vector<WellPiece> pieces;
};

struct DistributedWellOptions {
    JacobianMode jacobian = JacobianMode::exact;
    /// Lattice spacing [m]; 0 selects default_sampling_spacing.
    double sampling_spacing = 0.0;
    /// Continue the well this far beyond the mesh on both ends so that kernel
    /// mass of an infinite well reaches the mesh. Requires exterior_center_pressure.
    double exterior_extension = 0.0;
    /// p0 for pieces outside the mesh or in constrained cells (the analytic
    /// centre pressure for infinite-well setups). If empty, constrained
    /// carriers use their fixed cell value.
    std::optional<double> exterior_center_pressure;
    bool parallel = true;
};

/// Distributed-source coupling of the well along `line` (a segment or the
/// infinite axis, which is clipped to the mesh).
WellCoupling couple_distributed(const FluxOperator& op, const FluxSystem& flux, const WellDescription& well,
                                const KernelSpec& kernel, const WellLine& line,
                                const DistributedWellOptions& opts = {});

/// Peaceman-type coupling with the slanted-well index in each carrier cell.
WellCoupling couple_peaceman(const FluxOperator& op, const FluxSystem& flux, const WellDescription& well,
                             const WellLine& line);

struct DiscreteSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<char> constrained;
    std::vector<double> fixed_values;
    /// Index of the well-pressure unknown under a rate closure (one past the
    /// last cell); empty when p_w is prescribed.
    std::optional<std::size_t> well_unknown;
};

/// Adds the well terms to the flux system with p_w prescribed.
DiscreteSystem assemble_well(FluxSystem flux, const WellCoupling& well);

/// Rate closure: p_w becomes an extra unknown fixed by
/// sum_I Q_I / zeta = q sum_I |I| (distributed) or sum_I Q_I = q sum_I |I|
/// (Peaceman) over the pieces inside the mesh.
DiscreteSystem assemble_well_rate(FluxSystem flux, const WellCoupling& well, double rate);

struct DiscreteSolution {
    std::vector<double> pressure;
    SolverReport report;
};

/// Solves the free unknowns. With a rate closure the well pressure is the
/// last entry of the returned vector.
DiscreteSolution solve_pressure(const DiscreteSystem& system, const SolverOptions& opts = {});

struct WellRates {
    std::vector<double> piece_rates;  ///< Q_I = |I| q_hat_I (distributed) or WI (p_w - p0)
    std::vector<double> p0;           ///< centre pressure used for each piece
    double total = 0.0;               ///< Q = sum of Q_K over free cells [kg/s]
};

/// Sources implied by a solution. Q_K of constrained cells is excluded from
/// the total.
WellRates evaluate_well(const WellCoupling& well, const std::vector<char>& constrained, std::span<const double> p);

/// Per-cell source Q_K (zero in constrained cells).
std::vector<double> cell_sources(const WellCoupling& well, const std::vector<char>& constrained, std::span<const double> p,
                                 std::size_t num_cells);

struct ErrorNorms {
    double pressure = 0.0;  ///< E_p
    double source = 0.0;    ///< E_q
};

/// E_p over free cells against the analytic pressure at centroids, E_q over
/// pieces with a free carrier.
ErrorNorms error_norms(const StructuredMesh& mesh, const std::vector<char>& constrained, std::span<const double> p,
                       const AnalyticSolution& exact, const WellCoupling& well);

/// |Q - Q_ref| / |Q_ref|; throws if Q_ref = 0.
double total_source_error(double q, double q_ref);

}  // namespace dswell
