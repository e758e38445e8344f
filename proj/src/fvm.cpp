#include "dswell/fvm.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "dswell/parallel.hpp"
#include "dswell/peaceman.hpp"

namespace dswell {

namespace {

// Parameter along the well axis (from well.point) of the line point at s.
double axis_parameter(const WellLine& line, const WellDescription& well, double s)
{
    return dot(line.at(s) - well.point, well.direction);
}

void check_alignment(const WellLine& line, const WellDescription& well)
{
    const Vec3 d = normalized(line.direction);
    if (norm(cross(d, well.direction)) > 1e-9) throw std::invalid_argument("well line is not parallel to the well axis");
    if (norm(cross(line.origin - well.point, well.direction)) > 1e-9 * (1.0 + norm(line.origin - well.point)))
        throw std::invalid_argument("well line does not lie on the well axis");
}

WellPiece make_piece(const WellIntersection& in, const WellLine& line, const WellDescription& well, const FluxSystem& flux,
                     std::optional<double> exterior_p0)
{
    WellPiece piece;
    const double t0 = axis_parameter(line, well, in.s_begin);
    const double t1 = axis_parameter(line, well, in.s_end);
    piece.s_begin = std::min(t0, t1);
    piece.s_end = std::max(t0, t1);
    piece.length = in.length;
    piece.carrier = in.cell;
    if (flux.constrained[in.cell]) {
        piece.known_center_pressure = exterior_p0 ? *exterior_p0 : flux.fixed_values[in.cell];
    } else {
        piece.counts_for_error = true;
    }
    return piece;
}

}  // namespace

WellCoupling couple_distributed(const FluxOperator& op, const FluxSystem& flux, const WellDescription& well,
                                const KernelSpec& kernel, const WellLine& line, const DistributedWellOptions& opts)
{
    check_alignment(line, well);
    const StructuredMesh& mesh = op.mesh();
    const TransformChain chain = build_transform(op.permeability(), well);
    const double xi = xi_anisotropic(kernel, chain.a + chain.b);

    WellCoupling out;
    out.model = WellModel::distributed;
    out.well_pressure = well.pressure;
    out.zeta = chain.zeta;
    const double tau = 2.0 * std::numbers::pi * op.fluid().mobility_factor() * chain.k_iso * xi;

    for (const WellIntersection& in : intersect_well(mesh, line)) {
        WellPiece piece = make_piece(in, line, well, flux, opts.exterior_center_pressure);
        piece.coefficient = tau;
        out.pieces.push_back(std::move(piece));
    }

    if (opts.exterior_extension > 0.0) {
        if (!opts.exterior_center_pressure) throw std::invalid_argument("exterior well pieces need a centre pressure");
        const auto inside = clip_line(line, mesh.bounds());
        if (inside) {
            const auto add = [&](double s0, double s1) {
                if (!(s1 > s0)) return;
                WellPiece piece;
                const double t0 = axis_parameter(line, well, s0), t1 = axis_parameter(line, well, s1);
                piece.s_begin = std::min(t0, t1);
                piece.s_end = std::max(t0, t1);
                piece.length = s1 - s0;
                piece.known_center_pressure = opts.exterior_center_pressure;
                piece.coefficient = tau;
                out.pieces.push_back(std::move(piece));
            };
            add(std::max(line.s_min, inside->first - opts.exterior_extension), inside->first);
            add(inside->second, std::min(line.s_max, inside->second + opts.exterior_extension));
        }
    }

    double spacing = opts.sampling_spacing;
    for (WellPiece& piece : out.pieces) {
        const KernelField field(chain, kernel, piece.s_begin, piece.s_end, opts.jacobian);
        if (!(spacing > 0.0)) spacing = default_sampling_spacing(field, mesh);
        piece.weights = opts.parallel ? compute_cell_weights(field, mesh, spacing)
                                      : compute_cell_weights_serial(field, mesh, spacing);
    }
    return out;
}

WellCoupling couple_peaceman(const FluxOperator& op, const FluxSystem& flux, const WellDescription& well,
                             const WellLine& line)
{
    check_alignment(line, well);
    const StructuredMesh& mesh = op.mesh();
    const Vec3 kdiag = diagonal_permeability(op.permeability());
    WellCoupling out;
    out.model = WellModel::peaceman;
    out.well_pressure = well.pressure;
    out.zeta = build_transform(op.permeability(), well).zeta;
    for (const WellIntersection& in : intersect_well(mesh, line)) {
        WellPiece piece = make_piece(in, line, well, flux, std::nullopt);
        WellIndexInput wi{mesh.spacing(), kdiag, well.direction, in.length, well.radius};
        piece.coefficient = slanted_well_index(wi, op.fluid());
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

DiscreteSystem assemble_well(FluxSystem flux, const WellCoupling& well)
{
    DiscreteSystem sys;
    sys.rhs = std::move(flux.rhs);
    sys.constrained = std::move(flux.constrained);
    sys.fixed_values = std::move(flux.fixed_values);
    std::vector<Triplet> extra;
    const double pw = well.well_pressure;

    const auto couple = [&](std::size_t row, const WellPiece& piece, double t) {
        if (sys.constrained[row] || t == 0.0) return;
        sys.rhs[row] += t * pw;
        if (piece.known_center_pressure)
            sys.rhs[row] -= t * *piece.known_center_pressure;
        else
            extra.push_back({row, *piece.carrier, t});
    };

    for (const WellPiece& piece : well.pieces) {
        if (well.model == WellModel::distributed) {
            for (const auto& [cell, w] : piece.weights.cells) couple(cell, piece, piece.coefficient * w);
        } else if (piece.carrier) {
            couple(*piece.carrier, piece, piece.coefficient);
        }
    }
    sys.matrix = add_entries(flux.matrix, std::move(extra));
    return sys;
}

DiscreteSystem assemble_well_rate(FluxSystem flux, const WellCoupling& well, double rate)
{
    const std::size_t n = flux.matrix.rows;
    const std::size_t pw = n;
    DiscreteSystem sys;
    sys.rhs = std::move(flux.rhs);
    sys.constrained = std::move(flux.constrained);
    sys.fixed_values = std::move(flux.fixed_values);
    sys.rhs.push_back(0.0);
    sys.constrained.push_back(0);
    sys.fixed_values.push_back(0.0);
    sys.well_unknown = pw;

    std::vector<Triplet> extra;
    const auto couple = [&](std::size_t row, const WellPiece& piece, double t) {
        if (sys.constrained[row] || t == 0.0) return;
        extra.push_back({row, pw, -t});
        if (piece.known_center_pressure)
            sys.rhs[row] -= t * *piece.known_center_pressure;
        else
            extra.push_back({row, *piece.carrier, t});
    };
    double length = 0.0;
    for (const WellPiece& piece : well.pieces) {
        if (well.model == WellModel::distributed) {
            for (const auto& [cell, w] : piece.weights.cells) couple(cell, piece, piece.coefficient * w);
        } else if (piece.carrier) {
            couple(*piece.carrier, piece, piece.coefficient);
        }
        if (!piece.carrier) continue;
        // Closure row: sum_I c_I (p_w - p0_I) = q sum_I |I|.
        const double c = well.model == WellModel::distributed ? piece.coefficient * piece.length / well.zeta
                                                              : piece.coefficient;
        length += piece.length;
        extra.push_back({pw, pw, c});
        if (piece.known_center_pressure)
            sys.rhs[pw] += c * *piece.known_center_pressure;
        else
            extra.push_back({pw, *piece.carrier, -c});
    }
    if (length <= 0.0) throw std::invalid_argument("rate closure needs a well inside the mesh");
    sys.rhs[pw] += rate * length;

    CsrMatrix grown = flux.matrix;
    grown.rows = grown.cols = n + 1;
    grown.row_ptr.push_back(grown.row_ptr.back());
    sys.matrix = add_entries(grown, std::move(extra));
    return sys;
}

DiscreteSolution solve_pressure(const DiscreteSystem& system, const SolverOptions& opts)
{
    // Constrained columns are already eliminated, so the free block is solved
    // on its own. Keeping the identity rows would let their large right-hand
    // sides dominate the residual norm.
    const std::size_t n = system.matrix.rows;
    std::vector<std::int64_t> local(n, -1);
    std::vector<std::size_t> global;
    for (std::size_t i = 0; i < n; ++i)
        if (!system.constrained[i]) {
            local[i] = static_cast<std::int64_t>(global.size());
            global.push_back(i);
        }

    CsrMatrix a;
    a.rows = a.cols = global.size();
    a.row_ptr.assign(global.size() + 1, 0);
    std::vector<double> b(global.size());
    for (std::size_t r = 0; r < global.size(); ++r) {
        const std::size_t g = global[r];
        for (std::size_t k = system.matrix.row_ptr[g]; k < system.matrix.row_ptr[g + 1]; ++k) {
            const std::int64_t c = local[static_cast<std::size_t>(system.matrix.col_idx[k])];
            if (c < 0) throw std::logic_error("free row references a constrained column");
            a.col_idx.push_back(static_cast<std::int32_t>(c));
            a.values.push_back(system.matrix.values[k]);
        }
        a.row_ptr[r + 1] = a.values.size();
        b[r] = system.rhs[g];
    }

    DiscreteSolution out;
    out.pressure = system.fixed_values;
    out.pressure.resize(n, 0.0);
    if (global.empty()) {
        out.report.converged = true;
        out.report.method = "none";
        return out;
    }
    const std::vector<double> x = solve(a, b, opts, &out.report);
    for (std::size_t r = 0; r < global.size(); ++r) out.pressure[global[r]] = x[r];
    return out;
}

namespace {

double piece_p0(const WellPiece& piece, std::span<const double> p)
{
    return piece.known_center_pressure ? *piece.known_center_pressure : p[*piece.carrier];
}

}  // namespace

WellRates evaluate_well(const WellCoupling& well, const std::vector<char>& constrained, std::span<const double> p)
{
    WellRates out;
    for (const WellPiece& piece : well.pieces) {
        const double p0 = piece_p0(piece, p);
        const double drive = well.well_pressure - p0;
        out.p0.push_back(p0);
        if (well.model == WellModel::distributed) {
            const double q_hat = piece.coefficient * drive;
            out.piece_rates.push_back(piece.length * q_hat);
            for (const auto& [cell, w] : piece.weights.cells)
                if (!constrained[cell]) out.total += q_hat * w;
        } else {
            const double q = piece.coefficient * drive;
            out.piece_rates.push_back(q);
            if (piece.carrier && !constrained[*piece.carrier]) out.total += q;
        }
    }
    return out;
}

std::vector<double> cell_sources(const WellCoupling& well, const std::vector<char>& constrained, std::span<const double> p,
                                 std::size_t num_cells)
{
    std::vector<double> q(num_cells, 0.0);
    for (const WellPiece& piece : well.pieces) {
        const double drive = well.well_pressure - piece_p0(piece, p);
        if (well.model == WellModel::distributed) {
            for (const auto& [cell, w] : piece.weights.cells)
                if (!constrained[cell]) q[cell] += piece.coefficient * drive * w;
        } else if (piece.carrier && !constrained[*piece.carrier]) {
            q[*piece.carrier] += piece.coefficient * drive;
        }
    }
    return q;
}

ErrorNorms error_norms(const StructuredMesh& mesh, const std::vector<char>& constrained, std::span<const double> p,
                       const AnalyticSolution& exact, const WellCoupling& well)
{
    ErrorNorms e;
    const double sum = blocked_sum(mesh.num_cells(), [&](std::size_t id) {
        if (constrained[id]) return 0.0;
        const double d = exact.pressure(mesh.center(id)) - p[id];
        return mesh.cell_volume() * d * d;
    });
    std::size_t free_cells = 0;
    for (char c : constrained) free_cells += c ? 0 : 1;
    const double volume = mesh.cell_volume() * static_cast<double>(free_cells);
    e.pressure = volume > 0.0 ? std::sqrt(sum / volume) / exact.well().pressure : 0.0;

    const double q = exact.well().rate;
    const WellRates rates = evaluate_well(well, constrained, p);
    double sq = 0.0, length = 0.0;
    for (std::size_t i = 0; i < well.pieces.size(); ++i) {
        const WellPiece& piece = well.pieces[i];
        if (!piece.counts_for_error || piece.length <= 0.0) continue;
        const double d = q - rates.piece_rates[i] / (piece.length * well.zeta);
        sq += piece.length * d * d;
        length += piece.length;
    }
    e.source = length > 0.0 ? std::sqrt(sq / length) / q : 0.0;
    return e;
}

double total_source_error(double q, double q_ref)
{
    if (q_ref == 0.0) throw std::invalid_argument("reference source is zero");
    return std::abs(q - q_ref) / std::abs(q_ref);
}

}  // namespace dswell
