#include "dswell/mpfa.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

namespace dswell {

namespace {

constexpr std::array<std::array<int, 2>, 3> other_axes{{{1, 2}, {0, 2}, {0, 1}}};

int bit(int c, int d) { return (c >> d) & 1; }
double sign(int c, int d) { return bit(c, d) ? -1.0 : 1.0; }
int subface(int c, int d) { return 4 * d + bit(c, other_axes[d][0]) + 2 * bit(c, other_axes[d][1]); }

// The two cells of subface s: (negative side, positive side).
std::array<int, 2> subface_cells(int s)
{
    const int d = s / 4;
    const int r = s % 4;
    const int c0 = ((r & 1) << other_axes[d][0]) | ((r >> 1) << other_axes[d][1]);
    return {c0, c0 | (1 << d)};
}

enum Kind : std::uint8_t { inactive = 0, interior = 1, dirichlet = 2, neumann = 3 };

Side side_of(int axis, bool upper) { return static_cast<Side>(2 * axis + (upper ? 1 : 0)); }

}  // namespace

std::uint64_t RegionSignature::key() const
{
    std::uint64_t k = cell_mask;
    for (std::size_t s = 0; s < 12; ++s) k |= static_cast<std::uint64_t>(kinds[s]) << (8 + 2 * s);
    return k;
}

LocalTransmissibility mpfa_local(const Mat3& k, const Vec3& h, double mobility, const RegionSignature& sig)
{
    const auto exists = [&](int c) { return (sig.cell_mask >> c) & 1; };
    const auto omega = [&](int c, int d, int e) {
        const double area = h[static_cast<std::size_t>(other_axes[d][0])] * h[static_cast<std::size_t>(other_axes[d][1])] / 4.0;
        return mobility * area * sign(c, d) * sign(c, e) * k(static_cast<std::size_t>(d), static_cast<std::size_t>(e))
               * 2.0 / h[static_cast<std::size_t>(e)];
    };

    std::array<int, 12> idx{};
    int nu = 0;
    for (int s = 0; s < 12; ++s) idx[s] = (sig.kinds[s] == interior || sig.kinds[s] == neumann) ? nu++ : -1;

    LocalTransmissibility out;
    Eigen::MatrixXd up = Eigen::MatrixXd::Zero(nu, 8);
    Eigen::MatrixXd ub = Eigen::MatrixXd::Zero(nu, 12);
    if (nu > 0) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nu, nu);
        for (int s = 0; s < 12; ++s) {
            if (idx[s] < 0) continue;
            const int r = idx[s];
            const int d = s / 4;
            for (int c : subface_cells(s)) {
                if (!exists(c)) continue;
                for (int e = 0; e < 3; ++e) {
                    const double w = omega(c, d, e);
                    up(r, c) += w;
                    const int se = subface(c, e);
                    if (idx[se] >= 0)
                        a(r, idx[se]) += w;
                    else
                        ub(r, se) -= w;
                }
            }
            if (sig.kinds[s] == neumann) ub(r, s) -= 1.0;
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        out.rcond = lu.rcond();
        up = lu.solve(up);
        ub = lu.solve(ub);
    }

    for (int c = 0; c < 8; ++c) {
        if (!exists(c)) continue;
        for (int d = 0; d < 3; ++d) {
            auto& tc = out.cell[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
            auto& tb = out.boundary[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
            for (int e = 0; e < 3; ++e) {
                const double w = omega(c, d, e);
                tc[static_cast<std::size_t>(c)] += w;
                const int se = subface(c, e);
                if (idx[se] >= 0) {
                    for (int l = 0; l < 8; ++l) tc[static_cast<std::size_t>(l)] -= w * up(idx[se], l);
                    for (int b = 0; b < 12; ++b) tb[static_cast<std::size_t>(b)] -= w * ub(idx[se], b);
                } else {
                    tb[static_cast<std::size_t>(se)] -= w;
                }
            }
        }
    }
    return out;
}

FluxOperator::FluxOperator(StructuredMesh mesh, PermeabilityTensor k, FluidProperties fluid, BoundarySpec bc,
                           Scheme scheme)
    : mesh_(std::move(mesh)), k_(std::move(k)), fluid_(fluid), bc_(std::move(bc)), scheme_(scheme)
{
    fluid_.validate();
    if (scheme_ == Scheme::tpfa && !k_.is_diagonal(1e-12))
        throw std::invalid_argument("TPFA is inconsistent for a full permeability tensor on this grid; use MPFA-O");

    const std::size_t n = mesh_.num_cells();
    constrained_.assign(n, 0);
    fixed_.assign(n, 0.0);
    if (bc_.free_region) {
        if (!bc_.constrained_value) throw std::invalid_argument("constrained region needs a value field");
        const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
        for (std::ptrdiff_t i = 0; i < ni; ++i) {
            const auto id = static_cast<std::size_t>(i);
            const Vec3 x = mesh_.center(id);
            if (bc_.is_constrained(x)) {
                constrained_[id] = 1;
                fixed_[id] = bc_.constrained_value(x);
            }
        }
    }

    // Boundary data per boundary face, evaluated at face centres.
    const CellIndex& nc = mesh_.counts();
    for (int axis = 0; axis < 3; ++axis) {
        const int a1 = other_axes[static_cast<std::size_t>(axis)][0], a2 = other_axes[static_cast<std::size_t>(axis)][1];
        const std::size_t faces = static_cast<std::size_t>(nc[static_cast<std::size_t>(a1)]) * static_cast<std::size_t>(nc[static_cast<std::size_t>(a2)]);
        for (bool upper : {false, true}) {
            const Side side = side_of(axis, upper);
            const BoundaryCondition& cond = bc_.side(side);
            auto& values = boundary_values_[static_cast<std::size_t>(side)];
            values.assign(faces, 0.0);
            const auto nf = static_cast<std::ptrdiff_t>(faces);
#pragma omp parallel for schedule(dynamic, 64)
            for (std::ptrdiff_t f = 0; f < nf; ++f) {
                CellIndex c{};
                c[static_cast<std::size_t>(axis)] = upper ? nc[static_cast<std::size_t>(axis)] - 1 : 0;
                c[static_cast<std::size_t>(a1)] = static_cast<int>(f % nc[static_cast<std::size_t>(a1)]);
                c[static_cast<std::size_t>(a2)] = static_cast<int>(f / nc[static_cast<std::size_t>(a1)]);
                Vec3 x = mesh_.center(c);
                x[static_cast<std::size_t>(axis)] = upper ? mesh_.bounds().upper[static_cast<std::size_t>(axis)]
                                                          : mesh_.bounds().lower[static_cast<std::size_t>(axis)];
                values[static_cast<std::size_t>(f)] = cond.evaluate(x);
            }
        }
    }

    if (scheme_ == Scheme::mpfa_o) {
        const double mob = fluid_.mobility_factor();
        for (int vk = 0; vk <= nc[2]; ++vk)
            for (int vj = 0; vj <= nc[1]; ++vj)
                for (int vi = 0; vi <= nc[0]; ++vi) {
                    const RegionSignature sig = signature({vi, vj, vk});
                    auto& slot = cache_[sig.key()];
                    if (!slot)
                        slot = std::make_unique<LocalTransmissibility>(mpfa_local(k_.entries(), mesh_.spacing(), mob, sig));
                }
    }
}

double FluxOperator::worst_local_rcond() const
{
    double w = 1.0;
    for (const auto& [key, t] : cache_) w = std::min(w, t->rcond);
    return w;
}

std::size_t FluxOperator::boundary_slot(Side side, const CellIndex& cell) const
{
    const int axis = static_cast<int>(side) / 2;
    const auto& ax = other_axes[static_cast<std::size_t>(axis)];
    return static_cast<std::size_t>(cell[static_cast<std::size_t>(ax[0])])
           + static_cast<std::size_t>(mesh_.counts()[static_cast<std::size_t>(ax[0])])
                 * static_cast<std::size_t>(cell[static_cast<std::size_t>(ax[1])]);
}

RegionSignature FluxOperator::signature(const CellIndex& v) const
{
    RegionSignature sig;
    for (int c = 0; c < 8; ++c) {
        const CellIndex cell{v[0] - 1 + bit(c, 0), v[1] - 1 + bit(c, 1), v[2] - 1 + bit(c, 2)};
        if (mesh_.valid(cell)) sig.cell_mask = static_cast<std::uint8_t>(sig.cell_mask | (1u << c));
    }
    for (int s = 0; s < 12; ++s) {
        const auto [c0, c1] = subface_cells(s);
        const bool e0 = (sig.cell_mask >> c0) & 1, e1 = (sig.cell_mask >> c1) & 1;
        if (e0 && e1) {
            sig.kinds[static_cast<std::size_t>(s)] = interior;
        } else if (e0 || e1) {
            const BoundaryCondition& cond = bc_.side(side_of(s / 4, e0));
            sig.kinds[static_cast<std::size_t>(s)] = cond.kind == BoundaryKind::dirichlet ? dirichlet : neumann;
        }
    }
    return sig;
}

FluxOperator::Region FluxOperator::region(const CellIndex& v) const
{
    const RegionSignature sig = signature(v);
    Region reg;
    reg.trans = cache_.at(sig.key()).get();
    std::array<CellIndex, 8> cells{};
    for (int c = 0; c < 8; ++c) {
        cells[static_cast<std::size_t>(c)] = {v[0] - 1 + bit(c, 0), v[1] - 1 + bit(c, 1), v[2] - 1 + bit(c, 2)};
        reg.cells[static_cast<std::size_t>(c)] = ((sig.cell_mask >> c) & 1)
                                                     ? static_cast<std::ptrdiff_t>(mesh_.index(cells[static_cast<std::size_t>(c)]))
                                                     : -1;
    }
    for (int s = 0; s < 12; ++s) {
        const auto kind = sig.kinds[static_cast<std::size_t>(s)];
        if (kind != dirichlet && kind != neumann) continue;
        const auto [c0, c1] = subface_cells(s);
        const bool upper = (sig.cell_mask >> c0) & 1;
        const int owner = upper ? c0 : c1;
        const int axis = s / 4;
        const Side side = side_of(axis, upper);
        const double value = boundary_values_[static_cast<std::size_t>(side)][boundary_slot(side, cells[static_cast<std::size_t>(owner)])];
        reg.beta[static_cast<std::size_t>(s)] =
            kind == dirichlet ? value : value * mesh_.face_area(static_cast<std::size_t>(axis)) / 4.0;
    }
    return reg;
}

void FluxOperator::row_mpfa(std::size_t row, RowBuffer& coef, double& rhs) const
{
    const CellIndex cell = mesh_.cell_of(row);
    for (int corner = 0; corner < 8; ++corner) {
        const CellIndex v{cell[0] + bit(corner, 0), cell[1] + bit(corner, 1), cell[2] + bit(corner, 2)};
        const Region reg = region(v);
        const int self = 7 - corner;
        for (int d = 0; d < 3; ++d) {
            const auto& tc = reg.trans->cell[static_cast<std::size_t>(self)][static_cast<std::size_t>(d)];
            const auto& tb = reg.trans->boundary[static_cast<std::size_t>(self)][static_cast<std::size_t>(d)];
            for (int l = 0; l < 8; ++l) {
                const double t = tc[static_cast<std::size_t>(l)];
                if (t == 0.0 || reg.cells[static_cast<std::size_t>(l)] < 0) continue;
                const auto other = static_cast<std::size_t>(reg.cells[static_cast<std::size_t>(l)]);
                if (constrained_[other]) {
                    rhs -= t * fixed_[other];
                    continue;
                }
                const int slot = (bit(l, 0) - bit(self, 0) + 1) + 3 * (bit(l, 1) - bit(self, 1) + 1) + 9 * (bit(l, 2) - bit(self, 2) + 1);
                coef[static_cast<std::size_t>(slot)] += t;
            }
            for (int s = 0; s < 12; ++s) rhs -= tb[static_cast<std::size_t>(s)] * reg.beta[static_cast<std::size_t>(s)];
        }
    }
}

void FluxOperator::row_tpfa(std::size_t row, RowBuffer& coef, double& rhs) const
{
    const CellIndex cell = mesh_.cell_of(row);
    const double mob = fluid_.mobility_factor();
    for (int d = 0; d < 3; ++d) {
        const auto ud = static_cast<std::size_t>(d);
        const double area = mesh_.face_area(ud);
        const double t = mob * area * k_.entries()(ud, ud) / mesh_.spacing()[ud];
        for (int dir : {-1, 1}) {
            CellIndex nb = cell;
            nb[ud] += dir;
            if (mesh_.valid(nb)) {
                coef[13] += t;
                const std::size_t other = mesh_.index(nb);
                if (constrained_[other]) {
                    rhs += t * fixed_[other];
                } else {
                    const int slot = 13 + dir * (d == 0 ? 1 : d == 1 ? 3 : 9);
                    coef[static_cast<std::size_t>(slot)] -= t;
                }
                continue;
            }
            const Side side = side_of(d, dir > 0);
            const double value = boundary_values_[static_cast<std::size_t>(side)][boundary_slot(side, cell)];
            if (bc_.side(side).kind == BoundaryKind::dirichlet) {
                coef[13] += 2.0 * t;
                rhs += 2.0 * t * value;
            } else {
                rhs -= value * area;
            }
        }
    }
}

FluxSystem FluxOperator::assemble_impl(bool parallel) const
{
    const std::size_t n = mesh_.num_cells();
    std::vector<std::int32_t> cols(27 * n);
    std::vector<double> vals(27 * n);
    std::vector<std::size_t> count(n);
    FluxSystem sys;
    sys.rhs.assign(n, 0.0);
    sys.constrained = constrained_;
    sys.fixed_values = fixed_;
    const CellIndex& nc = mesh_.counts();
    const std::array<std::ptrdiff_t, 3> stride{1, nc[0], static_cast<std::ptrdiff_t>(nc[0]) * nc[1]};

    const auto build = [&](std::size_t row) {
        if (constrained_[row]) {
            cols[27 * row] = static_cast<std::int32_t>(row);
            vals[27 * row] = 1.0;
            count[row] = 1;
            sys.rhs[row] = fixed_[row];
            return;
        }
        RowBuffer coef{};
        double rhs = 0.0;
        if (scheme_ == Scheme::mpfa_o)
            row_mpfa(row, coef, rhs);
        else
            row_tpfa(row, coef, rhs);
        std::size_t m = 0;
        for (int slot = 0; slot < 27; ++slot) {
            if (coef[static_cast<std::size_t>(slot)] == 0.0) continue;
            const std::ptrdiff_t off = (slot % 3 - 1) * stride[0] + ((slot / 3) % 3 - 1) * stride[1] + (slot / 9 - 1) * stride[2];
            cols[27 * row + m] = static_cast<std::int32_t>(static_cast<std::ptrdiff_t>(row) + off);
            vals[27 * row + m] = coef[static_cast<std::size_t>(slot)];
            ++m;
        }
        count[row] = m;
        sys.rhs[row] = rhs;
    };

    const auto ni = static_cast<std::ptrdiff_t>(n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < ni; ++i) build(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) build(i);
    }

    CsrMatrix& a = sys.matrix;
    a.rows = a.cols = n;
    a.row_ptr.assign(n + 1, 0);
    for (std::size_t r = 0; r < n; ++r) a.row_ptr[r + 1] = a.row_ptr[r] + count[r];
    a.col_idx.resize(a.row_ptr[n]);
    a.values.resize(a.row_ptr[n]);
    for (std::size_t r = 0; r < n; ++r) {
        std::copy_n(cols.begin() + static_cast<std::ptrdiff_t>(27 * r), count[r], a.col_idx.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[r]));
        std::copy_n(vals.begin() + static_cast<std::ptrdiff_t>(27 * r), count[r], a.values.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[r]));
    }
    return sys;
}

FluxSystem FluxOperator::assemble() const { return assemble_impl(true); }
FluxSystem FluxOperator::assemble_serial() const { return assemble_impl(false); }

std::vector<std::array<double, 6>> FluxOperator::face_fluxes(std::span<const double> p) const
{
    const std::size_t n = mesh_.num_cells();
    if (p.size() != n) throw std::invalid_argument("pressure vector does not match the mesh");
    std::vector<std::array<double, 6>> flux(n, std::array<double, 6>{});
    const CellIndex& nc = mesh_.counts();

    if (scheme_ == Scheme::tpfa) {
        const double mob = fluid_.mobility_factor();
        for (std::size_t id = 0; id < n; ++id) {
            const CellIndex cell = mesh_.cell_of(id);
            for (int d = 0; d < 3; ++d) {
                const auto ud = static_cast<std::size_t>(d);
                const double area = mesh_.face_area(ud);
                const double t = mob * area * k_.entries()(ud, ud) / mesh_.spacing()[ud];
                for (int dir : {-1, 1}) {
                    CellIndex nb = cell;
                    nb[ud] += dir;
                    const Side side = side_of(d, dir > 0);
                    double f;
                    if (mesh_.valid(nb)) {
                        f = t * (p[id] - p[mesh_.index(nb)]);
                    } else {
                        const double value = boundary_values_[static_cast<std::size_t>(side)][boundary_slot(side, cell)];
                        f = bc_.side(side).kind == BoundaryKind::dirichlet ? 2.0 * t * (p[id] - value) : value * area;
                    }
                    flux[id][static_cast<std::size_t>(side)] = f;
                }
            }
        }
        return flux;
    }

    for (int vk = 0; vk <= nc[2]; ++vk)
        for (int vj = 0; vj <= nc[1]; ++vj)
            for (int vi = 0; vi <= nc[0]; ++vi) {
                const Region reg = region({vi, vj, vk});
                for (int c = 0; c < 8; ++c) {
                    if (reg.cells[static_cast<std::size_t>(c)] < 0) continue;
                    const auto id = static_cast<std::size_t>(reg.cells[static_cast<std::size_t>(c)]);
                    for (int d = 0; d < 3; ++d) {
                        const auto& tc = reg.trans->cell[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
                        const auto& tb = reg.trans->boundary[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
                        double f = 0.0;
                        for (int l = 0; l < 8; ++l)
                            if (reg.cells[static_cast<std::size_t>(l)] >= 0)
                                f += tc[static_cast<std::size_t>(l)] * p[static_cast<std::size_t>(reg.cells[static_cast<std::size_t>(l)])];
                        for (int s = 0; s < 12; ++s) f += tb[static_cast<std::size_t>(s)] * reg.beta[static_cast<std::size_t>(s)];
                        flux[id][static_cast<std::size_t>(side_of(d, bit(c, d) == 0))] += f;
                    }
                }
            }
    return flux;
}

double FluxOperator::boundary_outflow(std::span<const double> p) const
{
    const auto flux = face_fluxes(p);
    double total = 0.0;
    for (std::size_t id = 0; id < flux.size(); ++id) {
        const CellIndex c = mesh_.cell_of(id);
        for (int d = 0; d < 3; ++d) {
            if (c[static_cast<std::size_t>(d)] == 0) total += flux[id][static_cast<std::size_t>(side_of(d, false))];
            if (c[static_cast<std::size_t>(d)] == mesh_.counts()[static_cast<std::size_t>(d)] - 1)
                total += flux[id][static_cast<std::size_t>(side_of(d, true))];
        }
    }
    return total;
}

}  // namespace dswell
