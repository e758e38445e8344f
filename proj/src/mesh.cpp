#include "dswell/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dswell {

StructuredMesh StructuredMesh::build(const Box& bounds, const CellIndex& counts)
{
    StructuredMesh m;
    for (std::size_t d = 0; d < 3; ++d) {
        if (counts[d] <= 0) throw std::invalid_argument("cell counts must be positive");
        if (!(bounds.upper[d] > bounds.lower[d])) throw std::invalid_argument("mesh box must have positive extent");
        m.spacing_[d] = (bounds.upper[d] - bounds.lower[d]) / counts[d];
    }
    m.bounds_ = bounds;
    m.counts_ = counts;
    return m;
}

Vec3 StructuredMesh::center(const CellIndex& c) const
{
    Vec3 x;
    for (std::size_t d = 0; d < 3; ++d) x[d] = bounds_.lower[d] + (c[d] + 0.5) * spacing_[d];
    return x;
}

Vec3 StructuredMesh::center(std::size_t id) const { return center(cell_of(id)); }

Box StructuredMesh::cell_box(std::size_t id) const
{
    const CellIndex c = cell_of(id);
    Box b;
    for (std::size_t d = 0; d < 3; ++d) {
        b.lower[d] = bounds_.lower[d] + c[d] * spacing_[d];
        b.upper[d] = b.lower[d] + spacing_[d];
    }
    return b;
}

double StructuredMesh::face_area(std::size_t axis) const
{
    return spacing_[(axis + 1) % 3] * spacing_[(axis + 2) % 3];
}

std::optional<std::size_t> StructuredMesh::locate(const Vec3& x) const
{
    CellIndex c{};
    for (std::size_t d = 0; d < 3; ++d) {
        if (!(x[d] >= bounds_.lower[d] && x[d] <= bounds_.upper[d])) return std::nullopt;
        int i = static_cast<int>(std::floor((x[d] - bounds_.lower[d]) / spacing_[d]));
        c[d] = std::clamp(i, 0, counts_[d] - 1);
    }
    return index(c);
}

StructuredMesh StructuredMesh::refined(int factor) const
{
    return build(bounds_, {counts_[0] * factor, counts_[1] * factor, counts_[2] * factor});
}

WellLine WellLine::segment(const Vec3& from, const Vec3& to)
{
    const Vec3 d = to - from;
    const double len = norm(d);
    if (!(len > 0.0)) throw std::invalid_argument("degenerate well segment");
    return {from, d / len, 0.0, len};
}

std::optional<std::pair<double, double>> clip_line(const WellLine& line, const Box& box)
{
    double lo = line.s_min, hi = line.s_max;
    for (std::size_t d = 0; d < 3; ++d) {
        const double o = line.origin[d], v = line.direction[d];
        if (std::abs(v) < 1e-300) {
            if (o < box.lower[d] || o > box.upper[d]) return std::nullopt;
            continue;
        }
        double t0 = (box.lower[d] - o) / v, t1 = (box.upper[d] - o) / v;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
    }
    if (!(hi > lo)) return std::nullopt;
    return std::make_pair(lo, hi);
}

std::vector<WellIntersection> intersect_well(const StructuredMesh& mesh, const WellLine& line, std::optional<Box> clip)
{
    std::vector<WellIntersection> out;
    Box region = mesh.bounds();
    if (clip) {
        for (std::size_t d = 0; d < 3; ++d) {
            region.lower[d] = std::max(region.lower[d], clip->lower[d]);
            region.upper[d] = std::min(region.upper[d], clip->upper[d]);
        }
    }
    const auto range = clip_line(line, region);
    if (!range) return out;
    const auto [s0, s1] = *range;

    // Crossing parameters of all grid planes inside (s0, s1).
    std::vector<double> breaks{s0, s1};
    for (std::size_t d = 0; d < 3; ++d) {
        const double v = line.direction[d];
        if (std::abs(v) < 1e-300) continue;
        const double h = mesh.spacing()[d];
        for (int i = 0; i <= mesh.counts()[d]; ++i) {
            const double plane = mesh.bounds().lower[d] + i * h;
            const double t = (plane - line.origin[d]) / v;
            if (t > s0 && t < s1) breaks.push_back(t);
        }
    }
    std::sort(breaks.begin(), breaks.end());

    const double min_len = 1e-12 * mesh.h_max();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (b - a < min_len) continue;
        const Vec3 mid = line.at(0.5 * (a + b));
        const auto cell = mesh.locate(mid);
        if (!cell) continue;
        if (!out.empty() && out.back().cell == *cell && std::abs(out.back().s_end - a) < min_len) {
            auto& last = out.back();
            last.s_end = b;
            last.length = b - last.s_begin;
            last.midpoint = line.at(0.5 * (last.s_begin + b));
            continue;
        }
        out.push_back({*cell, a, b, b - a, mid});
    }
    return out;
}

BoundarySpec BoundarySpec::all_dirichlet(const ScalarField& p)
{
    BoundarySpec spec;
    for (auto& s : spec.sides) s = BoundaryCondition::dirichlet(p);
    return spec;
}

}  // namespace dswell
