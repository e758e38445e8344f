#pragma once

// Uniform structured hexahedral meshes over a box, well-line traversal and
// boundary tagging.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dswell/linalg.hpp"

namespace dswell {

struct Box {
    Vec3 lower;
    Vec3 upper;

    bool contains(const Vec3& x) const
    {
        for (std::size_t d = 0; d < 3; ++d)
            if (x[d] < lower[d] || x[d] > upper[d]) return false;
        return true;
    }
    double volume() const { return (upper[0] - lower[0]) * (upper[1] - lower[1]) * (upper[2] - lower[2]); }
};

using CellIndex = std::array<int, 3>;

class StructuredMesh {
public:
    /// Throws std::invalid_argument on non-positive extent or cell count.
    static StructuredMesh build(const Box& bounds, const CellIndex& counts);

    const Box& bounds() const { return bounds_; }
    const CellIndex& counts() const { return counts_; }
    const Vec3& spacing() const { return spacing_; }

    std::size_t num_cells() const
    {
        return static_cast<std::size_t>(counts_[0]) * static_cast<std::size_t>(counts_[1])
               * static_cast<std::size_t>(counts_[2]);
    }
    std::size_t index(const CellIndex& c) const
    {
        return static_cast<std::size_t>(c[0])
               + static_cast<std::size_t>(counts_[0])
                     * (static_cast<std::size_t>(c[1]) + static_cast<std::size_t>(counts_[1]) * static_cast<std::size_t>(c[2]));
    }
    CellIndex cell_of(std::size_t id) const
    {
        const auto n0 = static_cast<std::size_t>(counts_[0]), n1 = static_cast<std::size_t>(counts_[1]);
        return {static_cast<int>(id % n0), static_cast<int>((id / n0) % n1), static_cast<int>(id / (n0 * n1))};
    }
    bool valid(const CellIndex& c) const
    {
        for (std::size_t d = 0; d < 3; ++d)
            if (c[d] < 0 || c[d] >= counts_[d]) return false;
        return true;
    }

    Vec3 center(std::size_t id) const;
    Vec3 center(const CellIndex& c) const;
    Box cell_box(std::size_t id) const;
    double cell_volume() const { return spacing_[0] * spacing_[1] * spacing_[2]; }
    /// Area of a face normal to the given axis.
    double face_area(std::size_t axis) const;
    /// Largest vertex-to-vertex distance of a cell.
    double h_max() const { return norm(spacing_); }
    double h_min() const { return std::min({spacing_[0], spacing_[1], spacing_[2]}); }

    /// Cell containing x (points on shared faces go to the upper cell, the
    /// upper domain boundary belongs to the last cell).
    std::optional<std::size_t> locate(const Vec3& x) const;

    /// Uniform refinement by an integer factor per direction.
    StructuredMesh refined(int factor = 2) const;

private:
    Box bounds_;
    CellIndex counts_{};
    Vec3 spacing_;
};

struct WellIntersection {
    std::size_t cell = 0;
    double s_begin = 0.0;  ///< line parameter (arc length) at entry
    double s_end = 0.0;
    double length = 0.0;
    Vec3 midpoint;
};

/// Straight line x(s) = origin + s * direction, direction of unit length,
/// restricted to s in [s_min, s_max] (may be infinite).
struct WellLine {
    Vec3 origin;
    Vec3 direction;
    double s_min = -std::numeric_limits<double>::infinity();
    double s_max = std::numeric_limits<double>::infinity();

    Vec3 at(double s) const { return origin + s * direction; }
    static WellLine segment(const Vec3& from, const Vec3& to);
};

/// Parameter interval of the line inside the box (slab clipping); empty if
/// the line misses the box.
std::optional<std::pair<double, double>> clip_line(const WellLine& line, const Box& box);

/// Ordered cell intersections of the line with the mesh, clipped to `clip`
/// (defaults to the mesh bounds). Pieces shorter than 1e-12 h are dropped.
std::vector<WellIntersection> intersect_well(const StructuredMesh& mesh, const WellLine& line,
                                             std::optional<Box> clip = std::nullopt);

enum class BoundaryKind { dirichlet, neumann };

/// Box sides in the order x-, x+, y-, y+, z-, z+.
enum class Side : int { x_lower = 0, x_upper, y_lower, y_upper, z_lower, z_upper };

using ScalarField = std::function<double(const Vec3&)>;

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::neumann;
    /// Dirichlet: pressure [Pa]. Neumann: outward mass flux density [kg/s/m^2].
    /// An empty function means zero.
    ScalarField value;

    static BoundaryCondition dirichlet(ScalarField p) { return {BoundaryKind::dirichlet, std::move(p)}; }
    static BoundaryCondition no_flow() { return {BoundaryKind::neumann, {}}; }
    double evaluate(const Vec3& x) const { return value ? value(x) : 0.0; }
};

struct BoundarySpec {
    std::array<BoundaryCondition, 6> sides;
    /// Cells whose centroid lies outside this box are constrained to
    /// `constrained_value` (strong Dirichlet rows). Empty means all free.
    std::optional<Box> free_region;
    ScalarField constrained_value;

    static BoundarySpec all_dirichlet(const ScalarField& p);
    const BoundaryCondition& side(Side s) const { return sides[static_cast<std::size_t>(s)]; }
    bool is_constrained(const Vec3& cell_center) const
    {
        return free_region.has_value() && !free_region->contains(cell_center);
    }
};

}  // namespace dswell
