#pragma once

// Cell-centred flux discretizations on uniform structured hexahedral meshes.
//
// MPFA-O: one interaction region per mesh vertex with up to 8 cells and 12
// half-face pieces ("subfaces"). Continuity points sit at the full-face
// centres, so each cell reconstructs a constant gradient from its own pressure
// and the three subface pressures around the vertex. Subface pressures are
// eliminated locally by flux continuity.
//
// Local numbering inside a region: cell c = b0 + 2 b1 + 4 b2, where b_d = 1
// means the cell lies on the positive side of the vertex in direction d.
// Subface s = 4 d + b_d1 + 2 b_d2 with (d1, d2) the two other directions in
// increasing order.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "dswell/analytic.hpp"
#include "dswell/mesh.hpp"
#include "dswell/sparse.hpp"

namespace dswell {

enum class Scheme { tpfa, mpfa_o };

/// Outward fluxes of one interaction region as affine functions of the
/// region's cell pressures and boundary data:
///   F[c][d] = sum_l cell[c][d][l] p_l + sum_s boundary[c][d][s] beta_s
/// beta_s is the Dirichlet pressure on a Dirichlet subface and the total
/// outward mass flux through a Neumann subface.
struct LocalTransmissibility {
    std::array<std::array<std::array<double, 8>, 3>, 8> cell{};
    std::array<std::array<std::array<double, 12>, 3>, 8> boundary{};
    double rcond = 1.0;  ///< reciprocal condition estimate of the local system
};

/// Geometry and boundary kinds seen from one vertex. kinds[s]: 0 inactive,
/// 1 interior, 2 Dirichlet, 3 Neumann.
struct RegionSignature {
    std::uint8_t cell_mask = 0;
    std::array<std::uint8_t, 12> kinds{};

    std::uint64_t key() const;
};

/// Local MPFA-O elimination for a homogeneous tensor and uniform spacing.
LocalTransmissibility mpfa_local(const Mat3& k, const Vec3& spacing, double mobility, const RegionSignature& sig);

struct FluxSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<char> constrained;      ///< per cell
    std::vector<double> fixed_values;   ///< constrained cell values (0 elsewhere)
};

class FluxOperator {
public:
    /// Throws for TPFA with a non-diagonal tensor.
    FluxOperator(StructuredMesh mesh, PermeabilityTensor k, FluidProperties fluid, BoundarySpec bc,
                 Scheme scheme = Scheme::mpfa_o);

    const StructuredMesh& mesh() const { return mesh_; }
    Scheme scheme() const { return scheme_; }
    const BoundarySpec& boundary() const { return bc_; }
    const PermeabilityTensor& permeability() const { return k_; }
    const FluidProperties& fluid() const { return fluid_; }

    /// Sum of outward fluxes per cell = rhs; constrained cells get identity rows
    /// and their columns are moved to the right-hand side. Parallel over rows.
    FluxSystem assemble() const;
    FluxSystem assemble_serial() const;

    /// Outward mass flux through each of the six faces of every cell, in Side
    /// order, for given cell pressures.
    std::vector<std::array<double, 6>> face_fluxes(std::span<const double> p) const;

    /// Net outward flux through the domain boundary.
    double boundary_outflow(std::span<const double> p) const;

    /// Number of distinct interaction-region types and the worst local rcond.
    std::size_t num_region_types() const { return cache_.size(); }
    double worst_local_rcond() const;

private:
    struct Region {
        const LocalTransmissibility* trans = nullptr;
        std::array<std::ptrdiff_t, 8> cells{};
        std::array<double, 12> beta{};
    };

    RegionSignature signature(const CellIndex& vertex) const;
    Region region(const CellIndex& vertex) const;
    std::size_t boundary_slot(Side side, const CellIndex& cell) const;
    using RowBuffer = std::array<double, 27>;  // coefficients by neighbour offset
    void row_mpfa(std::size_t row, RowBuffer& coef, double& rhs) const;
    void row_tpfa(std::size_t row, RowBuffer& coef, double& rhs) const;
    FluxSystem assemble_impl(bool parallel) const;

    StructuredMesh mesh_;
    PermeabilityTensor k_;
    FluidProperties fluid_;
    BoundarySpec bc_;
    Scheme scheme_;

    std::vector<char> constrained_;
    std::vector<double> fixed_;
    std::array<std::vector<double>, 6> boundary_values_;  ///< per boundary face, Dirichlet value or flux density
    std::map<std::uint64_t, std::unique_ptr<LocalTransmissibility>> cache_;
};

}  // namespace dswell
