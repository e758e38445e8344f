#pragma once

// Well-index baseline: Peaceman's equivalent radius for diagonal tensors on
// rectangular cells, and its directional extension for slanted wells.

#include "dswell/analytic.hpp"
#include "dswell/linalg.hpp"

namespace dswell {

inline constexpr double euler_gamma = 0.57721566490153286061;

struct WellIndexInput {
    Vec3 cell_size;       ///< (dx, dy, dz) [m]
    Vec3 permeability;    ///< diagonal (K11, K22, K33) [m^2]
    Vec3 direction;       ///< unit well direction
    double length = 0.0;  ///< well length inside the cell [m]
    double radius = 0.1;  ///< r_w [m]

    /// Throws on non-positive sizes or permeabilities or a non-unit direction.
    void validate() const;
};

/// Equivalent radius for a well along a coordinate axis; throws if the
/// direction is not axis-aligned.
double peaceman_radius(const WellIndexInput& in);

/// Directional (slanted) equivalent radius and effective permeability.
double slanted_radius(const WellIndexInput& in);
double slanted_permeability(const WellIndexInput& in);

/// Well index WI with Q = WI (p_w - p0); throws if r0 <= r_w.
double peaceman_well_index(const WellIndexInput& in, const FluidProperties& fluid);
double slanted_well_index(const WellIndexInput& in, const FluidProperties& fluid);

double peaceman_source(const WellIndexInput& in, const FluidProperties& fluid, double p_well, double p_block);
double slanted_well_source(const WellIndexInput& in, const FluidProperties& fluid, double p_well, double p_block);

/// Diagonal of K; throws for a full tensor, for which the model is undefined.
Vec3 diagonal_permeability(const PermeabilityTensor& k);

}  // namespace dswell
