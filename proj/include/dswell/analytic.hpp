#pragma once

// Closed-form pressure around an infinite slanted well in a homogeneous
// anisotropic medium, singular and kernel-regularized.
//
// All radii of the kernel (inner, outer) are radii in the w-plane, i.e. after
// stretching, rotating and applying the Joukowsky map. In that plane the well
// bore is the circle |w| = a + b; for an isotropic medium |w| is twice the
// distance from the axis.

#include <optional>

#include "dswell/conformal.hpp"
#include "dswell/tensor_geometry.hpp"

namespace dswell {

struct FluidProperties {
    double density = 1000.0;  // [kg/m^3]
    double viscosity = 1e-3;  // [Pa s]

    void validate() const;
    double mobility_factor() const { return density / viscosity; }
};

/// Annulus kernel support inner <= |w| <= outer in the w-plane.
struct KernelSpec {
    double inner = 0.0;
    double outer = 1.0;

    /// Throws unless outer > inner >= 0.
    static KernelSpec annulus(double inner, double outer);

    double xi_squared() const { return outer * outer - inner * inner; }
    /// Constant kernel value 1 / (pi (outer^2 - inner^2)) on the annulus.
    double density() const;
};

/// [ln(rho / r) - 1/2]^{-1}; throws if ln(rho / r) <= 1/2.
double xi_isotropic(double rho, double r);

/// [ln(rho_o / r) - 1/2 - (rho_i^2 / xi^2) ln(rho_i / rho_o)]^{-1}, where r is
/// the radius of the well bore in the same plane as the kernel radii.
/// Throws if the bracket is not positive.
double xi_anisotropic(const KernelSpec& kernel, double r);

/// q_hat = 2 pi (rho k_I / mu) (p_w - p0) Xi.
double source_from_pressures(double p_well, double p_center, double xi, double k_iso, const FluidProperties& fluid);

class AnalyticSolution {
public:
    /// Without a kernel the solution is the singular line-source solution.
    AnalyticSolution(const PermeabilityTensor& k, const WellDescription& well, const FluidProperties& fluid,
                     std::optional<KernelSpec> kernel = std::nullopt);

    const TransformChain& chain() const { return chain_; }
    const JoukowskyMap& map() const { return map_; }
    const WellDescription& well() const { return well_; }
    const FluidProperties& fluid() const { return fluid_; }
    const std::optional<KernelSpec>& kernel() const { return kernel_; }
    const PermeabilityTensor& permeability() const { return perm_; }

    /// q_hat = q zeta.
    double rate_hat() const { return well_.rate * chain_.zeta; }
    /// Flux scaling factor of the kernel; throws if no kernel.
    double flux_scaling() const;
    /// p0 = p(|w| <= rho_i); throws if no kernel.
    double center_pressure() const;

    /// w = T(Z(V(U(x)))); points on the focal segment map to |w| = f.
    Complex w_of(const Vec3& x) const;

    /// Singular solution; throws std::domain_error when |w| <= f.
    double pressure_singular(const Vec3& x) const;
    /// Kernel-regularized solution; equals the singular one for |w| > rho_o.
    double pressure_regularized(const Vec3& x) const;
    /// Regularized if a kernel is present, singular otherwise.
    double pressure(const Vec3& x) const;

    /// Regularized radial profile p(|w|).
    double pressure_at_radius(double w_radius) const;
    double singular_at_radius(double w_radius) const;

    /// Gradient of pressure() in x-coordinates [Pa/m].
    Vec3 gradient(const Vec3& x) const;

private:
    double dp_dradius(double w_radius) const;

    PermeabilityTensor perm_;
    WellDescription well_;
    FluidProperties fluid_;
    std::optional<KernelSpec> kernel_;
    TransformChain chain_;
    JoukowskyMap map_;
    double coefficient_;  // mu / (rho k_I) * q_hat / (2 pi)
};

}  // namespace dswell
