#include "dswell/peaceman.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dswell {

void WellIndexInput::validate() const
{
    for (std::size_t d = 0; d < 3; ++d) {
        if (!(cell_size[d] > 0.0)) throw std::invalid_argument("cell dimensions must be positive");
        if (!(permeability[d] > 0.0)) throw std::invalid_argument("permeabilities must be positive");
    }
    if (std::abs(norm(direction) - 1.0) > 1e-12) throw std::invalid_argument("well direction must be a unit vector");
    if (!(radius > 0.0)) throw std::invalid_argument("well radius must be positive");
    if (length < 0.0) throw std::invalid_argument("well length must be non-negative");
}

double peaceman_radius(const WellIndexInput& in)
{
    in.validate();
    std::size_t axis = 3;
    for (std::size_t d = 0; d < 3; ++d)
        if (std::abs(std::abs(in.direction[d]) - 1.0) <= 1e-12) axis = d;
    if (axis == 3) throw std::invalid_argument("Peaceman's radius needs a well along a coordinate axis");
    // The two directions normal to the well, in cyclic order.
    const std::size_t i = (axis + 1) % 3, j = (axis + 2) % 3;
    const double kx = in.permeability[i], ky = in.permeability[j];
    const double dx = in.cell_size[i], dy = in.cell_size[j];
    const double num = std::sqrt(std::sqrt(ky / kx) * dx * dx + std::sqrt(kx / ky) * dy * dy);
    return 0.5 * std::exp(-euler_gamma) * num / (std::pow(kx / ky, 0.25) + std::pow(ky / kx, 0.25));
}

double slanted_permeability(const WellIndexInput& in)
{
    in.validate();
    const Vec3& k = in.permeability;
    const Vec3& p = in.direction;
    return std::sqrt(p[0] * p[0] * k[1] * k[2] + p[1] * p[1] * k[0] * k[2] + p[2] * p[2] * k[0] * k[1]);
}

double slanted_radius(const WellIndexInput& in)
{
    in.validate();
    const double k1 = in.permeability[0], k2 = in.permeability[1], k3 = in.permeability[2];
    const double dx = in.cell_size[0], dy = in.cell_size[1], dz = in.cell_size[2];
    const double p1 = in.direction[0] * in.direction[0];
    const double p2 = in.direction[1] * in.direction[1];
    const double p3 = in.direction[2] * in.direction[2];
    const double dl1 = std::sqrt(k2 / k3) * dz * dz * p1 + std::sqrt(k3 / k1) * dx * dx * p2 + std::sqrt(k1 / k2) * dy * dy * p3;
    const double dl2 = std::sqrt(k3 / k2) * dy * dy * p1 + std::sqrt(k1 / k3) * dz * dz * p2 + std::sqrt(k2 / k1) * dx * dx * p3;
    const double a1 = std::sqrt(k2 / k3) * p1 + std::sqrt(k3 / k1) * p2 + std::sqrt(k1 / k2) * p3;
    const double a2 = std::sqrt(k3 / k2) * p1 + std::sqrt(k1 / k3) * p2 + std::sqrt(k2 / k1) * p3;
    return 0.5 * std::exp(-euler_gamma) * std::sqrt(dl1 + dl2) / (std::sqrt(a1) + std::sqrt(a2));
}

namespace {

double well_index(double k, double r0, const WellIndexInput& in, const FluidProperties& fluid)
{
    fluid.validate();
    if (!(r0 > in.radius)) {
        std::ostringstream msg;
        msg << "equivalent radius " << r0 << " m does not exceed the well radius " << in.radius
            << " m; the grid is too fine for this well model";
        throw std::domain_error(msg.str());
    }
    return 2.0 * std::numbers::pi * fluid.mobility_factor() * in.length * k / std::log(r0 / in.radius);
}

}  // namespace

double peaceman_well_index(const WellIndexInput& in, const FluidProperties& fluid)
{
    const double r0 = peaceman_radius(in);
    std::size_t axis = 0;
    for (std::size_t d = 0; d < 3; ++d)
        if (std::abs(in.direction[d]) > std::abs(in.direction[axis])) axis = d;
    const double k = std::sqrt(in.permeability[(axis + 1) % 3] * in.permeability[(axis + 2) % 3]);
    return well_index(k, r0, in, fluid);
}

double slanted_well_index(const WellIndexInput& in, const FluidProperties& fluid)
{
    return well_index(slanted_permeability(in), slanted_radius(in), in, fluid);
}

double peaceman_source(const WellIndexInput& in, const FluidProperties& fluid, double p_well, double p_block)
{
    return peaceman_well_index(in, fluid) * (p_well - p_block);
}

double slanted_well_source(const WellIndexInput& in, const FluidProperties& fluid, double p_well, double p_block)
{
    return slanted_well_index(in, fluid) * (p_well - p_block);
}

Vec3 diagonal_permeability(const PermeabilityTensor& k)
{
    if (!k.is_diagonal(1e-12))
        throw std::invalid_argument("the Peaceman-type well model is only defined for diagonal permeability tensors");
    return {k.entries()(0, 0), k.entries()(1, 1), k.entries()(2, 2)};
}

}  // namespace dswell
