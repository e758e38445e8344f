#include "dswell/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dswell {

void FluidProperties::validate() const
{
    if (!(density > 0.0) || !(viscosity > 0.0)) throw std::invalid_argument("density and viscosity must be positive");
}

KernelSpec KernelSpec::annulus(double inner, double outer)
{
    if (!(inner >= 0.0) || !(outer > inner)) throw std::invalid_argument("kernel radii need outer > inner >= 0");
    return {inner, outer};
}

double KernelSpec::density() const { return 1.0 / (M_PI * xi_squared()); }

double xi_isotropic(double rho, double r)
{
    const double bracket = std::log(rho / r) - 0.5;
    if (!(bracket > 0.0)) {
        std::ostringstream msg;
        msg << "flux scaling undefined: ln(" << rho << " / " << r << ") <= 1/2";
        throw std::invalid_argument(msg.str());
    }
    return 1.0 / bracket;
}

namespace {

// rho_i^2 / xi^2 * ln(rho_i / rho_o), with the rho_i -> 0 limit.
double inner_log_term(const KernelSpec& k)
{
    if (k.inner == 0.0) return 0.0;
    return k.inner * k.inner / k.xi_squared() * std::log(k.inner / k.outer);
}

}  // namespace

double xi_anisotropic(const KernelSpec& kernel, double r)
{
    const double bracket = std::log(kernel.outer / r) - 0.5 - inner_log_term(kernel);
    if (!(bracket > 0.0)) {
        std::ostringstream msg;
        msg << "flux scaling undefined for kernel [" << kernel.inner << ", " << kernel.outer << "] and well radius " << r
            << " (bracket " << bracket << ")";
        throw std::invalid_argument(msg.str());
    }
    return 1.0 / bracket;
}

double source_from_pressures(double p_well, double p_center, double xi, double k_iso, const FluidProperties& fluid)
{
    return 2.0 * M_PI * fluid.mobility_factor() * k_iso * (p_well - p_center) * xi;
}

AnalyticSolution::AnalyticSolution(const PermeabilityTensor& k, const WellDescription& well,
                                   const FluidProperties& fluid, std::optional<KernelSpec> kernel)
    : perm_(k),
      well_(well),
      fluid_(fluid),
      kernel_(kernel),
      chain_(build_transform(k, well)),
      map_(chain_.a, chain_.b),
      coefficient_(0.0)
{
    fluid_.validate();
    coefficient_ = rate_hat() / (2.0 * M_PI * fluid_.mobility_factor() * chain_.k_iso);
    if (kernel_) {
        const double f = map_.focal();
        const double tol = 1e-12 * map_.circle_radius();
        if (kernel_->inner < f - tol || kernel_->inner > map_.circle_radius() + tol
            || !(kernel_->outer > map_.circle_radius())) {
            std::ostringstream msg;
            msg << "kernel radii must satisfy f <= rho_i <= a + b < rho_o (f = " << f << ", a + b = "
                << map_.circle_radius() << ", rho_i = " << kernel_->inner << ", rho_o = " << kernel_->outer << ")";
            throw std::invalid_argument(msg.str());
        }
        (void)xi_anisotropic(*kernel_, map_.circle_radius());
    }
}

double AnalyticSolution::flux_scaling() const
{
    if (!kernel_) throw std::logic_error("flux scaling requires a kernel");
    return xi_anisotropic(*kernel_, map_.circle_radius());
}

double AnalyticSolution::center_pressure() const
{
    if (!kernel_) throw std::logic_error("center pressure requires a kernel");
    return pressure_at_radius(0.0);
}

Complex AnalyticSolution::w_of(const Vec3& x) const { return map_.to_w_unchecked(chain_.to_plane(x)); }

double AnalyticSolution::singular_at_radius(double r) const
{
    return well_.pressure - coefficient_ * std::log(r / map_.circle_radius());
}

double AnalyticSolution::pressure_at_radius(double r) const
{
    if (!kernel_) return singular_at_radius(r);
    const KernelSpec& k = *kernel_;
    const double r_well = map_.circle_radius();
    if (r > k.outer) return singular_at_radius(r);
    const double xi2 = k.xi_squared();
    if (r <= k.inner) return well_.pressure - coefficient_ * (-0.5 - inner_log_term(k) + std::log(k.outer / r_well));
    const double inner_log = k.inner == 0.0 ? 0.0 : k.inner * k.inner / xi2 * std::log(r / k.outer);
    const double bracket = (r * r - k.outer * k.outer) / (2.0 * xi2) - inner_log + std::log(k.outer / r_well);
    return well_.pressure - coefficient_ * bracket;
}

double AnalyticSolution::pressure_singular(const Vec3& x) const
{
    const Complex z = chain_.to_plane(x);
    const Complex w = map_.to_w_unchecked(z);
    const double r = std::abs(w);
    if (map_.focal() > 0.0 ? !(r > map_.focal() * (1.0 + 1e-14)) : r == 0.0)
        throw std::domain_error("point lies on the well axis / focal segment");
    return singular_at_radius(r);
}

double AnalyticSolution::pressure_regularized(const Vec3& x) const
{
    if (!kernel_) throw std::logic_error("regularized pressure requires a kernel");
    return pressure_at_radius(std::abs(w_of(x)));
}

double AnalyticSolution::pressure(const Vec3& x) const
{
    return kernel_ ? pressure_regularized(x) : pressure_singular(x);
}

double AnalyticSolution::dp_dradius(double r) const
{
    if (kernel_ && r <= kernel_->outer) {
        const KernelSpec& k = *kernel_;
        if (r <= k.inner) return 0.0;
        return -coefficient_ * (r / k.xi_squared() - k.inner * k.inner / (k.xi_squared() * r));
    }
    return -coefficient_ / r;
}

Vec3 AnalyticSolution::gradient(const Vec3& x) const
{
    const Complex z = chain_.to_plane(x);
    const Complex w = map_.to_w_unchecked(z);
    const double r = std::abs(w);
    const double dp = dp_dradius(r);
    if (dp == 0.0 || r == 0.0) return {};
    // dw/dz = w / (sqrt(z - f) sqrt(z + f)); for f = 0 it is 2.
    Complex dwdz(2.0, 0.0);
    if (map_.focal() > 0.0) dwdz = w / (std::sqrt(z - map_.focal()) * std::sqrt(z + map_.focal()));
    // d|w|/dv1 = Re(conj(w) w') / |w|, d|w|/dv2 = -Im(conj(w) w') / |w|.
    const Complex g = std::conj(w) * dwdz / r;
    const Vec3 grad_v{dp * g.real(), -dp * g.imag(), 0.0};
    return chain_.forward_matrix.transposed() * grad_v;
}

}  // namespace dswell
