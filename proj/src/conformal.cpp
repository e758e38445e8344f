#include "dswell/conformal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dswell {

JoukowskyMap::JoukowskyMap(double a, double b)
{
    if (!(b > 0.0) || a < b) throw std::invalid_argument("Joukowsky map needs a >= b > 0");
    f_ = (a - b < 1e-12 * a) ? 0.0 : std::sqrt((a - b) * (a + b));
    r_circle_ = a + b;
}

Complex JoukowskyMap::to_w_unchecked(Complex z) const
{
    if (f_ == 0.0) return 2.0 * z;
    return z + std::sqrt(z - f_) * std::sqrt(z + f_);
}

Complex JoukowskyMap::to_w(Complex z) const
{
    if (f_ > 0.0 && std::abs(z.imag()) <= 1e-14 * f_ && std::abs(z.real()) <= f_) {
        std::ostringstream msg;
        msg << "point " << z << " lies on the focal segment [-" << f_ << ", " << f_ << "]";
        throw std::domain_error(msg.str());
    }
    return to_w_unchecked(z);
}

Complex JoukowskyMap::from_w(Complex w) const
{
    if (f_ == 0.0) return 0.5 * w;
    if (!(std::abs(w) > f_)) throw std::domain_error("inverse Joukowsky map needs |w| > f");
    return 0.5 * (w + f_ * f_ / w);
}

double JoukowskyMap::jacobian_det(Complex w) const
{
    if (f_ == 0.0) return 0.25;
    const double r2 = std::norm(w);
    const double f2 = f_ * f_;
    return 0.25 * (1.0 + (f2 * f2 - 2.0 * f2 * (w * w).real()) / (r2 * r2));
}

double JoukowskyMap::phi_j(Complex w) const
{
    if (f_ == 0.0) return 4.0;
    if (!(std::abs(w) > f_)) throw std::domain_error("phi_j needs |w| > f");
    return 1.0 / jacobian_det(w);
}

double JoukowskyMap::max_stretch_at_radius(double r) const
{
    if (f_ == 0.0) return 0.5;
    return 0.5 * (1.0 + f_ * f_ / (r * r));
}

}  // namespace dswell
