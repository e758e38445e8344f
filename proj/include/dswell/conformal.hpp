#pragma once

// Joukowsky map between the exterior of the focal segment [-f, f] (z-plane)
// and the exterior of the circle |w| = f (w-plane). Ellipses with foci +-f
// become circles; the well-bore ellipse (a, b) becomes |w| = a + b.

#include <complex>

namespace dswell {

using Complex = std::complex<double>;

class JoukowskyMap {
public:
    /// f = sqrt(a^2 - b^2); throws unless a >= b > 0.
    JoukowskyMap(double a, double b);

    double focal() const { return f_; }
    /// Radius of the image of the well-bore ellipse, a + b.
    double circle_radius() const { return r_circle_; }

    /// w = z + sqrt(z - f) sqrt(z + f) with principal roots taken per factor.
    /// For f = 0 the map is w = 2z. Throws std::domain_error on the cut.
    Complex to_w(Complex z) const;

    /// Same as to_w, but points on the cut are mapped to the limit value on
    /// the circle |w| = f instead of throwing.
    Complex to_w_unchecked(Complex z) const;

    /// z = (w + f^2 / w) / 2; requires |w| > f.
    Complex from_w(Complex w) const;

    /// |det J_{T^-1}|^{-1} = 4 / (1 + (f^4 - 2 f^2 Re(w^2)) / |w|^4).
    double phi_j(Complex w) const;

    /// |det J_{T^-1}(w)| = 1 / phi_j(w), without the domain check.
    double jacobian_det(Complex w) const;

    /// |dz/dw| at the given w-radius upper bound: (1 + f^2/r^2) / 2.
    double max_stretch_at_radius(double r) const;

private:
    double f_;
    double r_circle_;
};

}  // namespace dswell
