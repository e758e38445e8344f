#include "dswell/tensor_geometry.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dswell {

namespace {

Mat3 symmetrized(const Mat3& a) { return 0.5 * (a + a.transposed()); }

// Coefficients of det(A - x I) = -x^3 + c2 x^2 - c1 x + c0.
struct CharPoly {
    double c2, c1, c0;

    explicit CharPoly(const Mat3& a)
        : c2(a.trace()),
          c1(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2)
             - a(1, 2) * a(2, 1)),
          c0(a.determinant())
    {
    }

    double value(double x) const { return ((-x + c2) * x - c1) * x + c0; }
    double slope(double x) const { return (-3.0 * x + 2.0 * c2) * x - c1; }
};

// Null vector of (A - lambda I) from the best-conditioned row cross product.
Vec3 null_vector(const Mat3& a, double lambda)
{
    Mat3 m = a - lambda * Mat3::identity();
    const Vec3 r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
    const Vec3 c[3] = {cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (dot(c[i], c[i]) > dot(c[best], c[best])) best = i;
    return c[best];
}

Vec3 any_orthogonal(const Vec3& n)
{
    const Vec3 trial = std::abs(n[0]) < 0.9 ? unit(0) : unit(1);
    return normalized(trial - dot(trial, n) * n);
}

// Cyclic Jacobi sweeps on D = Q^T A Q, accumulating into Q.
void jacobi_polish(const Mat3& a, Mat3& q, int max_sweeps)
{
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        Mat3 d = q.transposed() * a * q;
        double off = std::abs(d(0, 1)) + std::abs(d(0, 2)) + std::abs(d(1, 2));
        if (off <= 1e-17 * scale) return;
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t r = p + 1; r < 3; ++r) {
                d = q.transposed() * a * q;
                const double apr = d(p, r);
                if (std::abs(apr) <= 1e-18 * scale) continue;
                const double theta = 0.5 * (d(r, r) - d(p, p)) / apr;
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < 3; ++k) {
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
    }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Mat3& input)
{
    const Mat3 a = symmetrized(input);
    const double scale = a.max_abs();
    SymmetricEigen out{{0.0, 0.0, 0.0}, Mat3::identity()};
    if (scale == 0.0) return out;

    // Trigonometric solution of the characteristic cubic.
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double q = a.trace() / 3.0;
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) + (a(2, 2) - q) * (a(2, 2) - q)
                      + 2.0 * p1;
    double lam[3];
    if (p2 <= 1e-32 * scale * scale) {
        lam[0] = lam[1] = lam[2] = q;
    } else {
        const double p = std::sqrt(p2 / 6.0);
        const Mat3 b = (1.0 / p) * (a - q * Mat3::identity());
        const double r = std::clamp(0.5 * b.determinant(), -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        lam[2] = q + 2.0 * p * std::cos(phi);
        lam[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        lam[1] = 3.0 * q - lam[0] - lam[2];
    }

    const CharPoly poly(a);
    for (double& l : lam) {
        const double s = poly.slope(l);
        if (std::abs(s) > 1e-8 * scale * scale) {
            const double step = poly.value(l) / s;
            if (std::abs(step) < 1e-6 * scale) l -= step;
        }
    }
    std::sort(lam, lam + 3);

    const double tie = 1e-8 * scale;
    Vec3 v0, v1, v2;
    if (lam[2] - lam[0] <= tie) {
        v0 = unit(0);
        v1 = unit(1);
        v2 = unit(2);
    } else if (lam[1] - lam[0] <= tie) {
        v2 = normalized(null_vector(a, lam[2]));
        v0 = any_orthogonal(v2);
        v1 = cross(v2, v0);
    } else if (lam[2] - lam[1] <= tie) {
        v0 = normalized(null_vector(a, lam[0]));
        v1 = any_orthogonal(v0);
        v2 = cross(v0, v1);
    } else {
        v0 = normalized(null_vector(a, lam[0]));
        v2 = normalized(null_vector(a, lam[2]));
        v2 = normalized(v2 - dot(v2, v0) * v0);
        v1 = cross(v2, v0);
    }

    Mat3 qm = Mat3::from_columns(v0, v1, v2);
    jacobi_polish(a, qm, 6);

    const Mat3 d = qm.transposed() * a * qm;
    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d(i, i) < d(j, j); });
    for (std::size_t i = 0; i < 3; ++i) out.values[i] = d(order[i], order[i]);
    out.vectors = Mat3::from_columns(qm.column(order[0]), qm.column(order[1]), qm.column(order[2]));
    if (out.vectors.determinant() < 0.0) {
        for (std::size_t r = 0; r < 3; ++r) out.vectors(r, 2) = -out.vectors(r, 2);
    }
    return out;
}

SymmetricEigen eigendecompose(const Mat3& k)
{
    SymmetricEigen e = symmetric_eigen(k);
    if (!(e.values[0] > 0.0)) {
        std::ostringstream msg;
        msg << "permeability tensor is not positive definite (eigenvalues " << e.values << ")";
        throw std::invalid_argument(msg.str());
    }
    return e;
}

PermeabilityTensor::PermeabilityTensor(const Mat3& entries) : entries_(entries)
{
    const double scale = entries.max_abs();
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = r + 1; c < 3; ++c)
            if (std::abs(entries(r, c) - entries(c, r)) > 1e-14 * scale)
                throw std::invalid_argument("permeability tensor is not symmetric");
    entries_ = symmetrized(entries);
    eigen_ = eigendecompose(entries_);
}

PermeabilityTensor PermeabilityTensor::isotropic(double k) { return PermeabilityTensor(Mat3::diag(k, k, k)); }

PermeabilityTensor PermeabilityTensor::rotated_anisotropic(double alpha, double gamma1, double gamma2, double scale)
{
    const Mat3 r = rotation_e1(gamma1) * rotation_e2(gamma2);
    return PermeabilityTensor(scale * (r * Mat3::diag(1.0, 1.0, alpha) * r.transposed()));
}

bool PermeabilityTensor::is_diagonal(double rel_tol) const
{
    const double tol = rel_tol * entries_.max_abs();
    return std::abs(entries_(0, 1)) <= tol && std::abs(entries_(0, 2)) <= tol && std::abs(entries_(1, 2)) <= tol;
}

WellDescription WellDescription::through(const Vec3& point, const Vec3& direction, double radius, double pressure,
                                         double rate)
{
    const double n = norm(direction);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("well direction must be a nonzero vector");
    if (!(radius > 0.0)) throw std::invalid_argument("well radius must be positive");
    return {point, direction / n, radius, pressure, rate};
}

Mat3 rodrigues_align(const Vec3& psi)
{
    Vec3 k = unit(2) + psi;
    const double len = norm(k);
    if (len < 1e-12) {
        k = unit(0);
    } else {
        k = k / len;
    }
    return 2.0 * Mat3::outer(k, k) - Mat3::identity();
}

TransformChain build_transform(const PermeabilityTensor& perm, const WellDescription& well)
{
    if (!(norm(well.direction) > 0.0)) throw std::invalid_argument("degenerate well direction");
    if (!(well.radius > 0.0)) throw std::invalid_argument("well radius must be positive");
    const Vec3 psi = normalized(well.direction);

    TransformChain t;
    t.well_radius = well.radius;
    t.origin = well.point;
    t.well_direction = psi;

    const Vec3& lam = perm.eigenvalues();
    const Mat3& q = perm.eigenvectors();
    t.k_iso = std::cbrt(lam[0] * lam[1] * lam[2]);
    const Mat3 s_diag = Mat3::diag(std::sqrt(t.k_iso / lam[0]), std::sqrt(t.k_iso / lam[1]), std::sqrt(t.k_iso / lam[2]));
    const Mat3 s_inv_diag =
        Mat3::diag(std::sqrt(lam[0] / t.k_iso), std::sqrt(lam[1] / t.k_iso), std::sqrt(lam[2] / t.k_iso));
    t.stretch = symmetrized(q * s_diag * q.transposed());
    t.stretch_inverse = symmetrized(q * s_inv_diag * q.transposed());

    const Vec3 s_psi = t.stretch * psi;
    t.axial_scale = norm(s_psi);
    t.psi_prime = s_psi / t.axial_scale;
    t.rodrigues = rodrigues_align(t.psi_prime);

    // Well-bore ellipse E = P^T R S^-1 Psi S^-1 R^T P in the R-rotated plane.
    const Mat3 proj = Mat3::identity() - Mat3::outer(psi, psi);
    const Mat3 e3 = t.rodrigues * t.stretch_inverse * proj * t.stretch_inverse * t.rodrigues.transposed();
    const double e00 = e3(0, 0), e01 = 0.5 * (e3(0, 1) + e3(1, 0)), e11 = e3(1, 1);
    const double mean = 0.5 * (e00 + e11);
    const double rad = std::hypot(0.5 * (e00 - e11), e01);
    const double gamma_small = mean - rad, gamma_large = mean + rad;
    t.a = well.radius / std::sqrt(gamma_small);
    t.b = well.radius / std::sqrt(gamma_large);

    Vec3 nu1;
    if (rad <= 1e-12 * mean) {
        Vec3 p = unit(0) - dot(unit(0), t.psi_prime) * t.psi_prime;
        if (norm(p) < 1e-8) p = unit(1) - dot(unit(1), t.psi_prime) * t.psi_prime;
        nu1 = normalized(p);
        t.a = t.b = std::sqrt(t.a * t.b);
    } else {
        // Eigenvector of the larger eigenvalue is (cos th, sin th); the major
        // axis belongs to the smaller one.
        const double th = 0.5 * std::atan2(2.0 * e01, e00 - e11);
        const Vec3 hat{-std::sin(th), std::cos(th), 0.0};
        nu1 = normalized(t.rodrigues * hat);
        nu1 = normalized(nu1 - dot(nu1, t.psi_prime) * t.psi_prime);
    }
    const Vec3 nu2 = cross(t.psi_prime, nu1);
    t.ellipse_frame = Mat3::from_columns(nu1, nu2, t.psi_prime);

    t.f = (t.a - t.b < 1e-12 * t.a) ? 0.0 : std::sqrt((t.a - t.b) * (t.a + t.b));
    t.zeta = t.a * t.b / (well.radius * well.radius);
    t.plane_normal = normalized(t.stretch * t.psi_prime);
    t.forward_matrix = t.ellipse_frame.transposed() * t.stretch;
    t.inverse_matrix = t.stretch_inverse * t.ellipse_frame;
    return t;
}

}  // namespace dswell
