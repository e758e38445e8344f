#pragma once

// Permeability tensors, well axes, and the chain of linear maps that turns an
// anisotropic medium with a slanted well into an isotropic plane problem with
// the well-bore ellipse aligned to the coordinate axes.

#include <complex>

#include "dswell/linalg.hpp"

namespace dswell {

/// Eigenpairs of a symmetric 3x3 matrix. Values ascending, vectors are the
/// columns of a proper rotation (det = +1).
struct SymmetricEigen {
    Vec3 values;
    Mat3 vectors;
};

/// Closed-form (characteristic polynomial) eigensolver for symmetric 3x3
/// matrices, polished by a Newton step per root and a final Jacobi sweep.
/// The input is symmetrized first. Does not check definiteness.
SymmetricEigen symmetric_eigen(const Mat3& a);

/// Symmetric positive definite permeability tensor [m^2] with its cached
/// eigendecomposition K = Q diag(lambda) Q^T.
class PermeabilityTensor {
public:
    /// Throws std::invalid_argument if the matrix is not symmetric to 1e-14
    /// (relative) or not positive definite.
    explicit PermeabilityTensor(const Mat3& entries);

    static PermeabilityTensor isotropic(double k);

    /// R1(gamma1) R2(gamma2) diag(1, 1, alpha) R2^T R1^T * scale, angles in radians.
    static PermeabilityTensor rotated_anisotropic(double alpha, double gamma1, double gamma2, double scale = 1e-12);

    const Mat3& entries() const { return entries_; }
    const Vec3& eigenvalues() const { return eigen_.values; }
    const Mat3& eigenvectors() const { return eigen_.vectors; }
    double determinant() const { return eigen_.values[0] * eigen_.values[1] * eigen_.values[2]; }

    /// True if all off-diagonal entries are below rel_tol * max |K_ij|.
    bool is_diagonal(double rel_tol = 1e-14) const;

private:
    Mat3 entries_;
    SymmetricEigen eigen_;
};

/// Eigendecomposition of a permeability matrix; rejects matrices with a
/// non-positive eigenvalue after symmetrization.
SymmetricEigen eigendecompose(const Mat3& k);

/// Infinite straight well: axis through `point` with unit direction.
struct WellDescription {
    Vec3 point;
    Vec3 direction;
    double radius = 0.1;     // r_w [m]
    double pressure = 1e6;   // p_w [Pa]
    double rate = 1.0;       // q [kg/s/m]

    /// Normalizes the direction; throws on a zero direction or a
    /// non-positive radius.
    static WellDescription through(const Vec3& point, const Vec3& direction, double radius, double pressure,
                                   double rate);
};

/// Rotation by pi about k = (e3 + psi)/|e3 + psi|, i.e. R = 2kk^T - I, which
/// maps e3 onto psi. For psi = -e3 the axis e1 is used.
Mat3 rodrigues_align(const Vec3& psi);

/// The composed map x -> v = Rhat^T S (x - x0) and its inverse, together
/// with the well-bore ellipse that the well cylinder becomes in v-space.
struct TransformChain {
    Mat3 stretch;            ///< S = k_I^{1/2} K^{-1/2}, det S = 1
    Mat3 stretch_inverse;
    double k_iso = 0.0;      ///< k_I = det(K)^{1/3} [m^2]
    Mat3 rodrigues;          ///< R with R e3 = psi'
    Mat3 ellipse_frame;      ///< Rhat = [nu1 | nu2 | psi'] in stretched coordinates
    Vec3 psi_prime;          ///< normalized S psi
    double axial_scale = 1.0;  ///< |S psi|: stretched length per unit well length
    double a = 0.0;          ///< major semi-axis of the well-bore ellipse [m]
    double b = 0.0;          ///< minor semi-axis [m]
    double f = 0.0;          ///< focal distance sqrt(a^2 - b^2) [m]
    double zeta = 1.0;       ///< ab / r_w^2
    double well_radius = 0.0;
    Vec3 plane_normal;       ///< unit normal of the x-planes that map to v3 = const
    Vec3 origin;             ///< point on the well axis
    Vec3 well_direction;     ///< psi in x-coordinates
    Mat3 forward_matrix;     ///< Rhat^T S
    Mat3 inverse_matrix;     ///< S^{-1} Rhat

    Vec3 forward(const Vec3& x) const { return forward_matrix * (x - origin); }
    Vec3 inverse(const Vec3& v) const { return origin + inverse_matrix * v; }

    /// z = v1 + i v2 in the well-bore plane.
    std::complex<double> to_plane(const Vec3& x) const
    {
        const Vec3 v = forward(x);
        return {v[0], v[1]};
    }

    /// Axial coordinate in v-space for a point with well parameter s (x-length).
    double axial_of_parameter(double s) const { return axial_scale * s; }
};

TransformChain build_transform(const PermeabilityTensor& k, const WellDescription& well);

}  // namespace dswell
