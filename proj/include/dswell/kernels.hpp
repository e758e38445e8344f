#pragma once

// Kernel-distributed well sources. The kernel is constant on an annulus in the
// w-plane; pulled back to x-coordinates it picks up the Joukowsky factor Phi_J
// and is supported on an elliptic cylinder around the well.
//
// Integration points are laid out on a lattice in (|w|, arg w, axial) so that
// each point carries an exactly known share of the kernel mass. Per-cell
// weights are accumulated by locating points in the mesh.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dswell/analytic.hpp"
#include "dswell/mesh.hpp"

namespace dswell {

enum class JacobianMode {
    exact,       ///< Phi_Lambda = Phi_A Phi_J
    simplified,  ///< Phi_J replaced by its far-field value 4
};

class KernelField {
public:
    /// Kernel for the well piece with line parameters s in [s_begin, s_end],
    /// measured from chain.origin along the well direction.
    KernelField(const TransformChain& chain, const KernelSpec& spec, double s_begin, double s_end,
                JacobianMode mode = JacobianMode::exact);

    const TransformChain& chain() const { return chain_; }
    const JoukowskyMap& map() const { return map_; }
    const KernelSpec& spec() const { return spec_; }
    JacobianMode mode() const { return mode_; }
    double s_begin() const { return s0_; }
    double s_end() const { return s1_; }

    /// Phi_Lambda(x); zero outside the support and on the focal segment.
    double operator()(const Vec3& x) const;

    /// Transformed piece length L_hat = |S psi| (s_end - s_begin) = L / zeta.
    double transformed_length() const { return chain_.axial_scale * (s1_ - s0_); }

    /// Exact integral of the kernel in use over its support. Equals L_hat for
    /// the exact kernel; the simplified kernel carries 4 Phi_A |support|.
    double exact_integral() const;

    /// Exact support volume (pi/4)[(r_o^2 - f^4/r_o^2) - (r_i^2 - f^4/r_i^2)] L_hat.
    double exact_support_volume() const;

    /// Largest x-distance between w-points at spacing dw inside the support,
    /// per unit dw: sigma_max(S^-1) * max|dz/dw|.
    double x_stretch_factor() const;

private:
    TransformChain chain_;
    JoukowskyMap map_;
    KernelSpec spec_;
    double s0_;
    double s1_;
    JacobianMode mode_;
};

struct IntegrationPointSet {
    std::vector<Vec3> points;
    std::vector<double> volumes;  ///< V_i [m^3]
    std::vector<double> kernel;   ///< Phi_Lambda(x_i)

    std::size_t size() const { return points.size(); }
    double total_volume() const;
    /// Sum of V_i Phi_Lambda(x_i).
    double total_weight() const;
};

/// Lattice of integration points with x-spacing of at most target_spacing.
/// Throws if the spacing does not resolve the annulus thickness.
IntegrationPointSet generate_integration_points(const KernelField& field, double target_spacing);

/// Sum of V_i Phi_Lambda(x_i) over the points inside the cell box.
double cell_kernel_weight(const IntegrationPointSet& points, const Box& cell);

/// Default lattice spacing for a mesh: a quarter of the smallest cell edge,
/// reduced so that the annulus gets at least 20 radial bands.
double default_sampling_spacing(const KernelField& field, const StructuredMesh& mesh);

/// Renormalized kernel weights of one well piece.
struct SegmentWeights {
    std::vector<std::pair<std::size_t, double>> cells;  ///< (cell id, weight), sorted by id
    double exact_total = 0.0;    ///< exact kernel integral of the piece (L_hat for the exact kernel)
    double sampled_total = 0.0;  ///< lattice sum including points outside the mesh
    double in_mesh_total = 0.0;  ///< sum of the renormalized cell weights
    std::size_t num_points = 0;
};

/// Weights int_K Phi_Lambda dx for every cell K touched by the support,
/// scaled by exact_total / sampled_total. Points outside the mesh are dropped.
/// Parallel over slices; accumulation order is fixed, so the result equals
/// the serial version bit for bit.
SegmentWeights compute_cell_weights(const KernelField& field, const StructuredMesh& mesh, double spacing);
SegmentWeights compute_cell_weights_serial(const KernelField& field, const StructuredMesh& mesh, double spacing);

/// Lattice quadrature of the kernel mass of the piece; converges to
/// field.exact_integral().
double integrate_kernel_over_segment(const KernelField& field, double spacing);

}  // namespace dswell
