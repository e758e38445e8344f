#pragma once

// Scenario description shared by the CLI and the experiments. A scenario is a
// JSON document; every field has a default so that partial files work, and
// to_json(from_json(j)) reproduces a complete document exactly.

#include <array>
#include <optional>
#include <string>

#include <json.hpp>

#include "dswell/analytic.hpp"
#include "dswell/fvm.hpp"
#include "dswell/mesh.hpp"
#include "dswell/mpfa.hpp"
#include "dswell/solver.hpp"

namespace dswell {

struct PermeabilitySpec {
    /// Either the rotated form R1(g1) R2(g2) diag(1, 1, alpha) R2^T R1^T scale
    /// or an explicit symmetric matrix.
    double alpha = 1.0;
    double gamma1_deg = -20.0;
    double gamma2_deg = -20.0;
    double scale = 1e-12;
    std::optional<Mat3> tensor;

    PermeabilityTensor build() const;
};

enum class WellClosure {
    pressure,  ///< p_w prescribed; q is the reference rate of the analytic solution
    rate,      ///< q prescribed; p_w is an unknown of the discrete system
};

struct WellSpec {
    /// Infinite well through `point` with psi = R1(beta1) R2(beta2) e3, or a
    /// finite segment from `from` to `to` when both are given.
    double beta1_deg = 20.0;
    double beta2_deg = 20.0;
    Vec3 point{0.0, 0.0, 0.0};
    std::optional<Vec3> from;
    std::optional<Vec3> to;
    double radius = 0.1;
    double pressure = 1e6;
    double rate = 1.0;
    WellClosure closure = WellClosure::pressure;

    bool is_segment() const { return from.has_value() && to.has_value(); }
    WellDescription description() const;
    WellLine line() const;
};

struct KernelConfig {
    /// Inner radius: the focal distance f of the well-bore ellipse when
    /// empty, otherwise this w-plane radius.
    std::optional<double> inner;
    /// Outer radius as a multiple of the w-plane well radius a + b, or an
    /// absolute w-plane radius when `outer` is set.
    double outer_ratio = 100.0;
    std::optional<double> outer;
    /// Scale the outer radius by h_max / adaptive_reference_h.
    bool adaptive = false;
    double adaptive_reference_h = 10.0 * 1.7320508075688772;
    JacobianMode jacobian = JacobianMode::exact;
    double sampling_spacing = 0.0;  ///< 0 selects the default per mesh

    KernelSpec build(const TransformChain& chain, double h_max) const;
};

/// Either the infinite-well setup (analytic Dirichlet data on the box and in
/// the cells outside `free_region`) or constant per-side conditions.
struct BoundaryConfig {
    struct SideValue {
        BoundaryKind kind = BoundaryKind::neumann;
        double value = 0.0;  ///< pressure [Pa] or outward flux density [kg/s/m^2]
    };
    bool analytic = true;
    std::array<SideValue, 6> sides{};
    std::optional<Box> free_region;
};

struct OutputConfig {
    bool csv = true;
    bool vtk = true;
    /// Lattice for analytic field export (cell counts per direction).
    std::array<int, 3> lattice{21, 21, 21};
};

struct Scenario {
    std::string name = "scenario";
    Box domain{{-100.0, -100.0, -50.0}, {100.0, 100.0, 150.0}};
    CellIndex cells{20, 20, 20};
    PermeabilitySpec permeability;
    FluidProperties fluid;
    WellSpec well;
    KernelConfig kernel;
    WellModel model = WellModel::distributed;
    Scheme scheme = Scheme::mpfa_o;
    BoundaryConfig boundary;
    SolverOptions solver;
    OutputConfig output;

    /// Well through the origin in [-100,100]^2 x [-50,150] with the analytic
    /// solution enforced outside [-100,100]^2 x [0,100] and on the box.
    static Scenario infinite_well(double alpha);
    /// Closed box [-50,50] x [-100,100] x [0,100], diag(0.1, 1, 1) 1e-12 m^2,
    /// slanted finite well, Dirichlet planes at y = -100 / 100.
    static Scenario slanted_box();

    StructuredMesh mesh(int refinement = 0) const;
    /// Throws std::invalid_argument with a description of the first problem.
    void validate() const;
};

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

std::string to_string(WellModel m);
std::string to_string(Scheme s);
std::string to_string(JacobianMode m);

}  // namespace dswell
