#include <doctest.h>

#include "dswell/fvm.hpp"
#include "support.hpp"

using namespace dswell;

namespace {

DiscreteSolution solve_without_well(const FluxOperator& op, double tolerance = 1e-13)
{
    SolverOptions opts;
    opts.tolerance = tolerance;
    return solve_pressure(assemble_well(op.assemble(), WellCoupling{}), opts);
}

}  // namespace

TEST_SUITE("properties")
{
    TEST_CASE("MPFA-O reproduces linear pressure fields")
    {
        testing::Draw draw(31);
        const FluidProperties fluid;
        for (int trial = 0; trial < 12; ++trial) {
            const auto k = PermeabilityTensor::rotated_anisotropic(draw.alpha(100.0), draw.uniform(-M_PI, M_PI),
                                                                   draw.uniform(-M_PI, M_PI));
            const Vec3 g{draw.uniform(-1, 1), draw.uniform(-1, 1), draw.uniform(-1, 1)};
            const auto exact = [g](const Vec3& x) { return 2.0 + dot(g, x); };
            BoundarySpec bc = BoundarySpec::all_dirichlet(exact);
            // Two sides carry the exact outward flux instead.
            const Vec3 darcy = -fluid.mobility_factor() * (k.entries() * g);
            bc.sides[static_cast<std::size_t>(Side::x_lower)] = {BoundaryKind::neumann,
                                                                 [darcy](const Vec3&) { return -darcy[0]; }};
            bc.sides[static_cast<std::size_t>(Side::z_upper)] = {BoundaryKind::neumann,
                                                                 [darcy](const Vec3&) { return darcy[2]; }};
            const auto mesh = StructuredMesh::build({{0, 0, 0}, {1.0, 0.7, 0.4}}, {7, 5, 6});
            const FluxOperator op(mesh, k, fluid, bc, Scheme::mpfa_o);
            const auto sol = solve_without_well(op);
            double worst = 0.0;
            for (std::size_t i = 0; i < mesh.num_cells(); ++i)
                worst = std::max(worst, std::abs(sol.pressure[i] - exact(mesh.center(i))));
            CHECK(worst <= 1e-9);
        }
    }

    TEST_CASE("TPFA and MPFA-O agree on K-orthogonal grids")
    {
        testing::Draw draw(37);
        for (int trial = 0; trial < 6; ++trial) {
            const auto k = PermeabilityTensor(Mat3::diag(draw.uniform(1e-13, 1e-12), draw.uniform(1e-13, 1e-12),
                                                         draw.uniform(1e-13, 1e-12)));
            BoundarySpec bc = BoundarySpec::all_dirichlet([](const Vec3& x) { return 1e5 * (1.0 + x[0] * x[1] - x[2] * x[2]); });
            bc.sides[static_cast<std::size_t>(Side::y_upper)] = BoundaryCondition::no_flow();
            const auto mesh = StructuredMesh::build({{-1, -2, 0}, {1, 1, 1}}, {6, 8, 5});
            const auto a = solve_without_well(FluxOperator(mesh, k, {}, bc, Scheme::tpfa)).pressure;
            const auto b = solve_without_well(FluxOperator(mesh, k, {}, bc, Scheme::mpfa_o)).pressure;
            double worst = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, testing::rel_diff(b[i], a[i]));
            CHECK(worst <= 1e-12);
        }
    }

    TEST_CASE("face fluxes are antisymmetric across interior faces")
    {
        testing::Draw draw(41);
        const auto k = PermeabilityTensor::rotated_anisotropic(30.0, 0.4, -0.7);
        const auto mesh = StructuredMesh::build({{0, 0, 0}, {3, 2, 1}}, {6, 5, 4});
        const FluxOperator op(mesh, k, {}, BoundarySpec::all_dirichlet([](const Vec3&) { return 1e5; }));
        std::vector<double> p(mesh.num_cells());
        for (auto& v : p) v = 1e5 + draw.uniform(-1e4, 1e4);
        const auto flux = op.face_fluxes(p);
        double scale = 0.0, worst = 0.0;
        for (const auto& f : flux)
            for (double v : f) scale = std::max(scale, std::abs(v));
        for (std::size_t id = 0; id < mesh.num_cells(); ++id) {
            const CellIndex c = mesh.cell_of(id);
            for (std::size_t d = 0; d < 3; ++d) {
                CellIndex n = c;
                ++n[d];
                if (!mesh.valid(n)) continue;
                worst = std::max(worst, std::abs(flux[id][2 * d + 1] + flux[mesh.index(n)][2 * d]));
            }
        }
        CHECK(worst <= 1e-12 * scale);
    }

    TEST_CASE("well sources balance the boundary outflow")
    {
        const auto k = PermeabilityTensor::rotated_anisotropic(0.1, 0.0, deg_to_rad(90.0));
        const Vec3 a{-20, -50, 25}, b{20, 50, 75};
        const auto well = WellDescription::through(a, b - a, 0.1, 1e6, 1.0);
        BoundarySpec bc;
        bc.sides[static_cast<std::size_t>(Side::y_lower)] = BoundaryCondition::dirichlet([](const Vec3&) { return 1e5; });
        bc.sides[static_cast<std::size_t>(Side::y_upper)] = BoundaryCondition::dirichlet([](const Vec3&) { return 3e5; });
        const auto mesh = StructuredMesh::build({{-50, -100, 0}, {50, 100, 100}}, {10, 20, 10});
        const FluxOperator op(mesh, k, {}, bc);
        const FluxSystem flux = op.assemble();
        const TransformChain chain = build_transform(k, well);
        const WellLine line = WellLine::segment(a, b);
        SolverOptions opts;
        opts.tolerance = 1e-13;
        for (WellModel model : {WellModel::distributed, WellModel::peaceman}) {
            const WellCoupling cpl =
                model == WellModel::distributed
                    ? couple_distributed(op, flux, well, KernelSpec::annulus(chain.f, 100.0 * (chain.a + chain.b)), line)
                    : couple_peaceman(op, flux, well, line);
            const DiscreteSystem sys = assemble_well(flux, cpl);
            const auto sol = solve_pressure(sys, opts);
            const double q = evaluate_well(cpl, sys.constrained, sol.pressure).total;
            CHECK(testing::rel_diff(op.boundary_outflow(sol.pressure), q) <= 1e-8);
        }
    }
}
