#include <doctest.h>

#include "dswell/fvm.hpp"
#include "dswell/peaceman.hpp"
#include "support.hpp"

using namespace dswell;

namespace {

struct SlantedBox {
    PermeabilityTensor k = PermeabilityTensor::rotated_anisotropic(0.1, 0.0, deg_to_rad(90.0));
    Vec3 a{-20, -50, 25}, b{20, 50, 75};
    WellDescription well = WellDescription::through(a, b - a, 0.1, 1e6, 1.0);
    StructuredMesh mesh = StructuredMesh::build({{-50, -100, 0}, {50, 100, 100}}, {10, 20, 10});
    BoundarySpec bc = [] {
        BoundarySpec s;
        s.sides[static_cast<std::size_t>(Side::y_lower)] = BoundaryCondition::dirichlet([](const Vec3&) { return 1e5; });
        s.sides[static_cast<std::size_t>(Side::y_upper)] = BoundaryCondition::dirichlet([](const Vec3&) { return 3e5; });
        return s;
    }();
    FluxOperator op{mesh, k, {}, bc};
    FluxSystem flux = op.assemble();
    TransformChain chain = build_transform(k, well);
    KernelSpec kernel = KernelSpec::annulus(chain.f, 100.0 * (chain.a + chain.b));
    WellLine line = WellLine::segment(a, b);
};

}  // namespace

TEST_CASE("flux scaling factors")
{
    CHECK(xi_isotropic(std::exp(1.0), 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(xi_isotropic(1.5, 1.0), std::invalid_argument);
    // With rho_i = 0 the anisotropic bracket is the isotropic one.
    CHECK(xi_anisotropic(KernelSpec::annulus(0.0, 20.0), 0.2) == doctest::Approx(xi_isotropic(20.0, 0.2)));
    CHECK_THROWS_AS(xi_anisotropic(KernelSpec::annulus(0.0, 1.2), 1.1), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::annulus(2.0, 1.0), std::invalid_argument);
    CHECK(source_from_pressures(2e6, 1e6, 1.0, 1e-12, {}) == doctest::Approx(2.0 * M_PI * 1e6 * 1e-12 * 1e6));
}

TEST_CASE("regularized analytic pressure is continuous and flat inside the kernel")
{
    const auto k = PermeabilityTensor::rotated_anisotropic(10.0, 0.2, 0.4);
    const auto well = WellDescription::through({0, 0, 0}, normalized(Vec3{1, 2, 3}), 0.1, 1e6, 1.0);
    const TransformChain c = build_transform(k, well);
    const AnalyticSolution s(k, well, {}, KernelSpec::annulus(c.f, 50.0 * (c.a + c.b)));
    const double ro = s.kernel()->outer, ri = s.kernel()->inner;
    CHECK(s.pressure_at_radius(ro * (1 - 1e-12)) == doctest::Approx(s.singular_at_radius(ro)).epsilon(1e-9));
    CHECK(s.pressure_at_radius(0.5 * ri) == s.center_pressure());
    CHECK(s.pressure_at_radius(ri * (1 + 1e-12)) == doctest::Approx(s.center_pressure()).epsilon(1e-9));
    CHECK(s.pressure_at_radius(c.a + c.b) < well.pressure);  // regularization lowers p at the bore
    CHECK(s.center_pressure() > s.pressure_at_radius(c.a + c.b));
    CHECK_THROWS_AS(AnalyticSolution(k, well, {}).center_pressure(), std::logic_error);
    CHECK_THROWS_AS(AnalyticSolution(k, well, {}).pressure(well.point), std::domain_error);
}

TEST_CASE("linear field without a well is exact under refinement")
{
    const auto k = PermeabilityTensor::rotated_anisotropic(20.0, 0.5, 0.5);
    const auto exact = [](const Vec3& x) { return 1e5 + 10.0 * x[0] - 3.0 * x[2]; };
    for (int n : {4, 8}) {
        const auto mesh = StructuredMesh::build({{0, 0, 0}, {10, 10, 10}}, {n, n, n});
        const FluxOperator op(mesh, k, {}, BoundarySpec::all_dirichlet(exact));
        SolverOptions opts;
        opts.tolerance = 1e-14;
        const auto sol = solve_pressure(assemble_well(op.assemble(), WellCoupling{}), opts);
        for (std::size_t i = 0; i < mesh.num_cells(); ++i) CHECK(sol.pressure[i] == doctest::Approx(exact(mesh.center(i))).epsilon(1e-12));
    }
}

TEST_CASE("constrained cells keep their values and are excluded from the solve")
{
    const auto mesh = StructuredMesh::build({{0, 0, 0}, {4, 4, 4}}, {4, 4, 4});
    const auto field = [](const Vec3& x) { return 7.0 + x[0] * x[1]; };
    BoundarySpec bc = BoundarySpec::all_dirichlet(field);
    bc.free_region = Box{{0, 0, 1}, {4, 4, 3}};
    bc.constrained_value = field;
    const FluxOperator op(mesh, PermeabilityTensor::isotropic(1e-12), {}, bc);
    const auto sys = assemble_well(op.assemble(), WellCoupling{});
    const auto sol = solve_pressure(sys);
    std::size_t constrained = 0;
    for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
        if (!sys.constrained[i]) continue;
        ++constrained;
        CHECK(sol.pressure[i] == field(mesh.center(i)));
    }
    CHECK(constrained == 32);
}

TEST_CASE("parallel assembly equals the serial reference")
{
    const auto mesh = StructuredMesh::build({{0, 0, 0}, {3, 2, 2}}, {9, 7, 5});
    BoundarySpec bc = BoundarySpec::all_dirichlet([](const Vec3& x) { return x[0] * x[2]; });
    bc.sides[2] = BoundaryCondition{BoundaryKind::neumann, [](const Vec3& x) { return 1e-3 * x[0]; }};
    const FluxOperator op(mesh, PermeabilityTensor::rotated_anisotropic(8.0, 0.3, 1.2), {}, bc);
    const FluxSystem a = op.assemble(), b = op.assemble_serial();
    CHECK(a.matrix.row_ptr == b.matrix.row_ptr);
    CHECK(a.matrix.col_idx == b.matrix.col_idx);
    CHECK(a.matrix.values == b.matrix.values);
    CHECK(a.rhs == b.rhs);
}

TEST_CASE("TPFA rejects full tensors")
{
    const auto mesh = StructuredMesh::build({{0, 0, 0}, {1, 1, 1}}, {2, 2, 2});
    CHECK_THROWS_AS(FluxOperator(mesh, PermeabilityTensor::rotated_anisotropic(5.0, 0.3, 0.3), {},
                                 BoundarySpec::all_dirichlet([](const Vec3&) { return 0.0; }), Scheme::tpfa),
                    std::invalid_argument);
}

TEST_CASE("rate closure reproduces the pressure-driven solution")
{
    SlantedBox box;
    const WellCoupling cpl = couple_distributed(box.op, box.flux, box.well, box.kernel, box.line);
    SolverOptions opts;
    opts.tolerance = 1e-13;
    const auto sys = assemble_well(box.flux, cpl);
    const auto sol = solve_pressure(sys, opts);
    const double q = evaluate_well(cpl, sys.constrained, sol.pressure).total;

    // Q = sum_I Q_I / zeta, and the closure prescribes q per unit length.
    double length = 0.0;
    for (const auto& piece : cpl.pieces)
        if (piece.carrier) length += piece.length;
    const auto rate_sys = assemble_well_rate(box.flux, cpl, q / length);
    REQUIRE(rate_sys.well_unknown.has_value());
    const auto rate_sol = solve_pressure(rate_sys, opts);
    CHECK(rate_sol.pressure[*rate_sys.well_unknown] == doctest::Approx(box.well.pressure).epsilon(1e-8));
    for (std::size_t i = 0; i < box.mesh.num_cells(); ++i)
        CHECK(rate_sol.pressure[i] == doctest::Approx(sol.pressure[i]).epsilon(1e-8));
}

TEST_CASE("Peaceman coupling uses the slanted well index per piece")
{
    SlantedBox box;
    const WellCoupling cpl = couple_peaceman(box.op, box.flux, box.well, box.line);
    REQUIRE_FALSE(cpl.pieces.empty());
    double length = 0.0;
    for (const auto& piece : cpl.pieces) {
        REQUIRE(piece.carrier.has_value());
        length += piece.length;
        WellIndexInput in{box.mesh.spacing(), diagonal_permeability(box.k), box.well.direction, piece.length, 0.1};
        CHECK(piece.coefficient == doctest::Approx(slanted_well_index(in, {})).epsilon(1e-12));
    }
    CHECK(length == doctest::Approx(norm(box.b - box.a)));
    CHECK_THROWS_AS(diagonal_permeability(PermeabilityTensor::rotated_anisotropic(2.0, 0.1, 0.1)), std::invalid_argument);
}

TEST_CASE("error measures vanish for the exact solution")
{
    const auto k = PermeabilityTensor::isotropic(1e-12);
    const auto well = WellDescription::through({0.05, 0.05, 0}, unit(2), 0.1, 1e6, 1.0);
    const AnalyticSolution exact(k, well, {}, KernelSpec::annulus(0.0, 20.0));
    const auto mesh = StructuredMesh::build({{-50, -50, -10}, {50, 50, 10}}, {10, 10, 2});
    std::vector<double> p(mesh.num_cells());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = exact.pressure(mesh.center(i));
    const std::vector<char> free(mesh.num_cells(), 0);
    const ErrorNorms e = error_norms(mesh, free, p, exact, WellCoupling{});
    CHECK(e.pressure == 0.0);
    CHECK(total_source_error(1.1, 1.0) == doctest::Approx(0.1));
    CHECK_THROWS(total_source_error(1.0, 0.0));
}
