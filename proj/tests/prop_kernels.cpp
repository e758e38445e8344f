#include <doctest.h>

#include "dswell/kernels.hpp"
#include "support.hpp"

using namespace dswell;

namespace {

TransformChain anisotropic_chain(double alpha)
{
    const auto k = PermeabilityTensor::rotated_anisotropic(alpha, deg_to_rad(-20.0), deg_to_rad(-20.0));
    const Vec3 psi = rotation_e1(deg_to_rad(20.0)) * rotation_e2(deg_to_rad(20.0)) * unit(2);
    return build_transform(k, WellDescription::through({0, 0, 0}, psi, 0.1, 1e6, 1.0));
}

}  // namespace

TEST_SUITE("properties")
{
    TEST_CASE("renormalized cell weights partition the exact segment integral")
    {
        for (double alpha : {1.0, 10.0, 100.0}) {
            const TransformChain c = anisotropic_chain(alpha);
            for (JacobianMode mode : {JacobianMode::exact, JacobianMode::simplified}) {
                const KernelField field(c, KernelSpec::annulus(c.f, 20.0 * (c.a + c.b)), -3.0, 4.0, mode);
                // Mesh large enough to hold the whole support.
                const auto mesh = StructuredMesh::build({{-40, -40, -40}, {40, 40, 40}}, {16, 16, 16});
                const SegmentWeights w = compute_cell_weights(field, mesh, 0.25);
                double total = 0.0;
                for (const auto& [cell, weight] : w.cells) total += weight;
                CHECK(testing::rel_diff(total, w.exact_total) <= 1e-10);
                CHECK(testing::rel_diff(w.in_mesh_total, w.exact_total) <= 1e-10);
                CHECK(testing::rel_diff(w.sampled_total, w.exact_total) <= 1e-2);
                if (mode == JacobianMode::exact)
                    CHECK(testing::rel_diff(w.exact_total, field.transformed_length()) <= 1e-12);
            }
        }
    }

    TEST_CASE("lattice volume converges at second order")
    {
        for (double alpha : {1.0, 10.0, 100.0}) {
            const TransformChain c = anisotropic_chain(alpha);
            const KernelSpec spec = KernelSpec::annulus(c.f, 5.0 * (c.a + c.b));
            const KernelField field(c, spec, 0.0, 2.0);
            const double exact = field.exact_support_volume();
            std::vector<double> err;
            // Spacings that give exactly n radial bands.
            for (int n : {16, 32, 64}) {
                const double h = field.x_stretch_factor() * (spec.outer - spec.inner) / (n - 0.5);
                err.push_back(std::abs(generate_integration_points(field, h).total_volume() - exact) / exact);
            }
            CAPTURE(alpha);
            if (alpha == 1.0) {
                // No focal segment: the band areas are exact.
                CHECK(err[2] <= 1e-10);
                continue;
            }
            for (std::size_t i = 1; i < err.size(); ++i) {
                const double order = std::log2(err[i - 1] / err[i]);
                CAPTURE(order);
                CHECK(order > 1.7);
                CHECK(order < 2.3);
            }
        }
    }

    TEST_CASE("parallel cell weights equal the serial reference bit for bit")
    {
        const TransformChain c = anisotropic_chain(50.0);
        const KernelField field(c, KernelSpec::annulus(c.f, 50.0 * (c.a + c.b)), -5.0, 5.0);
        const auto mesh = StructuredMesh::build({{-30, -30, -20}, {30, 30, 20}}, {12, 12, 8});
        const SegmentWeights a = compute_cell_weights(field, mesh, 0.5);
        const SegmentWeights b = compute_cell_weights_serial(field, mesh, 0.5);
        REQUIRE(a.cells.size() == b.cells.size());
        for (std::size_t i = 0; i < a.cells.size(); ++i) {
            CHECK(a.cells[i].first == b.cells[i].first);
            CHECK(a.cells[i].second == b.cells[i].second);
        }
        CHECK(a.sampled_total == b.sampled_total);
    }
}
