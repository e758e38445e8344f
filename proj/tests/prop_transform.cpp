#include <doctest.h>

#include "dswell/tensor_geometry.hpp"
#include "support.hpp"

using namespace dswell;

TEST_SUITE("properties")
{
    TEST_CASE("stretch is isochoric and zeta is the inverse axial scale")
    {
        testing::Draw draw;
        for (int trial = 0; trial < 200; ++trial) {
            const double alpha = draw.alpha(1000.0);
            const auto k = PermeabilityTensor::rotated_anisotropic(alpha, draw.uniform(-M_PI, M_PI),
                                                                   draw.uniform(-M_PI, M_PI), draw.uniform(1e-14, 1e-11));
            const auto well = WellDescription::through({1, 2, 3}, draw.direction(), draw.uniform(0.01, 1.0), 1e6, 1.0);
            const TransformChain c = build_transform(k, well);
            CHECK(std::abs(c.stretch.determinant() - 1.0) <= 1e-10);
            CHECK(testing::rel_diff(c.k_iso, std::cbrt(k.determinant())) <= 1e-12);
            // Area of the bore ellipse a b pi equals the cylinder section pi r^2 / |S psi|.
            CHECK(testing::rel_diff(c.zeta * c.axial_scale, 1.0) <= 1e-10);
            CHECK(testing::rel_diff(c.zeta, c.a * c.b / (well.radius * well.radius)) <= 1e-12);
            CHECK(c.a >= c.b);
        }
    }

    TEST_CASE("well cylinder maps onto the canonical ellipse")
    {
        testing::Draw draw(7);
        for (int trial = 0; trial < 100; ++trial) {
            const auto k = PermeabilityTensor::rotated_anisotropic(draw.alpha(500.0), draw.uniform(-M_PI, M_PI),
                                                                   draw.uniform(-M_PI, M_PI));
            const Vec3 psi = draw.direction();
            const Vec3 x0{draw.uniform(-5, 5), draw.uniform(-5, 5), draw.uniform(-5, 5)};
            const double r = draw.uniform(0.05, 2.0);
            const TransformChain c = build_transform(k, WellDescription::through(x0, psi, r, 1e6, 1.0));
            const auto [e1, e2] = testing::normal_frame(psi);
            double worst = 0.0;
            for (int i = 0; i < 64; ++i) {
                const double t = 2.0 * M_PI * i / 64.0;
                const Vec3 x = x0 + r * (std::cos(t) * e1 + std::sin(t) * e2) + draw.uniform(-10, 10) * psi;
                const Vec3 v = c.forward(x);
                worst = std::max(worst, std::abs(v[0] * v[0] / (c.a * c.a) + v[1] * v[1] / (c.b * c.b) - 1.0));
                // Round trip through the inverse map.
                CHECK(norm(c.inverse(v) - x) <= 1e-9 * (1.0 + norm(x)));
            }
            CHECK(worst <= 1e-9);
        }
    }

    TEST_CASE("Rodrigues alignment is a proper rotation onto psi")
    {
        testing::Draw draw(11);
        std::vector<Vec3> dirs{unit(2), -unit(2), unit(0), -unit(1), normalized(Vec3{1, 1, -1e-9})};
        for (int i = 0; i < 200; ++i) dirs.push_back(draw.direction());
        for (const Vec3& psi : dirs) {
            const Mat3 r = rodrigues_align(psi);
            CHECK(norm(r * unit(2) - psi) <= 1e-12);
            CHECK(std::abs(r.determinant() - 1.0) <= 1e-12);
            CHECK((r.transposed() * r - Mat3::identity()).max_abs() <= 1e-12);
        }
    }

    TEST_CASE("eigendecomposition reconstructs K with a proper rotation")
    {
        testing::Draw draw(3);
        for (int trial = 0; trial < 200; ++trial) {
            const auto k = PermeabilityTensor::rotated_anisotropic(draw.alpha(1e4), draw.uniform(-M_PI, M_PI),
                                                                   draw.uniform(-M_PI, M_PI));
            const SymmetricEigen e = eigendecompose(k.entries());
            const Mat3 back = e.vectors * Mat3::diag(e.values[0], e.values[1], e.values[2]) * e.vectors.transposed();
            CHECK((back - k.entries()).max_abs() <= 1e-12 * k.entries().max_abs());
            CHECK(std::abs(e.vectors.determinant() - 1.0) <= 1e-12);
            CHECK(e.values[0] <= e.values[1]);
            CHECK(e.values[1] <= e.values[2]);
        }
    }
}
