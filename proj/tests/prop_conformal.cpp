#include <doctest.h>

#include "dswell/conformal.hpp"
#include "support.hpp"

using namespace dswell;

namespace {

// Random point at least `gap` away from the focal segment.
Complex off_cut(testing::Draw& draw, double f, double extent, double gap)
{
    for (;;) {
        const Complex z{draw.uniform(-extent, extent), draw.uniform(-extent, extent)};
        const double dx = std::max(std::abs(z.real()) - f, 0.0);
        if (std::hypot(dx, z.imag()) > gap) return z;
    }
}

}  // namespace

TEST_SUITE("properties")
{
    TEST_CASE("Joukowsky round trips")
    {
        testing::Draw draw(5);
        for (int trial = 0; trial < 50; ++trial) {
            const double b = draw.uniform(0.01, 1.0);
            const JoukowskyMap map(b * draw.uniform(1.0, 30.0), b);
            const double f = map.focal();
            for (int i = 0; i < 40; ++i) {
                const Complex z = off_cut(draw, f, 5.0 * f + 1.0, 1e-3 * (f + 1.0));
                CHECK(std::abs(map.from_w(map.to_w(z)) - z) <= 1e-10 * (std::abs(z) + f));
                const double r = f * draw.uniform(1.001, 50.0) + 1e-3;
                const Complex w = std::polar(r, draw.uniform(-M_PI, M_PI));
                CHECK(std::abs(map.to_w(map.from_w(w)) - w) <= 1e-10 * std::abs(w));
            }
        }
    }

    TEST_CASE("confocal bore ellipse becomes the circle of radius a + b")
    {
        testing::Draw draw(9);
        for (int trial = 0; trial < 50; ++trial) {
            const double b = draw.uniform(0.01, 1.0), a = b * draw.uniform(1.0, 100.0);
            const JoukowskyMap map(a, b);
            for (int i = 0; i < 64; ++i) {
                const double t = 2.0 * M_PI * (i + 0.5) / 64.0;
                const Complex z{a * std::cos(t), b * std::sin(t)};
                CHECK(testing::rel_diff(std::abs(map.to_w(z)), a + b) <= 1e-10);
            }
        }
    }

    TEST_CASE("phi_J matches the finite-difference Jacobian of the inverse map")
    {
        testing::Draw draw(13);
        for (int trial = 0; trial < 30; ++trial) {
            const double b = draw.uniform(0.05, 1.0);
            const JoukowskyMap map(b * draw.uniform(1.0, 20.0), b);
            const double f = map.focal();
            for (int i = 0; i < 30; ++i) {
                const Complex w = std::polar(f * draw.uniform(1.05, 20.0) + 0.01, draw.uniform(-M_PI, M_PI));
                const double h = 1e-5 * std::abs(w);
                // Real 2x2 Jacobian of (Re w, Im w) -> (Re z, Im z).
                const Complex dzdx = (map.from_w(w + h) - map.from_w(w - h)) / (2.0 * h);
                const Complex dzdy = (map.from_w(w + Complex(0, h)) - map.from_w(w - Complex(0, h))) / (2.0 * h);
                const double det = dzdx.real() * dzdy.imag() - dzdx.imag() * dzdy.real();
                CHECK(testing::rel_diff(1.0 / std::abs(det), map.phi_j(w)) <= 1e-6);
            }
        }
    }

    TEST_CASE("pull-back of ln|w| stays harmonic")
    {
        testing::Draw draw(17);
        const JoukowskyMap map(3.0, 1.0);
        const double f = map.focal();
        const auto g = [&](Complex z) { return std::log(std::abs(map.to_w(z))); };
        for (int i = 0; i < 200; ++i) {
            const Complex z = off_cut(draw, f, 4.0 * f, 0.2 * f);
            const double h = 1e-3 * f;
            const Complex dx{h, 0.0}, dy{0.0, h};
            const double lap = (g(z + dx) + g(z - dx) + g(z + dy) + g(z - dy) - 4.0 * g(z)) / (h * h);
            const double grad = std::hypot(g(z + dx) - g(z - dx), g(z + dy) - g(z - dy)) / (2.0 * h);
            CHECK(std::abs(lap) <= 1e-4 * grad / h);
        }
    }

    TEST_CASE("phi_J tends to 4 in the far field")
    {
        const JoukowskyMap map(5.0, 0.5);
        double previous = std::abs(map.phi_j(std::polar(2.0 * map.focal(), 0.3)) - 4.0);
        for (double r : {10.0, 100.0, 1000.0, 1e4}) {
            const double dev = std::abs(map.phi_j(std::polar(r * map.focal(), 0.3)) - 4.0);
            CHECK(dev < previous);
            previous = dev;
        }
        CHECK(previous <= 1e-6);
    }
}
