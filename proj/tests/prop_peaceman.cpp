#include <doctest.h>

#include "dswell/peaceman.hpp"
#include "support.hpp"

using namespace dswell;

TEST_SUITE("properties")
{
    TEST_CASE("slanted well index reduces to Peaceman for axis-aligned wells")
    {
        testing::Draw draw(43);
        const FluidProperties fluid;
        for (int trial = 0; trial < 100; ++trial) {
            WellIndexInput in;
            in.cell_size = {draw.uniform(1, 20), draw.uniform(1, 20), draw.uniform(1, 20)};
            in.permeability = {draw.uniform(1e-14, 1e-11), draw.uniform(1e-14, 1e-11), draw.uniform(1e-14, 1e-11)};
            in.radius = 0.05;
            for (std::size_t axis = 0; axis < 3; ++axis) {
                in.direction = unit(axis);
                in.length = in.cell_size[axis];
                const double i = in.permeability[(axis + 1) % 3], j = in.permeability[(axis + 2) % 3];
                CHECK(testing::rel_diff(slanted_radius(in), peaceman_radius(in)) <= 1e-12);
                CHECK(testing::rel_diff(slanted_permeability(in), std::sqrt(i * j)) <= 1e-12);
                CHECK(testing::rel_diff(slanted_well_index(in, fluid), peaceman_well_index(in, fluid)) <= 1e-12);
            }
        }
    }

    TEST_CASE("isotropic square cells give r0 = 0.198506 dx")
    {
        for (double dx : {0.5, 1.0, 10.0, 37.0}) {
            WellIndexInput in;
            in.cell_size = {dx, dx, 3.0 * dx};
            in.permeability = {2e-13, 2e-13, 2e-13};
            in.direction = unit(2);
            in.length = 3.0 * dx;
            in.radius = 0.01;
            CHECK(std::abs(peaceman_radius(in) / dx - 0.198506) <= 1e-6);
            CHECK(std::abs(slanted_radius(in) / dx - 0.198506) <= 1e-6);
        }
    }
}
