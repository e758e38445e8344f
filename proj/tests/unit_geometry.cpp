#include <doctest.h>

#include "dswell/conformal.hpp"
#include "dswell/mesh.hpp"
#include "dswell/tensor_geometry.hpp"
#include "support.hpp"

using namespace dswell;

TEST_CASE("rotated anisotropic tensor has eigenvalues scale * {1, 1, alpha}")
{
    const auto k = PermeabilityTensor::rotated_anisotropic(50.0, 0.3, -1.1, 2e-12);
    CHECK(testing::rel_diff(k.eigenvalues()[0], 2e-12) <= 1e-12);
    CHECK(testing::rel_diff(k.eigenvalues()[1], 2e-12) <= 1e-12);
    CHECK(testing::rel_diff(k.eigenvalues()[2], 1e-10) <= 1e-12);
    CHECK_FALSE(k.is_diagonal());
    CHECK(PermeabilityTensor::rotated_anisotropic(0.1, 0.0, deg_to_rad(90.0)).is_diagonal(1e-12));
}

TEST_CASE("invalid tensors and wells are rejected")
{
    CHECK_THROWS_AS(PermeabilityTensor(Mat3::diag(1.0, -1.0, 1.0)), std::invalid_argument);
    Mat3 asym = Mat3::identity();
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(PermeabilityTensor{asym}, std::invalid_argument);
    CHECK_THROWS_AS(WellDescription::through({0, 0, 0}, {0, 0, 0}, 0.1, 1e6, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WellDescription::through({0, 0, 0}, {0, 0, 1}, 0.0, 1e6, 1.0), std::invalid_argument);
}

TEST_CASE("antipodal Rodrigues alignment uses the fallback axis")
{
    const Mat3 r = rodrigues_align(-unit(2));
    CHECK(norm(r * unit(2) + unit(2)) <= 1e-15);
    CHECK(norm(r * unit(0) - unit(0)) <= 1e-15);
}

TEST_CASE("well along a principal axis of a diagonal tensor")
{
    // K = diag(4, 1, 1) k, well along e3: the bore is stretched along e1.
    const auto k = PermeabilityTensor(Mat3::diag(4e-12, 1e-12, 1e-12));
    const TransformChain c = build_transform(k, WellDescription::through({0, 0, 0}, unit(2), 0.1, 1e6, 1.0));
    CHECK(testing::rel_diff(c.k_iso, std::cbrt(4.0) * 1e-12) <= 1e-12);
    // S = k_I^{1/2} K^{-1/2}: stretches 4^{1/6}/2 along e1 and 4^{1/6} along e2, e3.
    CHECK(testing::rel_diff(c.a, 0.1 * std::pow(4.0, 1.0 / 6.0)) <= 1e-12);
    CHECK(testing::rel_diff(c.b, 0.1 * std::pow(4.0, 1.0 / 6.0) / 2.0) <= 1e-12);
    CHECK(testing::rel_diff(c.zeta, 1.0 / std::pow(4.0, 1.0 / 6.0)) <= 1e-12);
}

TEST_CASE("Joukowsky map special cases")
{
    const JoukowskyMap circle(0.5, 0.5);
    CHECK(circle.focal() == 0.0);
    CHECK(std::abs(circle.to_w({0.3, 0.4}) - Complex(0.6, 0.8)) <= 1e-15);
    CHECK(circle.phi_j({1.0, 1.0}) == 4.0);

    const JoukowskyMap map(5.0, 3.0);
    CHECK(map.focal() == doctest::Approx(4.0));
    CHECK(map.circle_radius() == doctest::Approx(8.0));
    CHECK_THROWS_AS(map.to_w({1.0, 0.0}), std::domain_error);
    CHECK(std::abs(map.to_w_unchecked({1.0, 0.0})) == doctest::Approx(4.0));
    CHECK_THROWS_AS(map.from_w({2.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(JoukowskyMap(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("mesh indexing and point location")
{
    const auto mesh = StructuredMesh::build({{0, 0, 0}, {4, 3, 2}}, {4, 3, 2});
    CHECK(mesh.num_cells() == 24);
    CHECK(mesh.h_max() == doctest::Approx(std::sqrt(3.0)));
    for (std::size_t id = 0; id < mesh.num_cells(); ++id) {
        CHECK(mesh.index(mesh.cell_of(id)) == id);
        CHECK(mesh.locate(mesh.center(id)) == id);
    }
    CHECK(mesh.locate({1.0, 0.5, 0.5}) == mesh.index({1, 0, 0}));
    CHECK(mesh.locate({4.0, 3.0, 2.0}) == mesh.index({3, 2, 1}));
    CHECK_FALSE(mesh.locate({4.1, 0, 0}).has_value());
    CHECK(mesh.refined().counts() == CellIndex{8, 6, 4});
    CHECK_THROWS_AS(StructuredMesh::build({{0, 0, 0}, {1, 1, 1}}, {0, 1, 1}), std::invalid_argument);
}

TEST_CASE("well traversal covers the clipped line exactly")
{
    testing::Draw draw(47);
    const auto mesh = StructuredMesh::build({{-10, -10, -5}, {10, 10, 15}}, {7, 9, 11});
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 psi = draw.direction();
        const Vec3 p{draw.uniform(-3, 3), draw.uniform(-3, 3), draw.uniform(0, 10)};
        const WellLine line{p, psi};
        const auto clip = clip_line(line, mesh.bounds());
        REQUIRE(clip.has_value());
        const auto pieces = intersect_well(mesh, line);
        double total = 0.0;
        for (const auto& piece : pieces) {
            total += piece.length;
            CHECK(mesh.cell_box(piece.cell).contains(piece.midpoint));
        }
        CHECK(total == doctest::Approx(clip->second - clip->first).epsilon(1e-12));

        // Moving the reference point along the axis does not change the pieces.
        const auto shifted = intersect_well(mesh, WellLine{p + 3.7 * psi, psi});
        REQUIRE(shifted.size() == pieces.size());
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            CHECK(shifted[i].cell == pieces[i].cell);
            CHECK(shifted[i].length == doctest::Approx(pieces[i].length).epsilon(1e-9));
        }
    }
    CHECK(intersect_well(mesh, WellLine{{50, 50, 50}, unit(0)}).empty());
}
