#include <doctest.h>

#include <sstream>

#include "dswell/export.hpp"
#include "dswell/scenario.hpp"

using namespace dswell;

namespace {

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("scenario JSON round trip is lossless")
{
    for (Scenario s : {Scenario::infinite_well(50.0), Scenario::slanted_box()}) {
        s.kernel.inner = 0.3;
        s.kernel.jacobian = JacobianMode::simplified;
        s.well.closure = WellClosure::rate;
        s.solver.preconditioner = PreconditionerKind::ilut;
        const nlohmann::json j = to_json(s);
        const nlohmann::json again = to_json(scenario_from_json(j));
        CHECK(j == again);
        CHECK(j.dump() == again.dump());
    }
    Scenario explicit_k = Scenario::infinite_well(1.0);
    explicit_k.permeability.tensor = Mat3::diag(1e-12, 2e-12, 3e-12);
    CHECK(to_json(scenario_from_json(to_json(explicit_k))) == to_json(explicit_k));
}

TEST_CASE("partial scenario files fill in defaults")
{
    const auto s = scenario_from_json(nlohmann::json::parse(R"({"permeability": {"alpha": 10}, "cells": [4, 4, 4]})"));
    CHECK(s.permeability.alpha == 10.0);
    CHECK(s.cells == CellIndex{4, 4, 4});
    CHECK(s.well.radius == 0.1);
    CHECK(s.well.pressure == 1e6);
    CHECK(s.fluid.density == 1000.0);
    CHECK(s.fluid.viscosity == 1e-3);
}

TEST_CASE("invalid scenario files are rejected")
{
    using nlohmann::json;
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"permeabilty": {}})")), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"model": "other"})")), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"well": {"radius": -1}})")), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"well": {"from": [0, 0, 0]}})")), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"kernel": {"outer_ratio": 10, "outer": 3}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"cells": [1, 0, 1]})")), std::invalid_argument);
    CHECK_THROWS(load_scenario("/nonexistent/dir/scenario.json"));
}

TEST_CASE("2x2x2 lattice export")
{
    const Lattice lattice{{{0, 0, 0}, {1, 2, 3}}, {2, 2, 2}};
    const auto p = sample_lattice(lattice, [](const Vec3& x) { return x[0] + 10 * x[1] + 100 * x[2]; });
    std::ostringstream csv, vtk;
    write_lattice_csv(csv, lattice, p);
    write_vtk_lattice(vtk, lattice, p, "test");
    const auto rows = lines(csv.str());
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "x,y,z,p");
    CHECK(rows[1] == "0,0,0,0");
    CHECK(rows[2] == "1,0,0,1");
    CHECK(rows[8] == "1,2,3,321");
    const auto v = lines(vtk.str());
    CHECK(v[0] == "# vtk DataFile Version 3.0");
    CHECK(v[2] == "ASCII");
    CHECK(v[3] == "DATASET STRUCTURED_POINTS");
    CHECK(v[4] == "DIMENSIONS 2 2 2");
    CHECK(v[6] == "SPACING 1 2 3");
    CHECK(v[7] == "POINT_DATA 8");
}

TEST_CASE("cell data export matches the mesh and is byte stable")
{
    const auto mesh = StructuredMesh::build({{-1, 0, 0}, {1, 1, 1}}, {4, 3, 2});
    std::vector<double> p(mesh.num_cells());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 1e6 + 0.1 * static_cast<double>(i);
    std::ostringstream a, b, csv;
    write_vtk_cells(a, mesh, p, "cells");
    write_vtk_cells(b, mesh, p, "cells");
    CHECK(a.str() == b.str());
    const auto v = lines(a.str());
    CHECK(v[3] == "DATASET RECTILINEAR_GRID");
    CHECK(v[4] == "DIMENSIONS 5 4 3");
    CHECK(std::count(v.begin(), v.end(), "CELL_DATA 24") == 1);
    CHECK(std::count(v.begin(), v.end(), "SCALARS pressure double 1") == 1);
    write_cells_csv(csv, mesh, p);
    CHECK(lines(csv.str()).size() == mesh.num_cells() + 1);
    std::ostringstream bad;
    CHECK_THROWS_AS(write_cells_csv(bad, mesh, std::vector<double>(3)), std::invalid_argument);
    CHECK_THROWS(write_file("/nonexistent/dir/out.csv", [](std::ostream&) {}));
}

TEST_CASE("tables")
{
    Table t({"a", "long_name"});
    t.add_row({"1", "2"});
    t.add_row({"333", "4"});
    std::ostringstream csv, text;
    t.write_csv(csv);
    t.write_text(text);
    CHECK(csv.str() == "a,long_name\n1,2\n333,4\n");
    CHECK(lines(text.str())[2] == "333          4");
    CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}
