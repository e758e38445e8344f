#include "dswell/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <stdexcept>

namespace dswell {

using nlohmann::json;

PermeabilityTensor PermeabilitySpec::build() const
{
    if (tensor) return PermeabilityTensor(*tensor);
    if (!(alpha > 0.0) || !(scale > 0.0)) throw std::invalid_argument("permeability alpha and scale must be positive");
    return PermeabilityTensor::rotated_anisotropic(alpha, deg_to_rad(gamma1_deg), deg_to_rad(gamma2_deg), scale);
}

WellDescription WellSpec::description() const
{
    if (is_segment()) return WellDescription::through(*from, *to - *from, radius, pressure, rate);
    const Vec3 psi = rotation_e1(deg_to_rad(beta1_deg)) * rotation_e2(deg_to_rad(beta2_deg)) * unit(2);
    return WellDescription::through(point, psi, radius, pressure, rate);
}

WellLine WellSpec::line() const
{
    if (is_segment()) return WellLine::segment(*from, *to);
    const WellDescription d = description();
    return WellLine{d.point, d.direction};
}

KernelSpec KernelConfig::build(const TransformChain& chain, double h_max) const
{
    const double r_circle = chain.a + chain.b;
    double ro = outer ? *outer : outer_ratio * r_circle;
    if (adaptive) {
        if (!(adaptive_reference_h > 0.0)) throw std::invalid_argument("adaptive kernel needs a positive reference h");
        ro *= h_max / adaptive_reference_h;
    }
    return KernelSpec::annulus(inner.value_or(chain.f), ro);
}

Scenario Scenario::infinite_well(double alpha)
{
    Scenario s;
    s.name = "infinite-well";
    s.permeability.alpha = alpha;
    s.boundary.analytic = true;
    s.boundary.free_region = Box{{-100.0, -100.0, 0.0}, {100.0, 100.0, 100.0}};
    return s;
}

Scenario Scenario::slanted_box()
{
    Scenario s;
    s.name = "slanted-box";
    s.domain = Box{{-50.0, -100.0, 0.0}, {50.0, 100.0, 100.0}};
    s.cells = {10, 20, 10};
    s.permeability.alpha = 0.1;
    s.permeability.gamma1_deg = 0.0;
    s.permeability.gamma2_deg = 90.0;
    s.well.from = Vec3{-20.0, -50.0, 25.0};
    s.well.to = Vec3{20.0, 50.0, 75.0};
    s.boundary.analytic = false;
    s.boundary.sides[static_cast<std::size_t>(Side::y_lower)] = {BoundaryKind::dirichlet, 1e5};
    s.boundary.sides[static_cast<std::size_t>(Side::y_upper)] = {BoundaryKind::dirichlet, 3e5};
    return s;
}

StructuredMesh Scenario::mesh(int refinement) const
{
    if (refinement < 0 || refinement > 10) throw std::invalid_argument("refinement level out of range");
    const int f = 1 << refinement;
    return StructuredMesh::build(domain, {cells[0] * f, cells[1] * f, cells[2] * f});
}

void Scenario::validate() const
{
    for (std::size_t d = 0; d < 3; ++d) {
        if (!(domain.upper[d] > domain.lower[d])) throw std::invalid_argument("domain has non-positive extent");
        if (cells[d] <= 0) throw std::invalid_argument("cell counts must be positive");
    }
    permeability.build();
    fluid.validate();
    if (!(well.radius > 0.0)) throw std::invalid_argument("well radius must be positive");
    if (well.from.has_value() != well.to.has_value()) throw std::invalid_argument("well segment needs both end points");
    if (well.is_segment() && boundary.analytic)
        throw std::invalid_argument("the analytic boundary setup needs an infinite well");
    if (boundary.free_region && !boundary.analytic)
        throw std::invalid_argument("a free region is only used with the analytic boundary setup");
    if (!(kernel.outer_ratio > 0.0)) throw std::invalid_argument("kernel outer ratio must be positive");
    if (kernel.sampling_spacing < 0.0) throw std::invalid_argument("sampling spacing must not be negative");
    if (!(solver.tolerance > 0.0) || solver.max_iterations <= 0) throw std::invalid_argument("invalid solver options");
    for (int n : output.lattice)
        if (n < 2) throw std::invalid_argument("output lattice needs at least two points per direction");
}

std::string to_string(WellModel m) { return m == WellModel::distributed ? "distributed" : "peaceman"; }
std::string to_string(Scheme s) { return s == Scheme::mpfa_o ? "mpfa-o" : "tpfa"; }
std::string to_string(JacobianMode m) { return m == JacobianMode::exact ? "exact" : "simplified"; }

namespace {

constexpr std::array<const char*, 6> side_names{"x_lower", "x_upper", "y_lower", "y_upper", "z_lower", "z_upper"};

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec_from(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument(where + ": expected three numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json box_json(const Box& b) { return {{"lower", vec_json(b.lower)}, {"upper", vec_json(b.upper)}}; }

Box box_from(const json& j, const std::string& where)
{
    check_keys(j, {"lower", "upper"}, where);
    return {vec_from(j.at("lower"), where + ".lower"), vec_from(j.at("upper"), where + ".upper")};
}

template <class T>
void read(const json& j, const char* key, T& out)
{
    if (j.contains(key)) out = j.at(key).get<T>();
}

template <class Enum>
Enum enum_from(const json& j, std::initializer_list<std::pair<const char*, Enum>> options, const std::string& where)
{
    const auto name = j.get<std::string>();
    for (const auto& [n, v] : options)
        if (name == n) return v;
    throw std::invalid_argument(where + ": unknown value '" + name + "'");
}

}  // namespace

json to_json(const Scenario& s)
{
    json j;
    j["name"] = s.name;
    j["domain"] = box_json(s.domain);
    j["cells"] = json::array({s.cells[0], s.cells[1], s.cells[2]});

    json k;
    if (s.permeability.tensor) {
        const Mat3& m = *s.permeability.tensor;
        k["tensor"] = json::array({json::array({m(0, 0), m(0, 1), m(0, 2)}), json::array({m(1, 0), m(1, 1), m(1, 2)}),
                                   json::array({m(2, 0), m(2, 1), m(2, 2)})});
    } else {
        k["alpha"] = s.permeability.alpha;
        k["gamma1_deg"] = s.permeability.gamma1_deg;
        k["gamma2_deg"] = s.permeability.gamma2_deg;
        k["scale"] = s.permeability.scale;
    }
    j["permeability"] = k;
    j["fluid"] = {{"density", s.fluid.density}, {"viscosity", s.fluid.viscosity}};

    json w;
    if (s.well.is_segment()) {
        w["from"] = vec_json(*s.well.from);
        w["to"] = vec_json(*s.well.to);
    } else {
        w["beta1_deg"] = s.well.beta1_deg;
        w["beta2_deg"] = s.well.beta2_deg;
        w["point"] = vec_json(s.well.point);
    }
    w["radius"] = s.well.radius;
    w["pressure"] = s.well.pressure;
    w["rate"] = s.well.rate;
    w["closure"] = s.well.closure == WellClosure::pressure ? "pressure" : "rate";
    j["well"] = w;

    json kc;
    kc["inner"] = s.kernel.inner ? json(*s.kernel.inner) : json("focal");
    if (s.kernel.outer)
        kc["outer"] = *s.kernel.outer;
    else
        kc["outer_ratio"] = s.kernel.outer_ratio;
    kc["adaptive"] = s.kernel.adaptive;
    kc["adaptive_reference_h"] = s.kernel.adaptive_reference_h;
    kc["jacobian"] = to_string(s.kernel.jacobian);
    kc["sampling_spacing"] = s.kernel.sampling_spacing;
    j["kernel"] = kc;

    j["model"] = to_string(s.model);
    j["scheme"] = to_string(s.scheme);

    json b;
    b["type"] = s.boundary.analytic ? "analytic" : "sides";
    if (!s.boundary.analytic) {
        json sides;
        for (std::size_t i = 0; i < 6; ++i) {
            const auto& sv = s.boundary.sides[i];
            sides[side_names[i]] = {{"type", sv.kind == BoundaryKind::dirichlet ? "dirichlet" : "neumann"},
                                    {"value", sv.value}};
        }
        b["sides"] = sides;
    }
    if (s.boundary.free_region) b["free_region"] = box_json(*s.boundary.free_region);
    j["boundary"] = b;

    const char* pre = s.solver.preconditioner == PreconditionerKind::ilu0    ? "ilu0"
                      : s.solver.preconditioner == PreconditionerKind::ilut ? "ilut"
                                                                            : "jacobi";
    j["solver"] = {{"tolerance", s.solver.tolerance},
                   {"max_iterations", s.solver.max_iterations},
                   {"preconditioner", pre},
                   {"direct_fallback_below", s.solver.direct_fallback_below}};
    j["output"] = {{"csv", s.output.csv},
                   {"vtk", s.output.vtk},
                   {"lattice", json::array({s.output.lattice[0], s.output.lattice[1], s.output.lattice[2]})}};
    return j;
}

Scenario scenario_from_json(const json& j)
{
    check_keys(j, {"name", "domain", "cells", "permeability", "fluid", "well", "kernel", "model", "scheme", "boundary",
                   "solver", "output"},
               "scenario");
    Scenario s;
    read(j, "name", s.name);
    if (j.contains("domain")) s.domain = box_from(j.at("domain"), "domain");
    if (j.contains("cells")) {
        const auto c = j.at("cells").get<std::vector<int>>();
        if (c.size() != 3) throw std::invalid_argument("cells: expected three integers");
        s.cells = {c[0], c[1], c[2]};
    }
    if (j.contains("permeability")) {
        const json& k = j.at("permeability");
        check_keys(k, {"alpha", "gamma1_deg", "gamma2_deg", "scale", "tensor"}, "permeability");
        if (k.contains("tensor")) {
            if (k.contains("alpha") || k.contains("gamma1_deg") || k.contains("gamma2_deg"))
                throw std::invalid_argument("permeability: give either a tensor or alpha and angles");
            const auto rows = k.at("tensor").get<std::vector<std::vector<double>>>();
            if (rows.size() != 3) throw std::invalid_argument("permeability.tensor: expected a 3x3 matrix");
            Mat3 m;
            for (std::size_t r = 0; r < 3; ++r) {
                if (rows[r].size() != 3) throw std::invalid_argument("permeability.tensor: expected a 3x3 matrix");
                for (std::size_t c = 0; c < 3; ++c) m(r, c) = rows[r][c];
            }
            s.permeability.tensor = m;
        }
        read(k, "alpha", s.permeability.alpha);
        read(k, "gamma1_deg", s.permeability.gamma1_deg);
        read(k, "gamma2_deg", s.permeability.gamma2_deg);
        read(k, "scale", s.permeability.scale);
    }
    if (j.contains("fluid")) {
        const json& f = j.at("fluid");
        check_keys(f, {"density", "viscosity"}, "fluid");
        read(f, "density", s.fluid.density);
        read(f, "viscosity", s.fluid.viscosity);
    }
    if (j.contains("well")) {
        const json& w = j.at("well");
        check_keys(w, {"beta1_deg", "beta2_deg", "point", "from", "to", "radius", "pressure", "rate", "closure"}, "well");
        if ((w.contains("from") || w.contains("to")) && (w.contains("beta1_deg") || w.contains("beta2_deg")))
            throw std::invalid_argument("well: give either end points or angles");
        read(w, "beta1_deg", s.well.beta1_deg);
        read(w, "beta2_deg", s.well.beta2_deg);
        if (w.contains("point")) s.well.point = vec_from(w.at("point"), "well.point");
        if (w.contains("from")) s.well.from = vec_from(w.at("from"), "well.from");
        if (w.contains("to")) s.well.to = vec_from(w.at("to"), "well.to");
        read(w, "radius", s.well.radius);
        read(w, "pressure", s.well.pressure);
        read(w, "rate", s.well.rate);
        if (w.contains("closure"))
            s.well.closure = enum_from<WellClosure>(w.at("closure"),
                                                    {{"pressure", WellClosure::pressure}, {"rate", WellClosure::rate}},
                                                    "well.closure");
    }
    if (j.contains("kernel")) {
        const json& k = j.at("kernel");
        check_keys(k, {"inner", "outer_ratio", "outer", "adaptive", "adaptive_reference_h", "jacobian", "sampling_spacing"},
                   "kernel");
        if (k.contains("inner")) {
            const json& in = k.at("inner");
            if (in.is_string()) {
                if (in.get<std::string>() != "focal") throw std::invalid_argument("kernel.inner: expected \"focal\" or a number");
                s.kernel.inner.reset();
            } else {
                s.kernel.inner = in.get<double>();
            }
        }
        if (k.contains("outer") && k.contains("outer_ratio"))
            throw std::invalid_argument("kernel: give either outer or outer_ratio");
        read(k, "outer_ratio", s.kernel.outer_ratio);
        if (k.contains("outer")) s.kernel.outer = k.at("outer").get<double>();
        read(k, "adaptive", s.kernel.adaptive);
        read(k, "adaptive_reference_h", s.kernel.adaptive_reference_h);
        if (k.contains("jacobian"))
            s.kernel.jacobian = enum_from<JacobianMode>(
                k.at("jacobian"), {{"exact", JacobianMode::exact}, {"simplified", JacobianMode::simplified}}, "kernel.jacobian");
        read(k, "sampling_spacing", s.kernel.sampling_spacing);
    }
    if (j.contains("model"))
        s.model = enum_from<WellModel>(j.at("model"),
                                       {{"distributed", WellModel::distributed}, {"peaceman", WellModel::peaceman}}, "model");
    if (j.contains("scheme"))
        s.scheme = enum_from<Scheme>(j.at("scheme"), {{"mpfa-o", Scheme::mpfa_o}, {"tpfa", Scheme::tpfa}}, "scheme");
    if (j.contains("boundary")) {
        const json& b = j.at("boundary");
        check_keys(b, {"type", "sides", "free_region"}, "boundary");
        const std::string type = b.value("type", std::string("analytic"));
        if (type != "analytic" && type != "sides") throw std::invalid_argument("boundary.type: expected analytic or sides");
        s.boundary.analytic = type == "analytic";
        s.boundary.free_region.reset();
        if (b.contains("free_region")) s.boundary.free_region = box_from(b.at("free_region"), "boundary.free_region");
        if (b.contains("sides")) {
            if (s.boundary.analytic) throw std::invalid_argument("boundary: sides are only used with type \"sides\"");
            const json& sides = b.at("sides");
            check_keys(sides, {"x_lower", "x_upper", "y_lower", "y_upper", "z_lower", "z_upper"}, "boundary.sides");
            for (std::size_t i = 0; i < 6; ++i) {
                if (!sides.contains(side_names[i])) continue;
                const json& sv = sides.at(side_names[i]);
                const std::string where = std::string("boundary.sides.") + side_names[i];
                check_keys(sv, {"type", "value"}, where);
                s.boundary.sides[i].kind = enum_from<BoundaryKind>(
                    sv.at("type"), {{"dirichlet", BoundaryKind::dirichlet}, {"neumann", BoundaryKind::neumann}}, where);
                read(sv, "value", s.boundary.sides[i].value);
            }
        }
    }
    if (j.contains("solver")) {
        const json& v = j.at("solver");
        check_keys(v, {"tolerance", "max_iterations", "preconditioner", "direct_fallback_below"}, "solver");
        read(v, "tolerance", s.solver.tolerance);
        read(v, "max_iterations", s.solver.max_iterations);
        read(v, "direct_fallback_below", s.solver.direct_fallback_below);
        if (v.contains("preconditioner"))
            s.solver.preconditioner = enum_from<PreconditionerKind>(
                v.at("preconditioner"),
                {{"ilu0", PreconditionerKind::ilu0}, {"ilut", PreconditionerKind::ilut}, {"jacobi", PreconditionerKind::jacobi}},
                "solver.preconditioner");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, {"csv", "vtk", "lattice"}, "output");
        read(o, "csv", s.output.csv);
        read(o, "vtk", s.output.vtk);
        if (o.contains("lattice")) {
            const auto l = o.at("lattice").get<std::vector<int>>();
            if (l.size() != 3) throw std::invalid_argument("output.lattice: expected three integers");
            s.output.lattice = {l[0], l[1], l[2]};
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(s).dump(2) << '\n';
}

}  // namespace dswell
