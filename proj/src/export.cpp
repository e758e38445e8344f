#include "dswell/export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace dswell {

Vec3 Lattice::spacing() const
{
    Vec3 h;
    for (std::size_t d = 0; d < 3; ++d) {
        if (points[d] < 2) throw std::invalid_argument("lattice needs at least two points per direction");
        h[d] = (box.upper[d] - box.lower[d]) / static_cast<double>(points[d] - 1);
    }
    return h;
}

Vec3 Lattice::point(std::size_t id) const
{
    const Vec3 h = spacing();
    const auto n0 = static_cast<std::size_t>(points[0]), n1 = static_cast<std::size_t>(points[1]);
    const std::size_t i = id % n0, j = (id / n0) % n1, k = id / (n0 * n1);
    return {box.lower[0] + h[0] * static_cast<double>(i), box.lower[1] + h[1] * static_cast<double>(j),
            box.lower[2] + h[2] * static_cast<double>(k)};
}

std::vector<double> sample_lattice(const Lattice& lattice, const std::function<double(const Vec3&)>& f)
{
    std::vector<double> out(lattice.size());
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(lattice.point(static_cast<std::size_t>(i)));
    return out;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void check_sizes(std::size_t expected, std::size_t got)
{
    if (expected != got) throw std::invalid_argument("value count does not match the number of points or cells");
}

void write_row(std::ostream& os, const Vec3& x, double p)
{
    os << format_number(x[0]) << ',' << format_number(x[1]) << ',' << format_number(x[2]) << ',' << format_number(p)
       << '\n';
}

void write_values(std::ostream& os, std::span<const double> values)
{
    // Six values per line keeps files readable without huge lines.
    for (std::size_t i = 0; i < values.size(); ++i)
        os << format_number(values[i]) << ((i % 6 == 5 || i + 1 == values.size()) ? '\n' : ' ');
}

void write_coordinates(std::ostream& os, const char* label, double lower, double h, int cells)
{
    os << label << ' ' << cells + 1 << " double\n";
    std::vector<double> c(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) c[static_cast<std::size_t>(i)] = lower + h * i;
    write_values(os, c);
}

}  // namespace

void write_points_csv(std::ostream& os, std::span<const Vec3> points, std::span<const double> values)
{
    check_sizes(points.size(), values.size());
    os << "x,y,z,p\n";
    for (std::size_t i = 0; i < points.size(); ++i) write_row(os, points[i], values[i]);
}

void write_lattice_csv(std::ostream& os, const Lattice& lattice, std::span<const double> values)
{
    check_sizes(lattice.size(), values.size());
    os << "x,y,z,p\n";
    for (std::size_t i = 0; i < lattice.size(); ++i) write_row(os, lattice.point(i), values[i]);
}

void write_cells_csv(std::ostream& os, const StructuredMesh& mesh, std::span<const double> values)
{
    check_sizes(mesh.num_cells(), values.size());
    os << "x,y,z,p\n";
    for (std::size_t i = 0; i < mesh.num_cells(); ++i) write_row(os, mesh.center(i), values[i]);
}

void write_vtk_lattice(std::ostream& os, const Lattice& lattice, std::span<const double> values,
                       const std::string& title, const std::string& name)
{
    check_sizes(lattice.size(), values.size());
    const Vec3 h = lattice.spacing();
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << lattice.points[0] << ' ' << lattice.points[1] << ' ' << lattice.points[2] << '\n';
    os << "ORIGIN " << format_number(lattice.box.lower[0]) << ' ' << format_number(lattice.box.lower[1]) << ' '
       << format_number(lattice.box.lower[2]) << '\n';
    os << "SPACING " << format_number(h[0]) << ' ' << format_number(h[1]) << ' ' << format_number(h[2]) << '\n';
    os << "POINT_DATA " << lattice.size() << '\n';
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    write_values(os, values);
}

void write_vtk_cells(std::ostream& os, const StructuredMesh& mesh, std::span<const double> values,
                     const std::string& title, const std::string& name)
{
    check_sizes(mesh.num_cells(), values.size());
    const CellIndex& n = mesh.counts();
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET RECTILINEAR_GRID\n";
    os << "DIMENSIONS " << n[0] + 1 << ' ' << n[1] + 1 << ' ' << n[2] + 1 << '\n';
    write_coordinates(os, "X_COORDINATES", mesh.bounds().lower[0], mesh.spacing()[0], n[0]);
    write_coordinates(os, "Y_COORDINATES", mesh.bounds().lower[1], mesh.spacing()[1], n[1]);
    write_coordinates(os, "Z_COORDINATES", mesh.bounds().lower[2], mesh.spacing()[2], n[2]);
    os << "CELL_DATA " << mesh.num_cells() << '\n';
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    write_values(os, values);
}

void Table::add_row(std::vector<std::string> row)
{
    if (row.size() != header_.size()) throw std::invalid_argument("table row length does not match the header");
    rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const
{
    const auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void Table::write_text(std::ostream& os) const
{
    std::vector<std::size_t> width(header_.size());
    for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
    for (const auto& r : rows_)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << "  ";
            os << std::string(width[i] - cells[i].size(), ' ') << cells[i];
        }
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& write)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write(out);
    out.flush();
    if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace dswell
