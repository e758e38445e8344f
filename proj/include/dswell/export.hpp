#pragma once

// Plain-text outputs: point and cell CSV files, legacy ASCII VTK files and
// small result tables. Numbers are printed with a fixed printf format so that
// identical inputs give identical bytes.

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dswell/mesh.hpp"

namespace dswell {

/// Regular point lattice including both box corners.
struct Lattice {
    Box box;
    std::array<int, 3> points{2, 2, 2};

    std::size_t size() const
    {
        return static_cast<std::size_t>(points[0]) * static_cast<std::size_t>(points[1]) * static_cast<std::size_t>(points[2]);
    }
    Vec3 spacing() const;
    /// Point number id, x fastest.
    Vec3 point(std::size_t id) const;
};

/// Evaluates f at every lattice point (parallel, order-independent).
std::vector<double> sample_lattice(const Lattice& lattice, const std::function<double(const Vec3&)>& f);

/// "%.12g"
std::string format_number(double v);

/// Header x,y,z,p and one row per point.
void write_points_csv(std::ostream& os, std::span<const Vec3> points, std::span<const double> values);
void write_lattice_csv(std::ostream& os, const Lattice& lattice, std::span<const double> values);
/// Cell centres and cell values.
void write_cells_csv(std::ostream& os, const StructuredMesh& mesh, std::span<const double> values);

/// DATASET STRUCTURED_POINTS with POINT_DATA.
void write_vtk_lattice(std::ostream& os, const Lattice& lattice, std::span<const double> values,
                       const std::string& title, const std::string& name = "pressure");
/// DATASET RECTILINEAR_GRID with CELL_DATA.
void write_vtk_cells(std::ostream& os, const StructuredMesh& mesh, std::span<const double> values,
                     const std::string& title, const std::string& name = "pressure");

/// Column-oriented result table, written as CSV or as aligned text.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    /// Cells are preformatted strings; the row length must match the header.
    void add_row(std::vector<std::string> row);
    std::size_t num_rows() const { return rows_.size(); }

    void write_csv(std::ostream& os) const;
    void write_text(std::ostream& os) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Opens path for writing (binary mode, so line endings are "\n" everywhere)
/// and calls write; throws std::runtime_error if the file cannot be written.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& write);

}  // namespace dswell
