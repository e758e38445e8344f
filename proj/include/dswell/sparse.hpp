#pragma once

// Row-compressed sparse matrices and the vector kernels used by the Krylov
// solver. Every data-parallel kernel has a serial reference twin that the
// tests and the benchmark compare against.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace dswell {

struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::int32_t> col_idx;
    std::vector<double> values;

    std::size_t nnz() const { return values.size(); }

    /// Value at (r, c) or 0; columns within a row are sorted.
    double at(std::size_t r, std::size_t c) const;

    /// Coordinate text dump: "row col value" per line, 0-based.
    void write_coordinate(std::ostream& os) const;
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Sums duplicates, sorts columns, drops exact zeros.
CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

/// A + sum of the extra entries (duplicates summed, exact zeros dropped).
CsrMatrix add_entries(const CsrMatrix& a, std::vector<Triplet> extra);

/// y = A x (OpenMP over rows).
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void spmv_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double dot_serial(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// r = b - A x
std::vector<double> residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b);

}  // namespace dswell
