#include "dswell/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dswell/parallel.hpp"

namespace dswell {

double CsrMatrix::at(std::size_t r, std::size_t c) const
{
    const auto begin = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
    const auto end = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
    const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(c));
    if (it == end || *it != static_cast<std::int32_t>(c)) return 0.0;
    return values[static_cast<std::size_t>(it - col_idx.begin())];
}

void CsrMatrix::write_coordinate(std::ostream& os) const
{
    os.precision(17);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) os << r << ' ' << col_idx[k] << ' ' << values[k] << '\n';
}

CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
{
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(rows + 1, 0);
    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        while (i < triplets.size() && triplets[i].row == r) {
            const std::size_t c = triplets[i].col;
            if (c >= cols) throw std::out_of_range("triplet column out of range");
            double v = 0.0;
            while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) v += triplets[i++].value;
            if (v != 0.0) {
                m.col_idx.push_back(static_cast<std::int32_t>(c));
                m.values.push_back(v);
            }
        }
        m.row_ptr[r + 1] = m.values.size();
    }
    if (i != triplets.size()) throw std::out_of_range("triplet row out of range");
    return m;
}

CsrMatrix add_entries(const CsrMatrix& a, std::vector<Triplet> extra)
{
    std::sort(extra.begin(), extra.end(),
              [](const Triplet& x, const Triplet& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
    CsrMatrix m;
    m.rows = a.rows;
    m.cols = a.cols;
    m.row_ptr.assign(a.rows + 1, 0);
    m.col_idx.reserve(a.nnz() + extra.size());
    m.values.reserve(a.nnz() + extra.size());
    std::size_t e = 0;
    for (std::size_t r = 0; r < a.rows; ++r) {
        std::size_t k = a.row_ptr[r];
        const std::size_t k_end = a.row_ptr[r + 1];
        while (k < k_end || (e < extra.size() && extra[e].row == r)) {
            std::size_t col;
            if (k < k_end && (e >= extra.size() || extra[e].row != r || static_cast<std::size_t>(a.col_idx[k]) <= extra[e].col))
                col = static_cast<std::size_t>(a.col_idx[k]);
            else
                col = extra[e].col;
            if (col >= a.cols) throw std::out_of_range("entry column out of range");
            double v = 0.0;
            if (k < k_end && static_cast<std::size_t>(a.col_idx[k]) == col) v += a.values[k++];
            while (e < extra.size() && extra[e].row == r && extra[e].col == col) v += extra[e++].value;
            if (v != 0.0) {
                m.col_idx.push_back(static_cast<std::int32_t>(col));
                m.values.push_back(v);
            }
        }
        m.row_ptr[r + 1] = m.values.size();
    }
    if (e != extra.size()) throw std::out_of_range("entry row out of range");
    return m;
}

void spmv_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y)
{
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[static_cast<std::size_t>(a.col_idx[k])];
        y[r] = s;
    }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y)
{
    const auto n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[static_cast<std::size_t>(a.col_idx[k])];
        y[static_cast<std::size_t>(r)] = s;
    }
}

double dot_serial(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return blocked_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += alpha * x[static_cast<std::size_t>(i)];
}

std::vector<double> residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b)
{
    std::vector<double> r(a.rows);
    spmv(a, x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

}  // namespace dswell
