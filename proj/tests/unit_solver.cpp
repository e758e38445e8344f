#include <doctest.h>

#include "dswell/parallel.hpp"
#include "dswell/solver.hpp"
#include "support.hpp"

using namespace dswell;

namespace {

// Nonsymmetric 1-D convection-diffusion matrix.
CsrMatrix convection_diffusion(std::size_t n, double peclet)
{
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i > 0) t.push_back({i, i - 1, -1.0 - peclet});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0 + peclet});
    }
    return csr_from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("triplets are summed, sorted and zero-free")
{
    const CsrMatrix a = csr_from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 2, 4.0}, {0, 0, 0.0}});
    CHECK(a.nnz() == 3);
    CHECK(a.at(0, 1) == 2.0);
    CHECK(a.at(1, 2) == 5.0);
    CHECK(a.at(0, 0) == 0.0);
    const CsrMatrix b = add_entries(a, {{0, 1, -2.0}, {0, 2, 7.0}});
    CHECK(b.nnz() == 3);
    CHECK(b.at(0, 1) == 0.0);
    CHECK(b.at(0, 2) == 7.0);
}

TEST_CASE("parallel vector kernels match their serial twins")
{
    testing::Draw draw(53);
    const CsrMatrix a = convection_diffusion(5000, 0.3);
    std::vector<double> x(a.cols), y1(a.rows), y2(a.rows);
    for (auto& v : x) v = draw.uniform(-1, 1);
    spmv(a, x, y1);
    spmv_serial(a, x, y2);
    CHECK(y1 == y2);
    // The blocked dot product is reproducible, and close to the plain sum.
    CHECK(dot(x, y1) == dot(x, y1));
    CHECK(dot(x, y1) == doctest::Approx(dot_serial(x, y1)).epsilon(1e-12));
    const double s = blocked_sum(10000, [](std::size_t i) { return static_cast<double>(i); });
    CHECK(s == 49995000.0);
}

TEST_CASE("BiCGSTAB solves a nonsymmetric system")
{
    for (auto kind : {PreconditionerKind::ilu0, PreconditionerKind::jacobi, PreconditionerKind::ilut}) {
        const CsrMatrix a = convection_diffusion(400, 0.4);
        std::vector<double> x_true(a.rows), b(a.rows);
        for (std::size_t i = 0; i < a.rows; ++i) x_true[i] = std::sin(0.01 * static_cast<double>(i));
        spmv(a, x_true, b);
        SolverOptions opts;
        opts.preconditioner = kind;
        opts.tolerance = 1e-12;
        opts.direct_fallback_below = 0;
        SolverReport report;
        const auto x = solve(a, b, opts, &report);
        CHECK(report.converged);
        double err = 0.0;
        for (std::size_t i = 0; i < a.rows; ++i) err = std::max(err, std::abs(x[i] - x_true[i]));
        CHECK(err <= 1e-8);
    }
}

TEST_CASE("solver reports failure and falls back to a direct solve")
{
    const CsrMatrix a = convection_diffusion(200, 0.2);
    const std::vector<double> b(a.rows, 1.0);
    SolverOptions opts;
    opts.max_iterations = 1;
    opts.preconditioner = PreconditionerKind::jacobi;
    opts.ilut_drop_tolerance = 0.5;  // weak retry preconditioner
    opts.ilut_fill_factor = 1;
    opts.direct_fallback_below = 0;
    CHECK_THROWS_AS(solve(a, b, opts), SolverError);

    opts.direct_fallback_below = 1000;
    SolverReport report;
    const auto x = solve(a, b, opts, &report);
    CHECK(report.converged);
    CHECK(report.method.find("sparse-lu") != std::string::npos);
    const auto r = residual(a, x, b);
    CHECK(norm2(r) <= 1e-10 * norm2(b));
}

TEST_CASE("direct solve matches the iterative one")
{
    const CsrMatrix a = convection_diffusion(300, 0.1);
    std::vector<double> b(a.rows);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::cos(0.1 * static_cast<double>(i));
    const auto x1 = direct_solve(a, b);
    SolverOptions opts;
    opts.tolerance = 1e-13;
    const auto x2 = solve(a, b, opts);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(x1[i] == doctest::Approx(x2[i]).epsilon(1e-9));
}
