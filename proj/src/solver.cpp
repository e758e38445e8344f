#include "dswell/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace dswell {

Ilu0::Ilu0(const CsrMatrix& a) : lu_(a), diag_(a.rows)
{
    const std::size_t n = a.rows;
    for (std::size_t i = 0; i < n; ++i) {
        diag_[i] = lu_.row_ptr[i + 1];
        for (std::size_t k = lu_.row_ptr[i]; k < lu_.row_ptr[i + 1]; ++k)
            if (static_cast<std::size_t>(lu_.col_idx[k]) == i) diag_[i] = k;
        if (diag_[i] == lu_.row_ptr[i + 1]) throw std::invalid_argument("ILU(0) needs a structurally nonzero diagonal");
    }
    std::vector<std::ptrdiff_t> pos(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t begin = lu_.row_ptr[i], end = lu_.row_ptr[i + 1];
        for (std::size_t k = begin; k < end; ++k) pos[static_cast<std::size_t>(lu_.col_idx[k])] = static_cast<std::ptrdiff_t>(k);
        for (std::size_t k = begin; k < end; ++k) {
            const auto col = static_cast<std::size_t>(lu_.col_idx[k]);
            if (col >= i) break;
            const double factor = lu_.values[k] / lu_.values[diag_[col]];
            lu_.values[k] = factor;
            for (std::size_t m = diag_[col] + 1; m < lu_.row_ptr[col + 1]; ++m) {
                const std::ptrdiff_t p = pos[static_cast<std::size_t>(lu_.col_idx[m])];
                if (p >= 0) lu_.values[static_cast<std::size_t>(p)] -= factor * lu_.values[m];
            }
        }
        for (std::size_t k = begin; k < end; ++k) pos[static_cast<std::size_t>(lu_.col_idx[k])] = -1;
        if (lu_.values[diag_[i]] == 0.0) throw std::runtime_error("ILU(0) breakdown: zero pivot");
    }
}

void Ilu0::apply(std::span<const double> r, std::span<double> z) const
{
    const std::size_t n = lu_.rows;
    for (std::size_t i = 0; i < n; ++i) {
        double s = r[i];
        for (std::size_t k = lu_.row_ptr[i]; k < diag_[i]; ++k) s -= lu_.values[k] * z[static_cast<std::size_t>(lu_.col_idx[k])];
        z[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = z[i];
        for (std::size_t k = diag_[i] + 1; k < lu_.row_ptr[i + 1]; ++k) s -= lu_.values[k] * z[static_cast<std::size_t>(lu_.col_idx[k])];
        z[i] = s / lu_.values[diag_[i]];
    }
}

Jacobi::Jacobi(const CsrMatrix& a) : inv_diag_(a.rows, 1.0)
{
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double d = a.at(i, i);
        if (d != 0.0) inv_diag_[i] = 1.0 / d;
    }
}

void Jacobi::apply(std::span<const double> r, std::span<double> z) const
{
    const auto n = static_cast<std::ptrdiff_t>(inv_diag_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = inv_diag_[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
}

namespace {

template <class Precond>
SolverReport bicgstab_impl(const CsrMatrix& a, std::span<const double> b, std::span<double> x, const SolverOptions& opts,
                           const Precond& m)
{
    const std::size_t n = a.rows;
    SolverReport rep;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        rep.converged = true;
        return rep;
    }
    std::vector<double> r = residual(a, x, b);
    std::vector<double> rhat = r, p(n, 0.0), v(n, 0.0), phat(n), s(n), shat(n), t(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    rep.relative_residual = norm2(r) / bnorm;
    const double blowup = opts.divergence_factor * std::max(rep.relative_residual, 1.0);
    double best = rep.relative_residual;
    int best_at = 0;
    if (rep.relative_residual <= opts.tolerance) {
        rep.converged = true;
        return rep;
    }
    for (int it = 1; it <= opts.max_iterations; ++it) {
        rep.iterations = it;
        const double rho_new = dot(rhat, r);
        if (rho_new == 0.0 || !std::isfinite(rho_new)) break;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        m.apply(p, phat);
        spmv(a, phat, v);
        const double rv = dot(rhat, v);
        if (rv == 0.0) break;
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= opts.tolerance) {
            axpy(alpha, phat, x);
            break;
        }
        m.apply(s, shat);
        spmv(a, shat, t);
        const double tt = dot(t, t);
        if (tt == 0.0) break;
        omega = dot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        const double rel = norm2(r) / bnorm;
        if (rel <= opts.tolerance || omega == 0.0 || !std::isfinite(rel) || rel > blowup) break;
        if (rel < 0.5 * best) {
            best = rel;
            best_at = it;
        } else if (opts.stagnation_window > 0 && it - best_at >= opts.stagnation_window) {
            break;
        }
    }
    rep.relative_residual = norm2(residual(a, x, b)) / bnorm;
    rep.converged = rep.relative_residual <= opts.tolerance;
    return rep;
}

}  // namespace

namespace {

using RowMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

RowMat to_eigen(const CsrMatrix& a)
{
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(a.nnz());
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            trip.emplace_back(static_cast<int>(r), a.col_idx[k], a.values[k]);
    RowMat m(static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

double relative_residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b)
{
    const double bnorm = norm2(b);
    return bnorm > 0.0 ? norm2(residual(a, x, b)) / bnorm : norm2(residual(a, x, b));
}

}  // namespace

SolverReport bicgstab_ilut(const CsrMatrix& a, std::span<const double> b, std::span<double> x, const SolverOptions& opts)
{
    const RowMat m = to_eigen(a);
    Eigen::BiCGSTAB<RowMat, Eigen::IncompleteLUT<double>> solver;
    solver.preconditioner().setDroptol(opts.ilut_drop_tolerance);
    solver.preconditioner().setFillfactor(opts.ilut_fill_factor);
    solver.setTolerance(opts.tolerance);
    solver.setMaxIterations(opts.max_iterations);
    solver.compute(m);
    SolverReport rep;
    rep.method = "bicgstab+ilut";
    if (solver.info() != Eigen::Success) return rep;
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::Map<const Eigen::VectorXd> guess(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd sol = solver.solveWithGuess(rhs, guess);
    if (sol.allFinite()) std::copy(sol.begin(), sol.end(), x.begin());
    rep.iterations = static_cast<int>(solver.iterations());
    rep.relative_residual = relative_residual(a, x, b);
    rep.converged = rep.relative_residual <= opts.tolerance;
    return rep;
}

SolverReport bicgstab(const CsrMatrix& a, std::span<const double> b, std::span<double> x, const SolverOptions& opts)
{
    SolverReport rep;
    if (opts.preconditioner == PreconditionerKind::ilut) return bicgstab_ilut(a, b, x, opts);
    if (opts.preconditioner == PreconditionerKind::ilu0) {
        rep = bicgstab_impl(a, b, x, opts, Ilu0(a));
        rep.method = "bicgstab+ilu0";
    } else {
        rep = bicgstab_impl(a, b, x, opts, Jacobi(a));
        rep.method = "bicgstab+jacobi";
    }
    return rep;
}

std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b)
{
    using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(a.nnz());
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            trip.emplace_back(static_cast<int>(r), a.col_idx[k], a.values[k]);
    SpMat m(static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols));
    m.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd sol = lu.solve(rhs);
    return {sol.data(), sol.data() + sol.size()};
}

std::vector<double> solve(const CsrMatrix& a, std::span<const double> b, const SolverOptions& opts, SolverReport* report)
{
    std::vector<double> x(a.rows, 0.0);
    SolverReport rep = bicgstab(a, b, x, opts);
    if (!rep.converged && opts.preconditioner != PreconditionerKind::ilut) {
        std::fill(x.begin(), x.end(), 0.0);
        const std::string first = rep.method;
        rep = bicgstab_ilut(a, b, x, opts);
        rep.method = first + " -> " + rep.method;
    }
    if (!rep.converged && a.rows < opts.direct_fallback_below) {
        x = direct_solve(a, b);
        rep.relative_residual = relative_residual(a, x, b);
        rep.converged = rep.relative_residual <= opts.tolerance;
        rep.method += " -> sparse-lu";
    }
    if (report) *report = rep;
    if (!rep.converged) {
        std::ostringstream msg;
        msg << "linear solver did not converge (" << rep.method << ", " << rep.iterations
            << " iterations, relative residual " << rep.relative_residual << ")";
        throw SolverError(msg.str(), rep);
    }
    return x;
}

}  // namespace dswell
