#pragma once

// Preconditioned BiCGSTAB for the nonsymmetric finite-volume systems. A failed
// ILU(0) run is retried with a threshold ILU, then with a sparse LU for small
// systems.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dswell/sparse.hpp"

namespace dswell {

enum class PreconditionerKind { jacobi, ilu0, ilut };

struct SolverOptions {
    double tolerance = 1e-10;  ///< on ||b - Ax|| / ||b||
    int max_iterations = 10000;
    PreconditionerKind preconditioner = PreconditionerKind::ilu0;
    double ilut_drop_tolerance = 1e-3;
    int ilut_fill_factor = 5;
    /// Stop when the residual grows by this factor over the initial one.
    double divergence_factor = 1e6;
    /// Give up when the best residual has not halved for this many
    /// iterations, so that a stalled preconditioner hands over early.
    int stagnation_window = 500;
    /// Systems below this size are retried with a sparse LU if the Krylov
    /// iteration fails.
    std::size_t direct_fallback_below = 20000;
};

struct SolverReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    std::string method;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, SolverReport report) : std::runtime_error(what), report_(std::move(report)) {}
    const SolverReport& report() const { return report_; }

private:
    SolverReport report_;
};

/// Zero-fill incomplete LU on the sparsity pattern of A (unit lower factor).
class Ilu0 {
public:
    explicit Ilu0(const CsrMatrix& a);
    void apply(std::span<const double> r, std::span<double> z) const;

private:
    CsrMatrix lu_;
    std::vector<std::size_t> diag_;
};

class Jacobi {
public:
    explicit Jacobi(const CsrMatrix& a);
    void apply(std::span<const double> r, std::span<double> z) const;

private:
    std::vector<double> inv_diag_;
};

/// BiCGSTAB only; returns the report, x holds the final iterate.
SolverReport bicgstab(const CsrMatrix& a, std::span<const double> b, std::span<double> x, const SolverOptions& opts);

/// Threshold-ILU preconditioned BiCGSTAB (Eigen); serial.
SolverReport bicgstab_ilut(const CsrMatrix& a, std::span<const double> b, std::span<double> x, const SolverOptions& opts);

/// Sparse LU (Eigen) direct solve.
std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b);

/// Krylov solve with the fallback chain above. Throws SolverError with the residual
/// report if no method reaches the tolerance.
std::vector<double> solve(const CsrMatrix& a, std::span<const double> b, const SolverOptions& opts = {},
                          SolverReport* report = nullptr);

}  // namespace dswell
