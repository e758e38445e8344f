#pragma once

// Thin OpenMP wrapper. Builds without OpenMP run every kernel serially.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dswell {

inline int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n)
{
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Thread count from DSWELL_THREADS, or 0 if unset/invalid.
inline int threads_from_environment()
{
    const char* env = std::getenv("DSWELL_THREADS");
    if (!env) return 0;
    try {
        return std::max(0, std::stoi(env));
    } catch (...) {
        return 0;
    }
}

/// Sum of term(i) for i < n. Blocks of fixed size are summed in parallel and
/// the block sums are added in order, so the result does not depend on the
/// thread count.
template <class Term>
double blocked_sum(std::size_t n, Term term)
{
    constexpr std::size_t block = 4096;
    const std::size_t num_blocks = (n + block - 1) / block;
    std::vector<double> partial(num_blocks, 0.0);
    const auto nb = static_cast<std::ptrdiff_t>(num_blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * block;
        const std::size_t end = std::min(n, begin + block);
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

}  // namespace dswell
