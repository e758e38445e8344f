#pragma once

#include <cmath>
#include <random>

#include "dswell/linalg.hpp"

namespace testing {

using dswell::Vec3;

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Fixed-seed generator so that every run draws the same cases.
struct Draw {
    std::mt19937_64 rng;
    explicit Draw(unsigned long long seed = 20240611ULL) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    Vec3 direction()
    {
        std::normal_distribution<double> n;
        Vec3 v{n(rng), n(rng), n(rng)};
        return dswell::normalized(v);
    }
    /// log-uniform anisotropy ratio in [1, max_alpha]
    double alpha(double max_alpha) { return std::exp(uniform(0.0, std::log(max_alpha))); }
};

/// Orthonormal pair spanning the plane normal to psi.
inline std::pair<Vec3, Vec3> normal_frame(const Vec3& psi)
{
    const Vec3 seed = std::abs(psi[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = dswell::normalized(dswell::cross(psi, seed));
    return {e1, dswell::cross(psi, e1)};
}

}  // namespace testing
