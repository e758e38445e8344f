#pragma once

// Pass/fail thresholds applied by `dswell --check`.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "dswell/experiments.hpp"

namespace dswell::cli {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Published E_q rates for h_max = 17.32 -> 8.66 -> 4.33 -> 2.17 m.
inline const std::map<double, std::vector<double>>& reference_rates()
{
    static const std::map<double, std::vector<double>> table{
        {1.0, {2.0545, 2.0724, 1.9454}},
        {10.0, {1.7715, 2.0184, 2.0763}},
        {50.0, {1.5904, 1.9747, 2.0925}},
        {100.0, {1.5970, 1.9666, 2.1218}},
    };
    return table;
}

inline constexpr double rate_tolerance = 0.25;
inline constexpr double pressure_rate = 2.0;
inline constexpr double pressure_rate_tolerance = 0.2;

inline std::vector<CheckResult> check_convergence(const ConvergenceTable& t)
{
    std::vector<CheckResult> out;
    const std::string tag = fmt("alpha=%g", t.alpha);
    if (t.failure) out.push_back({tag + " completed", false, *t.failure});
    const auto ref = reference_rates().find(t.alpha);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        if (ref == reference_rates().end() || i - 1 >= ref->second.size() || !row.rate_q) continue;
        const double expected = ref->second[i - 1];
        out.push_back({tag + fmt(" E_q rate %g->%g", static_cast<double>(i - 1), static_cast<double>(i)),
                       std::abs(*row.rate_q - expected) <= rate_tolerance,
                       fmt("%.4f vs %.4f", *row.rate_q, expected)});
    }
    if (t.rows.size() >= 2 && t.rows.back().rate_p) {
        const double r = *t.rows.back().rate_p;
        out.push_back({tag + " E_p rate (last pair)", std::abs(r - pressure_rate) <= pressure_rate_tolerance,
                       fmt("%.4f vs %.1f", r, pressure_rate)});
    }
    return out;
}

inline std::vector<CheckResult> check_kernel_study(const KernelStudyResult& r)
{
    std::vector<CheckResult> out;
    const auto& f = r.far_reduction_per_doubling;
    out.push_back({"far: E_q reduction per doubling in [3,5]", f && *f >= 3.0 && *f <= 5.0,
                   f ? fmt("%.3f", *f) : "not available"});
    const auto& c = r.far_max_relative_change;
    out.push_back({"far: simplified Jacobian changes E_q by < 5%", c && *c < 0.05, c ? fmt("%.3g", *c) : "not available"});
    const auto& n = r.near_min_factor;
    out.push_back({"near: simplified Jacobian raises E_q >= 5x", n && *n >= 5.0, n ? fmt("%.3f", *n) : "not available"});
    return out;
}

inline std::vector<CheckResult> check_rotation(const RotationSweepResult& r)
{
    std::vector<CheckResult> out;
    for (const auto& row : r.rows)
        if (!row.e_q || !std::isfinite(*row.e_q))
            out.push_back({row.family + fmt(" %g/%g deg finite", row.angle1_deg, row.angle2_deg), false, row.note});
    for (const auto& [family, spread] : r.spread)
        out.push_back({family + ": max/min E_q < 10", spread < 10.0, fmt("%.3f", spread)});
    return out;
}

inline std::vector<CheckResult> check_comparison(const ComparisonResult& r, bool full)
{
    std::vector<CheckResult> out;
    if (r.rows.empty()) return out;
    const double coarse_limit = full ? 0.005 : 0.01;
    out.push_back({fmt("fixed kernel E_Q < %g%% on the coarsest grid", coarse_limit * 100.0),
                   r.rows.front().e_fixed < coarse_limit, fmt("%.4g%%", r.rows.front().e_fixed * 100.0)});
    for (const auto& row : r.rows)
        out.push_back({fmt("level %g: peaceman E_Q > 3x adaptive E_Q", row.level),
                       row.e_peaceman > 3.0 * row.e_adaptive, fmt("%.3fx", row.e_peaceman / row.e_adaptive)});
    bool monotone = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) monotone = monotone && r.rows[i].e_peaceman >= r.rows[i - 1].e_peaceman;
    out.push_back({"peaceman E_Q non-decreasing under refinement", monotone, ""});
    if (full) {
        out.push_back({"peaceman E_Q > 5% on the coarsest grid", r.rows.front().e_peaceman > 0.05,
                       fmt("%.4g%%", r.rows.front().e_peaceman * 100.0)});
        out.push_back({"peaceman E_Q > 8% on the finest grid", r.rows.back().e_peaceman > 0.08,
                       fmt("%.4g%%", r.rows.back().e_peaceman * 100.0)});
    }
    return out;
}

}  // namespace dswell::cli
