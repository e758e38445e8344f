// Acceptance run: one PASS/FAIL line per criterion, details below each line.
// Thresholds live in tools/checks.hpp and are shared with `dswell --check`.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <iostream>

#include "checks.hpp"

using namespace dswell;
using dswell::cli::CheckResult;

namespace {

constexpr int convergence_levels = 3;  // h_max = 17.32, 8.66, 4.33 m
constexpr double alphas[] = {1.0, 10.0, 50.0, 100.0};
constexpr int comparison_levels = 2;  // 40x80x40 reference

struct Criterion {
    int id;
    std::string title;
    std::vector<CheckResult> checks;

    bool pass() const
    {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

void report(const Criterion& c)
{
    std::cout << (c.pass() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << '\n';
    for (const auto& r : c.checks) {
        std::cout << "    " << (r.pass ? "ok   " : "FAIL ") << r.name;
        if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
        std::cout << '\n';
    }
    std::cout.flush();
}

void progress(const std::string& msg) { std::cerr << msg << '\n'; }

}  // namespace

int main(int argc, char** argv)
{
    Criterion rates{1, "E_q convergence rates within 0.25 of the published table", {}};
    Criterion pressure{2, "E_p rate 2.0 +- 0.2 on the last refinement pair", {}};
    for (const double alpha : alphas) {
        const ConvergenceTable t = run_convergence(Scenario::infinite_well(alpha), convergence_levels, progress);
        for (auto& c : cli::check_convergence(t)) {
            const bool is_pressure = c.name.find("E_p") != std::string::npos;
            (is_pressure ? pressure : rates).checks.push_back(std::move(c));
        }
    }
    report(rates);
    report(pressure);

    Criterion kernel{3, "kernel radius law and simplified Jacobian", {}};
    kernel.checks = cli::check_kernel_study(run_kernel_study(Scenario::infinite_well(100.0), {}, progress));
    report(kernel);

    Criterion ordering{4, "distributed vs Peaceman ordering on the slanted box", {}};
    ordering.checks = cli::check_comparison(
        run_comparison(Scenario::slanted_box(), {.levels = comparison_levels}, progress), false);
    report(ordering);

    doctest::Context context(argc, argv);
    context.setOption("test-suite", "properties");
    context.setOption("no-intro", true);
    context.setOption("minimal", true);
    const int status = context.run();
    Criterion properties{5, "property suite", {}};
    properties.checks.push_back({"doctest suite 'properties'", status == 0, status ? "see doctest output" : ""});
    report(properties);

    const bool ok = rates.pass() && pressure.pass() && kernel.pass() && ordering.pass() && properties.pass();
    std::cout << (ok ? "all criteria passed" : "some criteria failed") << '\n';
    return ok ? 0 : 1;
}
