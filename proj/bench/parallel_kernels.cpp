// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <vector>

#include "dswell/scenario.hpp"

namespace {

using namespace dswell;

struct Problem {
    StructuredMesh mesh;
    PermeabilityTensor k;
    FluxSystem flux;
    KernelField field;
};

// Level-1 infinite-well setup with alpha = 10 (40^3 cells).
const Problem& problem()
{
    static const Problem p = [] {
        const Scenario s = Scenario::infinite_well(10.0);
        StructuredMesh mesh = s.mesh(1);
        const PermeabilityTensor k = s.permeability.build();
        const WellDescription well = s.well.description();
        const TransformChain chain = build_transform(k, well);
        const KernelSpec kernel = s.kernel.build(chain, mesh.h_max());
        BoundarySpec bc = BoundarySpec::all_dirichlet([](const Vec3& x) { return 1e6 + x[0]; });
        FluxOperator op(mesh, k, s.fluid, bc, Scheme::mpfa_o);
        FluxSystem flux = op.assemble();
        KernelField field(chain, kernel, 0.0, 10.0, JacobianMode::exact);
        return Problem{mesh, k, std::move(flux), field};
    }();
    return p;
}

std::vector<double> ramp(std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 997);
    return v;
}

void BM_spmv_serial(benchmark::State& state)
{
    const auto& a = problem().flux.matrix;
    const auto x = ramp(a.cols);
    std::vector<double> y(a.rows);
    for (auto _ : state) {
        spmv_serial(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_spmv_parallel(benchmark::State& state)
{
    const auto& a = problem().flux.matrix;
    const auto x = ramp(a.cols);
    std::vector<double> y(a.rows);
    for (auto _ : state) {
        spmv(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_dot_serial(benchmark::State& state)
{
    const auto x = ramp(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dot_serial(x, x));
}

void BM_dot_parallel(benchmark::State& state)
{
    const auto x = ramp(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dot(x, x));
}

void BM_weights_serial(benchmark::State& state)
{
    const auto& p = problem();
    for (auto _ : state) benchmark::DoNotOptimize(compute_cell_weights_serial(p.field, p.mesh, 2.0).cells.size());
}

void BM_weights_parallel(benchmark::State& state)
{
    const auto& p = problem();
    for (auto _ : state) benchmark::DoNotOptimize(compute_cell_weights(p.field, p.mesh, 2.0).cells.size());
}

void BM_assembly(benchmark::State& state, bool parallel)
{
    const Scenario s = Scenario::infinite_well(10.0);
    const StructuredMesh mesh = s.mesh(1);
    const BoundarySpec bc = BoundarySpec::all_dirichlet([](const Vec3& x) { return 1e6 + x[0]; });
    for (auto _ : state) {
        // The operator caches local systems, so it is rebuilt every iteration.
        const FluxOperator op(mesh, s.permeability.build(), s.fluid, bc, Scheme::mpfa_o);
        const FluxSystem f = parallel ? op.assemble() : op.assemble_serial();
        benchmark::DoNotOptimize(f.matrix.values.data());
    }
}

}  // namespace

BENCHMARK(BM_spmv_serial);
BENCHMARK(BM_spmv_parallel);
BENCHMARK(BM_dot_serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot_parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_weights_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weights_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_assembly, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_assembly, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
