// Microbenchmarks for the kernels that dominate solver runtime: quadrature,
// gradient and residual evaluation, and the banded Newton step.

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "vortexforge/functionals.hpp"
#include "vortexforge/newton_refiner.hpp"
#include "vortexforge/radial_grid.hpp"

using namespace vortex;

namespace {

VortexPair make_pair_of_size(int n) {
    const auto g = make_grid(10.0, n);
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = g->node(i) / 10.0;
        a[static_cast<std::size_t>(i)] = 3.0 * std::sin(std::numbers::pi * x);
        b[static_cast<std::size_t>(i)] = 2.0 * std::sin(std::numbers::pi * x) * x;
    }
    return VortexPair(Profile(g, std::move(a)), Profile(g, std::move(b)),
                      PhysicsParams{1.0, 0.0, 1, 10.0});
}

void bm_integrate(benchmark::State& state) {
    const VortexPair pair = make_pair_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(pair.a1()));
    }
}

void bm_flux(benchmark::State& state) {
    const VortexPair pair = make_pair_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(flux_Q(pair.a1()));
    }
}

void bm_action_J(benchmark::State& state) {
    const VortexPair pair = make_pair_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(action_J(pair));
    }
}

void bm_grad_I(benchmark::State& state) {
    const VortexPair pair = make_pair_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad_I(pair));
    }
}

void bm_residual(benchmark::State& state) {
    const VortexPair pair = make_pair_of_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(residual_max(pair));
    }
}

void bm_newton_step(benchmark::State& state) {
    const VortexPair pair = make_pair_of_size(static_cast<int>(state.range(0)));
    const int n = pair.grid().size();
    for (auto _ : state) {
        const BandedSystem jac = assemble_jacobian(pair);
        std::vector<double> rhs(static_cast<std::size_t>(2 * n), 1.0);
        benchmark::DoNotOptimize(jac.solve(std::move(rhs)));
    }
}

} // namespace

BENCHMARK(bm_integrate)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_flux)->Arg(1024);
BENCHMARK(bm_action_J)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_grad_I)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_residual)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_newton_step)->Arg(256)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
