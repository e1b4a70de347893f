#include "sigma2/cone.hpp"
#include "sigma2/grid.hpp"
#include "sigma2/potential.hpp"
#include "sigma2/rhs.hpp"
#include "sigma2/solver.hpp"
#include "sigma2/sym_matrix.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

void BM_SigmaK(benchmark::State& state) {
    const sigma2::Spectrum lambda(std::vector<double>{8.0, 5.0, 3.0, 2.0, 1.5, 1.0, 0.5, -0.25});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma2::sigma_k(lambda, 2));
    }
}
BENCHMARK(BM_SigmaK);

void BM_JacobiEigen(benchmark::State& state) {
    sigma2::SymMatrix a(8);
    for (int i = 0; i < 8; ++i)
        for (int j = i; j < 8; ++j) a.set(i, j, 1.0 / (1.0 + i + j) + (i == j ? 4.0 : 0.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(a.eigenvalues());
    }
}
BENCHMARK(BM_JacobiEigen);

void BM_HessianField(benchmark::State& state) {
    const auto mf = sigma2::manufactured_case("expbump", 4);
    const sigma2::GridFunction u = sigma2::sample_grid(4, 9, 1.0, mf.value);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma2::hessian_field(u));
    }
}
BENCHMARK(BM_HessianField);

void BM_SolveQuadratic(benchmark::State& state) {
    const auto mf = sigma2::manufactured_case("expbump", 3);
    const sigma2::GridFunction boundary = sigma2::sample_grid(3, 9, 1.0, mf.value);
    const sigma2::RhsSpec rhs = sigma2::RhsSpec::from_manufactured(mf);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma2::solve(rhs, boundary));
    }
}
BENCHMARK(BM_SolveQuadratic);

void BM_WolffConstant(benchmark::State& state) {
    const sigma2::DensityMeasure mu = sigma2::DensityMeasure::constant(4, 1.0);
    const std::vector<double> x(4, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma2::wolff_potential(mu, x, 1.0, 20000));
    }
}
BENCHMARK(BM_WolffConstant);

} // namespace

BENCHMARK_MAIN();
