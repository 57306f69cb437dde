#include <benchmark/benchmark.h>

#include <qsieve/latticecover.hpp>
#include <qsieve/quadform.hpp>

using namespace qsieve;

static void BM_BuildCover(benchmark::State& state) {
    QuadraticForm r = QuadraticForm::parse("x0^2 - x1^2 - x2^2");
    i64 q = state.range(0);
    for (auto _ : state) {
        CoverLL c = build_cover_ll(r, q);
        benchmark::DoNotOptimize(c.generators.size());
    }
}
BENCHMARK(BM_BuildCover)->Arg(5)->Arg(35)->Arg(101)->Arg(143);

static void BM_SuccessiveMinima(benchmark::State& state) {
    i64 q = state.range(0);
    IntegerLattice lat = lattice_of({1, 2, 3}, q);
    for (auto _ : state) {
        MinimaResult m = successive_minima_sq(lat);
        benchmark::DoNotOptimize(m.lambda_sq[0]);
    }
}
BENCHMARK(BM_SuccessiveMinima)->Arg(101)->Arg(1009)->Arg(10007);

static void BM_ReducedBasis(benchmark::State& state) {
    i64 q = state.range(0);
    IntegerLattice lat = lattice_of({1, 2, 3}, q);
    for (auto _ : state) {
        ReducedBasisResult r = reduced_basis(lat);
        benchmark::DoNotOptimize(r.ratio_sq[0]);
    }
}
BENCHMARK(BM_ReducedBasis)->Arg(101)->Arg(10007);

static void BM_ShortDualWitness(benchmark::State& state) {
    i64 q = state.range(0);
    for (auto _ : state) {
        auto w = short_dual_witness({1, 2, 3}, q, Rat(1, 2));
        benchmark::DoNotOptimize(w.has_value());
    }
}
BENCHMARK(BM_ShortDualWitness)->Arg(101)->Arg(1009);

static void BM_BuildCoverLLPlus(benchmark::State& state) {
    i64 q1 = state.range(0);
    for (auto _ : state) {
        CoverLLPlus c = build_cover_llplus(3, q1, 1);
        benchmark::DoNotOptimize(c.roots.size());
    }
}
BENCHMARK(BM_BuildCoverLLPlus)->Arg(11)->Arg(143)->Arg(3289);

BENCHMARK_MAIN();
