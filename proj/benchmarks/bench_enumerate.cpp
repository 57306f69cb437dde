#include <benchmark/benchmark.h>

#include <qsieve/enumerate.hpp>
#include <qsieve/quadform.hpp>

using namespace qsieve;

static void BM_QuadricPoints3(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2");
    i64 B = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_quadric_points(q, B));
    }
}
BENCHMARK(BM_QuadricPoints3)->Range(8, 1024);

static void BM_QuadricPoints4(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2 - x3^2");
    i64 B = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_quadric_points(q, B));
    }
}
BENCHMARK(BM_QuadricPoints4)->Range(8, 128);

static void BM_CongruenceCount(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0^2 + x1^2 - 2*x2^2");
    i64 B = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_points_congruence(q, B, 3, {1, 1, 1}));
    }
}
BENCHMARK(BM_CongruenceCount)->Range(8, 256);

static void BM_SieveCount(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2 - x3^2");
    std::vector<IntegerPolynomial> family = {IntegerPolynomial::parse("x0", 4),
                                             IntegerPolynomial::parse("x1", 4)};
    i64 B = state.range(0);
    i64 M = state.range(1);
    for (auto _ : state) {
        SieveReport r = sieve_count(q, family, B, M);
        benchmark::DoNotOptimize(r.sieved_points);
    }
}
BENCHMARK(BM_SieveCount)->ArgsProduct({{16, 32, 64}, {2, 10, 50}});

BENCHMARK_MAIN();
