#include <benchmark/benchmark.h>

#include <qsieve/localdensity.hpp>
#include <qsieve/quadform.hpp>

using namespace qsieve;

static void BM_NuRecursion(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2");
    int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nu(q, 3, k));
    }
}
BENCHMARK(BM_NuRecursion)->DenseRange(1, 9, 2);

static void BM_NuBrute(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2");
    int k = static_cast<int>(state.range(0));
    DensityOptions opt;
    opt.method = NuMethod::ForceBrute;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nu(q, 3, k, opt));
    }
}
BENCHMARK(BM_NuBrute)->DenseRange(1, 4);

static void BM_MuCoprime(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2");
    IntegerPolynomial f = IntegerPolynomial::parse("x0", 3);
    IntegerPolynomial g = IntegerPolynomial::parse("x1", 3);
    i64 p = state.range(0);
    for (auto _ : state) {
        DensityValue v = mu_qp_coprime(q, f, g, p, 4);
        benchmark::DoNotOptimize(v.value);
    }
}
BENCHMARK(BM_MuCoprime)->Arg(3)->Arg(13)->Arg(101);

static void BM_PredictedProduct(benchmark::State& state) {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2 - x3^2 - x4^2");
    IntegerPolynomial f = IntegerPolynomial::parse("x0", 5);
    IntegerPolynomial g = IntegerPolynomial::parse("x1", 5);
    i64 p_max = state.range(0);
    for (auto _ : state) {
        CoprimePrediction pred = predicted_coprime_density(q, f, g, p_max, 4);
        benchmark::DoNotOptimize(pred.product);
    }
}
BENCHMARK(BM_PredictedProduct)->Arg(10)->Arg(30)->Arg(50);

BENCHMARK_MAIN();
