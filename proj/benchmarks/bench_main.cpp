#include <benchmark/benchmark.h>

#include "varshrink/minimax.hpp"
#include "varshrink/poisson.hpp"
#include "varshrink/quadrature.hpp"
#include "varshrink/risk.hpp"
#include "varshrink/sampling.hpp"
#include "varshrink/special_functions.hpp"

using namespace varshrink;

namespace {

void BM_QuadRuleBuild(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        // bypass the cache by cycling nearby orders
        benchmark::DoNotOptimize(quad_rule(order).nodes.data());
    }
}
BENCHMARK(BM_QuadRuleBuild)->Arg(64)->Arg(128)->Arg(512);

void BM_BetaExpectation(benchmark::State& state) {
    const QuadRule& rule = quad_rule(128);
    const double a = 0.5 * state.range(0);
    const double lb = log_beta(a, 1.0);
    for (auto _ : state) {
        const double v = integrate_power_weighted(
            rule, a - 1.0, 1.0, -lb,
            [](double, double omb) { return 1.0 / (1.0 + omb); });
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_BetaExpectation)->Arg(4)->Arg(104)->Arg(1004);

void BM_PoissonTruncate(benchmark::State& state) {
    const double rate = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(poisson_truncate(rate, 1e-12).weights.data());
    }
}
BENCHMARK(BM_PoissonTruncate)->Arg(1)->Arg(50)->Arg(5000);

void BM_RiskExact(benchmark::State& state) {
    const double tau = static_cast<double>(state.range(0));
    const QuadConfig cfg;
    const auto spec = EstimatorSpec::simple_bayes(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(risk_exact(spec, {4, 2}, {tau}, cfg).value);
    }
}
BENCHMARK(BM_RiskExact)->Arg(0)->Arg(10)->Arg(100);

void BM_DeltaRisk(benchmark::State& state) {
    const double tau = static_cast<double>(state.range(0));
    const QuadConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(delta_risk(1.0, {10, 10}, {tau}, cfg).value);
    }
}
BENCHMARK(BM_DeltaRisk)->Arg(0)->Arg(100);

void BM_RiskMc(benchmark::State& state) {
    McConfig mc;
    mc.samples = static_cast<std::size_t>(state.range(0));
    mc.seed = {42, 0};
    const auto spec = EstimatorSpec::simple_bayes(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(risk_mc(spec, {4, 2}, {5.0}, mc).value);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RiskMc)->Arg(10000)->Arg(100000);

void BM_SampleChi2(benchmark::State& state) {
    Rng rng({42, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.chi_square(5.0));
    }
}
BENCHMARK(BM_SampleChi2);

void BM_DominanceScan(benchmark::State& state) {
    const QuadConfig cfg;
    const ProblemDims dims{4, 2};
    const double star = alpha_star(dims);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            dominance_scan(star, dims, default_tau_grid(), cfg, 1e-8).min_delta);
    }
}
BENCHMARK(BM_DominanceScan);

}  // namespace

BENCHMARK_MAIN();
