#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "gei/asymptotics.hpp"
#include "gei/dgp.hpp"
#include "gei/inference.hpp"
#include "gei/mobius.hpp"
#include "gei/models.hpp"
#include "gei/pit.hpp"

using namespace gei;

namespace {

Matrix uniforms(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t t = 0; t < n; ++t) m(t, j) = rng.uniform();
    return m;
}

std::vector<double> simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    auto p = make_predictor(spec, 0.0);
    std::vector<double> out;
    for (std::size_t t = 0; t < n + 200; ++t) {
        const double x = quantile(p->law({}), rng.uniform());
        p->update(x, {});
        if (t >= 200) out.push_back(x);
    }
    return out;
}

void BM_CvmPair(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto ranks = circular_ranks(uniforms(n, 2, 1));
    for (auto _ : state) benchmark::DoNotOptimize(cvm_statistic(ranks, {0, 1}, {0, 3}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CvmPair)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_CvmTriple(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto ranks = circular_ranks(uniforms(n, 3, 2));
    for (auto _ : state) benchmark::DoNotOptimize(cvm_statistic(ranks, {0, 1, 2}, {0, 1, -2}));
}
BENCHMARK(BM_CvmTriple)->Arg(100)->Arg(300);

void BM_XiTail(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto& xi = XiDistribution::standard(d);
    const double s = xi.upper_quantile(0.05);
    for (auto _ : state) benchmark::DoNotOptimize(xi.tail_probability(s));
}
BENCHMARK(BM_XiTail)->Arg(2)->Arg(3);

void BM_XiTailDirect(benchmark::State& state) {
    const auto& xi = XiDistribution::standard(2);
    const double s = xi.upper_quantile(0.05);
    for (auto _ : state) benchmark::DoNotOptimize(xi.direct_tail_probability(s));
}
BENCHMARK(BM_XiTailDirect);

void BM_EvaluateAllStatistics(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto panel = uniform_panel(uniforms(300, d, 3));
    const TestOptions options;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(panel, options));
}
BENCHMARK(BM_EvaluateAllStatistics)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_RandomizedPit(benchmark::State& state) {
    McStudySpec s;
    s.dgp = Dgp::dgp2;
    s.n = 300;
    const auto sample = generate_dgp(s, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(randomized_pit(sample.series, sample.trace, {static_cast<std::size_t>(state.range(0)), 1}));
}
BENCHMARK(BM_RandomizedPit)->Arg(1)->Arg(25);

void BM_GaussianHmmFit(benchmark::State& state) {
    const auto x = simulate(dgp1_model_x1(), 1000, 4);
    for (auto _ : state) benchmark::DoNotOptimize(fit_gaussian_hmm(x, {}, 3, 0, false));
}
BENCHMARK(BM_GaussianHmmFit)->Unit(benchmark::kMillisecond);

void BM_IngarchFit(benchmark::State& state) {
    const auto x = simulate(IngarchSpec{0.1187, {0.0575}, {0.8849}}, 1000, 5);
    for (auto _ : state) benchmark::DoNotOptimize(fit_ingarch(x, 1, 1));
}
BENCHMARK(BM_IngarchFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
