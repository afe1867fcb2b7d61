#include <benchmark/benchmark.h>

#include <vector>

#include "gaussint/gauss_sim.hpp"
#include "gaussint/gram.hpp"
#include "gaussint/moments.hpp"
#include "gaussint/operator_config.hpp"
#include "gaussint/pair_kernel.hpp"
#include "gaussint/random.hpp"
#include "gaussint/self_intersection.hpp"

using namespace gaussint;

namespace {

std::vector<double> wiener_nodes(int n, std::uint64_t seed) {
    const GridSpec g(n);
    const Eigen::VectorXd v = integrator_path(builtin::identity(g), sample_noise(g, seed)).values[0];
    return {v.data(), v.data() + v.size()};
}

void BM_PairGaussSum1d(benchmark::State& state) {
    const auto x = wiener_nodes(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(pair_gauss_sum_1d(x, 1e-3, 1));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairGaussSum1d)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_PairGaussSum2d(benchmark::State& state) {
    const auto x = wiener_nodes(static_cast<int>(state.range(0)), 1);
    const auto y = wiener_nodes(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(pair_gauss_sum_2d(x, y, 5e-4, 1, 1.0, 0.0));
}
BENCHMARK(BM_PairGaussSum2d)->Arg(512)->Arg(2048);

void BM_SecondMomentExact(benchmark::State& state) {
    const L2Operator a = builtin::perturbation(0.5, reference_volterra(GridSpec(static_cast<int>(state.range(0)))));
    for (auto _ : state) benchmark::DoNotOptimize(second_moment_exact(a, 1).value);
}
BENCHMARK(BM_SecondMomentExact)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GramDet(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    Rng rng(7, 0);
    Eigen::MatrixXd b(k, 64);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < 64; ++j) b(i, j) = rng.normal();
    const Eigen::MatrixXd gram = b * b.transpose();
    for (auto _ : state) benchmark::DoNotOptimize(gram_det(gram));
}
BENCHMARK(BM_GramDet)->Arg(4)->Arg(16)->Arg(64);

void BM_PlanarExact(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(et2_planar_exact(1000.0, 2.0).value);
}
BENCHMARK(BM_PlanarExact);

}  // namespace

BENCHMARK_MAIN();
