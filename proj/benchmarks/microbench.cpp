// Microbenchmarks for the hot paths: network evaluation and gradients,
// construction, polytope membership, projection, and one training epoch.
// Build target: edsf_bench. Run directly; not registered with ctest.

#include <benchmark/benchmark.h>

#include <edsf/construct.hpp>
#include <edsf/coverage.hpp>
#include <edsf/dataset.hpp>
#include <edsf/dsf.hpp>
#include <edsf/edsf.hpp>
#include <edsf/polymatroid.hpp>
#include <edsf/rng.hpp>
#include <edsf/set_function.hpp>
#include <edsf/subset.hpp>
#include <edsf/train.hpp>
#include <edsf/welfare.hpp>

namespace {

using namespace edsf;

Eigen::VectorXd random_point(int n, std::uint64_t seed, double lo, double hi) {
    Rng rng(seed);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo, hi);
    return x;
}

void BM_DsfForward(benchmark::State& state) {
    const DsfNetwork net = init_dsf(16, {64, 64, 64}, Activation::min_cap(95.0), 1);
    const Eigen::VectorXd x = random_point(16, 2, 0.0, 1.0);
    DsfCache cache;
    for (auto _ : state) benchmark::DoNotOptimize(dsf_forward(net, x, &cache));
}
BENCHMARK(BM_DsfForward);

void BM_DsfBackward(benchmark::State& state) {
    const DsfNetwork net = init_dsf(16, {64, 64, 64}, Activation::min_cap(95.0), 1);
    const Eigen::VectorXd x = random_point(16, 2, 0.0, 1.0);
    DsfCache cache;
    dsf_forward(net, x, &cache);
    for (auto _ : state) benchmark::DoNotOptimize(dsf_backward(net, cache));
}
BENCHMARK(BM_DsfBackward);

void BM_EdsfForward_r64(benchmark::State& state) {
    EdsfModel m;
    for (int c = 0; c < 64; ++c)
        m.dsfs.push_back(init_dsf(16, {64, 64, 64}, Activation::min_cap(95.0), 100 + c));
    const Eigen::VectorXd x = random_point(16, 2, 0.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(edsf_forward(m, x));
}
BENCHMARK(BM_EdsfForward_r64);

void BM_TrainFiveEpochs(benchmark::State& state) {
    const CoverageSpec spec = gen_random_coverage(16, 100, 0.3, 7);
    const CoverageOracle oracle(spec);
    const SampleDataset ds = gen_dataset(oracle, 256, 0.5, 11);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.r = 8;
    cfg.layer_widths = {32, 32};
    cfg.seed = 3;
    for (auto _ : state) {
        EdsfModel m = init_edsf(16, cfg);
        benchmark::DoNotOptimize(train(m, ds, cfg));
    }
}
BENCHMARK(BM_TrainFiveEpochs);

void BM_BuildEdsfFromSubmodular_n8(benchmark::State& state) {
    const CoverageSpec spec = gen_random_coverage(8, 24, 0.3, 5);
    const CoverageOracle oracle(spec);
    for (auto _ : state) benchmark::DoNotOptimize(build_edsf_from_submodular(oracle));
}
BENCHMARK(BM_BuildEdsfFromSubmodular_n8);

void BM_CoverageEval(benchmark::State& state) {
    const CoverageSpec spec = gen_random_coverage(50, 1000, 0.2, 9);
    const ItemSubset A(50, 0x3A5F129ULL);
    for (auto _ : state) benchmark::DoNotOptimize(coverage_eval(spec, A));
}
BENCHMARK(BM_CoverageEval);

void BM_SimplexProject(benchmark::State& state) {
    const Eigen::VectorXd v = random_point(64, 13, -1.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(simplex_project(v));
}
BENCHMARK(BM_SimplexProject);

void BM_Membership_n12(benchmark::State& state) {
    const CoverageSpec spec = gen_random_coverage(12, 36, 0.3, 17);
    const CoverageOracle oracle(spec);
    const TabulatedOracle tab(tabulate(oracle));
    const Eigen::VectorXd x = random_point(12, 19, 0.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(membership(tab, x));
}
BENCHMARK(BM_Membership_n12);

void BM_GreedyVertex_n12(benchmark::State& state) {
    const CoverageSpec spec = gen_random_coverage(12, 36, 0.3, 17);
    const CoverageOracle oracle(spec);
    const TabulatedOracle tab(tabulate(oracle));
    const ItemSubset A = ItemSubset::full_set(12);
    std::vector<int> order(12);
    for (int i = 0; i < 12; ++i) order[i] = (5 * i + 3) % 12;
    for (auto _ : state) benchmark::DoNotOptimize(greedy_vertex(tab, A, order));
}
BENCHMARK(BM_GreedyVertex_n12);

} // namespace

BENCHMARK_MAIN();
