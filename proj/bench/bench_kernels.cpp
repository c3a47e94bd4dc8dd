// Parallel kernels against their serial references.
//
//   ./bench_kernels --benchmark_filter=Detection
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "behavior_metrics/anomaly.hpp"
#include "behavior_metrics/metrics.hpp"

using namespace bmetrics;

namespace {

anomaly::AnomalyConfig long_config(double horizon_end) {
    anomaly::AnomalyConfig cfg;
    cfg.horizon_end = horizon_end;
    return cfg;
}

std::vector<Subspace> random_subspaces(std::size_t count, Eigen::Index ambient) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<Eigen::Index> dim(1, ambient);
    std::vector<Subspace> out;
    for (std::size_t i = 0; i < count; ++i) {
        Matrix m(ambient, dim(rng));
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            for (Eigen::Index r = 0; r < ambient; ++r) {
                m(r, c) = g(rng);
            }
        }
        out.push_back(orthonormal_basis(m));
    }
    return out;
}

void BM_DetectionSerial(benchmark::State& state) {
    const auto cfg = long_config(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(anomaly::run_detection_serial(cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetectionParallel(benchmark::State& state) {
    const auto cfg = long_config(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(anomaly::run_detection(cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PairwiseSerial(benchmark::State& state) {
    const auto subspaces = random_subspaces(static_cast<std::size_t>(state.range(0)), 30);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairwise_distances_serial(MetricKind::Chordal, subspaces));
    }
}

void BM_PairwiseParallel(benchmark::State& state) {
    const auto subspaces = random_subspaces(static_cast<std::size_t>(state.range(0)), 30);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairwise_distances(MetricKind::Chordal, subspaces));
    }
}

} // namespace

BENCHMARK(BM_DetectionSerial)->Arg(250)->Arg(2500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectionParallel)->Arg(250)->Arg(2500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
