// Serial reference vs OpenMP replicate/column parallelism on synthetic blobs.
#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "okm/kmeans.hpp"
#include "okm/univariate.hpp"

namespace {

okm::Dataset blobs(std::size_t n, std::size_t d, std::size_t centers, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> where(-20.0, 20.0);
    okm::Matrix means(centers, d);
    for (std::size_t c = 0; c < centers; ++c)
        for (std::size_t j = 0; j < d; ++j) means(c, j) = where(gen);
    okm::Matrix values(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) values(i, j) = means(i % centers, j) + noise(gen);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
    return okm::Dataset(names, values);
}

okm::KMeansConfig config() {
    okm::KMeansConfig c;
    c.k = 6;
    c.replicates = 16;
    c.online_phase = false;
    return c;
}

void BM_KMeansSerial(benchmark::State& state) {
    const auto ds = blobs(static_cast<std::size_t>(state.range(0)), 8, 6, 1);
    for (auto _ : state) benchmark::DoNotOptimize(okm::kmeans_serial(ds, config()).best.total_sum);
}

void BM_KMeansParallel(benchmark::State& state) {
    const auto ds = blobs(static_cast<std::size_t>(state.range(0)), 8, 6, 1);
    for (auto _ : state) benchmark::DoNotOptimize(okm::kmeans(ds, config()).best.total_sum);
}

void BM_FlagSerial(benchmark::State& state) {
    const auto ds = blobs(static_cast<std::size_t>(state.range(0)), 32, 4, 2);
    for (auto _ : state) benchmark::DoNotOptimize(okm::flag_outliers_serial(ds, ds.columns()).union_rows.size());
}

void BM_FlagParallel(benchmark::State& state) {
    const auto ds = blobs(static_cast<std::size_t>(state.range(0)), 32, 4, 2);
    for (auto _ : state) benchmark::DoNotOptimize(okm::flag_outliers(ds, ds.columns()).union_rows.size());
}

} // namespace

BENCHMARK(BM_KMeansSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KMeansParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlagSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlagParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
