#include "splatseg/assignment.hpp"
#include "splatseg/contribution.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

splatseg::ContributionMatrix random_matrix(std::uint32_t e, std::uint32_t n) {
    splatseg::ContributionMatrix a(e, n);
    std::mt19937_64 rng(7);
    std::exponential_distribution<float> dist(1.0f);
    for (float& v : a.values()) v = dist(rng);
    return a;
}

void BM_AssignBinary(benchmark::State& state) {
    const auto a = random_matrix(2, static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(splatseg::assign_binary(a, 0.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssignBinary)->RangeMultiplier(10)->Range(10'000, 1'000'000)->Unit(benchmark::kMillisecond);

void BM_AssignScene(benchmark::State& state) {
    const auto a = random_matrix(static_cast<std::uint32_t>(state.range(0)), 1'000'000);
    for (auto _ : state) benchmark::DoNotOptimize(splatseg::assign_scene(a, 0.0));
    state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_AssignScene)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
