#include "splatseg/contribution.hpp"
#include "splatseg/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_Accumulate(benchmark::State& state) {
    splatseg::SynthConfig cfg;
    cfg.num_gaussians = static_cast<std::size_t>(state.range(0));
    cfg.num_views = 6;
    cfg.width = cfg.height = static_cast<int>(state.range(1));
    const splatseg::SynthFixture f = splatseg::generate_synthetic(cfg);
    std::vector<splatseg::MaskedView> views;
    for (std::size_t v = 0; v < f.cameras.size(); ++v) views.push_back({f.cameras[v].view, f.gt_masks[v]});
    for (auto _ : state) {
        benchmark::DoNotOptimize(splatseg::accumulate_contributions(f.scene, views, f.num_objects));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(views.size()) * state.range(1) *
                            state.range(1));
}
BENCHMARK(BM_Accumulate)->Args({2000, 128})->Args({20000, 256})->Unit(benchmark::kMillisecond);

} // namespace
