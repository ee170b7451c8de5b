#include "splatseg/mask_render.hpp"
#include "splatseg/rasterizer.hpp"
#include "splatseg/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

const splatseg::SynthFixture& fixture() {
    static const splatseg::SynthFixture f = [] {
        splatseg::SynthConfig cfg;
        cfg.num_gaussians = 20000;
        cfg.num_views = 1;
        cfg.width = cfg.height = 256;
        return splatseg::generate_synthetic(cfg);
    }();
    return f;
}

void BM_PrepareView(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(splatseg::prepare_view(f.scene, f.cameras[0].view));
}
BENCHMARK(BM_PrepareView)->Unit(benchmark::kMillisecond);

void BM_RenderProperty(benchmark::State& state) {
    const auto& f = fixture();
    const splatseg::PreparedView pv = splatseg::prepare_view(f.scene, f.cameras[0].view);
    const int channels = static_cast<int>(state.range(0));
    const std::vector<double> channel(f.scene.size() * static_cast<std::size_t>(channels), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(splatseg::render_property(pv, channel, channels));
}
BENCHMARK(BM_RenderProperty)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_RenderBinaryMask(benchmark::State& state) {
    const auto& f = fixture();
    splatseg::Assignment s;
    s.mode = splatseg::AssignmentMode::kBinary;
    s.num_objects = 2;
    s.num_gaussians = static_cast<std::uint32_t>(f.scene.size());
    s.membership.assign(f.labels.begin(), f.labels.end());
    for (auto _ : state) benchmark::DoNotOptimize(splatseg::render_binary_mask(f.scene, s, f.cameras[0].view, 0.1));
}
BENCHMARK(BM_RenderBinaryMask)->Unit(benchmark::kMillisecond);

} // namespace
