#include "generators.hpp"
#include "oracles.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/rasterizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace splatseg;
using namespace splatseg::testing;

namespace {

std::vector<double> random_channel(Rng& rng, std::size_t n, int channels) {
    std::vector<double> c(n * static_cast<std::size_t>(channels));
    for (double& x : c) x = uniform(rng, -2.0, 2.0);
    return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST(Rasterizer, TiledMatchesNaiveWithoutEarlyTermination) {
    Rng rng(51);
    for (int trial = 0; trial < 8; ++trial) {
        const GaussianScene scene = random_scene(rng, {.count = 60});
        const CameraView v = random_camera(rng, 0, 37 + trial, 29 + 2 * trial);
        const auto ch = random_channel(rng, scene.size(), 3);
        const RenderOutput tiled = render_property(scene, v, ch, 3, kExactRender);
        const RenderOutput naive = render_naive(scene, v, ch, 3, kExactRender);
        EXPECT_LT(max_diff(tiled.value, naive.value), 1e-5);
        EXPECT_LT(max_diff(tiled.alpha, naive.alpha), 1e-5);
        EXPECT_LT(max_diff(tiled.depth, naive.depth), 1e-5);
    }
}

TEST(Rasterizer, TiledMatchesReferenceCompositingWithDefaults) {
    Rng rng(52);
    for (int trial = 0; trial < 5; ++trial) {
        const GaussianScene scene = random_scene(rng, {.count = 80, .min_opacity = 0.5});
        const CameraView v = random_camera(rng, 0, 40, 40);
        const auto ch = random_channel(rng, scene.size(), 2);
        const RenderOutput tiled = render_property(scene, v, ch, 2);
        const ReferenceImage ref = reference_render(scene, v, ch, 2, RenderOptions{});
        EXPECT_LT(max_diff(tiled.value, ref.value), 1e-9);
        EXPECT_LT(max_diff(tiled.alpha, ref.alpha), 1e-9);
        EXPECT_LT(max_diff(tiled.depth, ref.depth), 1e-9);
    }
}

TEST(Rasterizer, BinningCoversEveryTouchedTileInDepthOrder) {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianScene scene = random_scene(rng, {.count = 40});
        const CameraView v = random_camera(rng, 0, 50, 35);
        const PreparedView pv = prepare_view(scene, v);
        for (std::size_t k = 0; k < pv.projected.size(); ++k) {
            for (const auto& [tx, ty] : tiles_touched(pv.projected[k], v)) {
                const auto list = pv.binning.tile(tx, ty);
                EXPECT_NE(std::find(list.begin(), list.end(), k), list.end());
            }
        }
        for (int ty = 0; ty < pv.binning.tiles_y; ++ty) {
            for (int tx = 0; tx < pv.binning.tiles_x; ++tx) {
                const auto list = pv.binning.tile(tx, ty);
                for (std::size_t j = 1; j < list.size(); ++j) {
                    const auto& a = pv.projected[list[j - 1]];
                    const auto& b = pv.projected[list[j]];
                    EXPECT_TRUE(a.depth < b.depth || (a.depth == b.depth && a.gaussian_index < b.gaussian_index));
                }
            }
        }
        EXPECT_EQ(pv.binning.tiles_x, 4);
        EXPECT_EQ(pv.binning.tiles_y, 3);
    }
}

TEST(Rasterizer, AccumulatedAlphaBoundedAndTransmittanceNonIncreasing) {
    Rng rng(54);
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianScene scene = random_scene(rng, {.count = 100, .min_opacity = 0.3});
        const CameraView v = random_camera(rng, 0, 32, 32);
        const PreparedView pv = prepare_view(scene, v);
        for (const RenderOptions& opt : {RenderOptions{}, kExactRender, RenderOptions{false, false}}) {
            visit_pixel_samples(pv, opt, [](int, int, std::span<const BlendSample> samples) {
                double rho = 0.0;
                double prev_t = 1.0;
                for (const BlendSample& s : samples) {
                    EXPECT_LE(s.transmittance, prev_t);
                    EXPECT_GE(s.alpha, 0.0);
                    EXPECT_LE(s.alpha, kMaxAlpha);
                    prev_t = s.transmittance;
                    rho += s.weight();
                }
                EXPECT_GE(rho, 0.0);
                EXPECT_LE(rho, 1.0 + 1e-12);
            });
        }
    }
}

TEST(Rasterizer, RenderingIsLinearInTheChannel) {
    Rng rng(55);
    const GaussianScene scene = random_scene(rng, {.count = 80});
    const CameraView v = random_camera(rng, 0, 48, 48);
    const PreparedView pv = prepare_view(scene, v);
    for (int trial = 0; trial < 5; ++trial) {
        const auto x = random_channel(rng, scene.size(), 1);
        const auto y = random_channel(rng, scene.size(), 1);
        const double c = uniform(rng, -3, 3);
        std::vector<double> mix(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) mix[i] = c * x[i] + y[i];
        const auto rx = render_property(pv, x, 1);
        const auto ry = render_property(pv, y, 1);
        const auto rm = render_property(pv, mix, 1);
        for (std::size_t px = 0; px < rm.value.size(); ++px) {
            EXPECT_NEAR(rm.value[px], c * rx.value[px] + ry.value[px], 1e-9);
        }
    }
}

TEST(Rasterizer, SingleSplatCenterPixel) {
    GaussianScene scene;
    Gaussian g;
    g.center = {0, 0, 2};
    g.scale = Eigen::Vector3d::Constant(0.05);
    g.opacity = 0.7;
    scene.gaussians.push_back(g);
    g.opacity = 1.0;
    g.center = {0, 0, 3};
    scene.gaussians.push_back(g);
    CameraView v;
    v.width = v.height = 17;
    v.fx = v.fy = 20;
    v.cx = v.cy = 8;
    const std::vector<double> ch = {2.0, 5.0};
    const RenderOutput r = render_property(scene, v, ch, 1);
    const std::size_t px = r.pixel(8, 8);
    const double w0 = 0.7;
    const double w1 = 0.99 * (1.0 - 0.7);
    EXPECT_NEAR(r.alpha[px], w0 + w1, 1e-12);
    EXPECT_NEAR(r.value[px], 2.0 * w0 + 5.0 * w1, 1e-12);
    EXPECT_NEAR(r.depth[px], (2.0 * w0 + 3.0 * w1) / (w0 + w1), 1e-12);
    EXPECT_EQ(r.alpha[r.pixel(0, 0)], 0.0);
    EXPECT_EQ(r.depth[r.pixel(0, 0)], 0.0);
}

TEST(Rasterizer, EqualDepthTiesBreakByIndex) {
    GaussianScene scene;
    Gaussian g;
    g.center = {0, 0, 2};
    g.scale = Eigen::Vector3d::Constant(0.05);
    g.opacity = 0.5;
    scene.gaussians = {g, g};
    CameraView v;
    v.width = v.height = 9;
    v.fx = v.fy = 20;
    v.cx = v.cy = 4;
    const RenderOutput r = render_property(scene, v, std::vector<double>{1.0, 0.0}, 1);
    EXPECT_NEAR(r.value[r.pixel(4, 4)], 0.5, 1e-12); // index 0 is in front
}

TEST(Rasterizer, AlphaFloorDropsFaintSplats) {
    GaussianScene scene;
    Gaussian g;
    g.center = {0, 0, 2};
    g.scale = Eigen::Vector3d::Constant(0.05);
    g.opacity = 0.003;
    scene.gaussians.push_back(g);
    CameraView v;
    v.width = v.height = 9;
    v.fx = v.fy = 20;
    v.cx = v.cy = 4;
    const std::vector<double> ch = {1.0};
    EXPECT_EQ(render_property(scene, v, ch, 1).alpha[40], 0.0);
    EXPECT_NEAR(render_property(scene, v, ch, 1, RenderOptions{true, false}).alpha[40], 0.003, 1e-12);
}

TEST(Rasterizer, EarlyTerminationOnlyDropsNegligibleMass) {
    Rng rng(56);
    const GaussianScene scene = random_scene(rng, {.count = 300, .extent = 0.3, .min_opacity = 0.9});
    const CameraView v = random_camera(rng, 0, 32, 32);
    const auto ch = random_channel(rng, scene.size(), 1);
    const auto fast = render_property(scene, v, ch, 1);
    const auto exact = render_property(scene, v, ch, 1, kExactRender);
    EXPECT_LT(max_diff(fast.alpha, exact.alpha), 1e-4);
    EXPECT_LT(max_diff(fast.value, exact.value), 2e-4);
}

TEST(Rasterizer, ResultIndependentOfThreadCount) {
    Rng rng(57);
    const GaussianScene scene = random_scene(rng, {.count = 200});
    const CameraView v = random_camera(rng, 0, 64, 64);
    const auto ch = random_channel(rng, scene.size(), 1);
    ::setenv("SPLATSEG_THREADS", "1", 1);
    const auto one = render_property(scene, v, ch, 1);
    ::setenv("SPLATSEG_THREADS", "7", 1);
    const auto many = render_property(scene, v, ch, 1);
    ::unsetenv("SPLATSEG_THREADS");
    EXPECT_EQ(one.value, many.value);
    EXPECT_EQ(one.alpha, many.alpha);
}

TEST(Rasterizer, RejectsMismatchedChannel) {
    Rng rng(58);
    const GaussianScene scene = random_scene(rng, {.count = 4});
    const CameraView v = random_camera(rng, 0, 8, 8);
    EXPECT_THROW(render_property(scene, v, std::vector<double>(5), 1), InputError);
    EXPECT_THROW(render_naive(scene, v, std::vector<double>(4), 1, kExactRender, std::vector<std::uint8_t>(3)),
                 InputError);
}

TEST(Rasterizer, SubsetRenderIgnoresNonMembers) {
    Rng rng(59);
    const GaussianScene scene = random_scene(rng, {.count = 50});
    const CameraView v = random_camera(rng, 0, 32, 32);
    const auto members = random_labels(rng, scene.size());
    GaussianScene subset;
    for (std::size_t i = 0; i < scene.size(); ++i) {
        if (members[i]) subset.gaussians.push_back(scene.gaussians[i]);
    }
    const auto a = render_subset_alpha_depth(scene, v, members);
    const auto b = render_property(subset, v, {}, 0);
    EXPECT_LT(max_diff(a.alpha, b.alpha), 1e-15);
    EXPECT_LT(max_diff(a.depth, b.depth), 1e-15);
}
