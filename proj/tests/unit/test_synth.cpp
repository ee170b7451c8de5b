#include "temp_dir.hpp"

#include "splatseg/camera_io.hpp"
#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"
#include "splatseg/ply_io.hpp"
#include "splatseg/synth.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>

using namespace splatseg;
using namespace splatseg::testing;

TEST(Synth, SameConfigGivesByteIdenticalFiles) {
    TempDir a, b;
    SynthConfig cfg;
    cfg.seed = 5;
    cfg.num_gaussians = 300;
    cfg.num_views = 4;
    cfg.width = cfg.height = 32;
    cfg.label_noise = 0.05;
    write_fixture(generate_synthetic(cfg), cfg, a.path(), {0, 2});
    write_fixture(generate_synthetic(cfg), cfg, b.path(), {0, 2});
    for (const char* f : {"scene.ply", "cameras.json", "gt/0.png", "gt/3.png", "masks/0.png", "masks/2.png",
                          "gt_labels.json"}) {
        EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
    }
    EXPECT_FALSE(std::filesystem::exists(a / "masks/1.png"));
    EXPECT_NE(read_file(a / "masks/0.png"), read_file(a / "gt/0.png"));
}

TEST(Synth, DifferentSeedsDiffer) {
    SynthConfig cfg;
    cfg.num_gaussians = 50;
    cfg.num_views = 2;
    const auto x = generate_synthetic(cfg);
    cfg.seed = 1;
    const auto y = generate_synthetic(cfg);
    EXPECT_NE(x.scene.gaussians[0].center, y.scene.gaussians[0].center);
}

TEST(Synth, TwoClusterLayout) {
    SynthConfig cfg;
    cfg.num_gaussians = 400;
    cfg.num_views = 6;
    cfg.width = cfg.height = 48;
    const SynthFixture f = generate_synthetic(cfg);
    EXPECT_EQ(f.num_objects, 2u);
    EXPECT_EQ(std::count(f.labels.begin(), f.labels.end(), 1), 100);
    for (std::size_t i = 0; i < f.scene.size(); ++i) {
        EXPECT_EQ(f.labels[i] == 1, f.scene.gaussians[i].center.x() < 0.0);
    }
    for (std::size_t v = 0; v < f.cameras.size(); ++v) {
        const LabelMask& gt = f.gt_masks[v];
        EXPECT_EQ(gt.labels, ground_truth_mask(f.scene, f.labels, 2, f.cameras[v].view).labels);
        EXPECT_GT(std::count(gt.labels.begin(), gt.labels.end(), 1), 0);
    }
}

TEST(Synth, RandomPresetLabelsAndFiles) {
    TempDir dir;
    SynthConfig cfg;
    cfg.preset = SynthPreset::kRandom;
    cfg.num_gaussians = 200;
    cfg.num_views = 3;
    cfg.width = cfg.height = 24;
    cfg.foreground_objects = 3;
    const SynthFixture f = generate_synthetic(cfg);
    EXPECT_EQ(f.num_objects, 4u);
    for (auto l : f.labels) EXPECT_LT(l, 4);
    write_fixture(f, cfg, dir.path());
    EXPECT_EQ(load_scene_ply(dir / "scene.ply").size(), 200u);
    const auto cams = load_cameras(dir / "cameras.json");
    ASSERT_EQ(cams.size(), 3u);
    EXPECT_EQ(cams[1].mask_path.value(), "masks/1.png");
    const auto labels = nlohmann::json::parse(read_file(dir / "gt_labels.json"));
    EXPECT_EQ(labels.at("num_objects").get<int>(), 4);
}

TEST(Synth, RejectsBadConfig) {
    SynthConfig cfg;
    cfg.num_gaussians = 0;
    EXPECT_THROW(generate_synthetic(cfg), InputError);
    cfg = SynthConfig{};
    cfg.label_noise = 2.0;
    EXPECT_THROW(generate_synthetic(cfg), InputError);
    EXPECT_THROW(parse_synth_preset("cube"), InputError);
}
