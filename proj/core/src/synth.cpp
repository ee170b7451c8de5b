#include "splatseg/synth.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/ply_io.hpp"
#include "splatseg/rasterizer.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

namespace splatseg {
namespace {

Eigen::Quaterniond random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    return q.normalized();
}

Eigen::Vector3d in_ball(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Eigen::Vector3d p(u(rng), u(rng), u(rng));
        if (p.squaredNorm() <= 1.0) return p * radius;
    }
}

Gaussian random_gaussian(std::mt19937_64& rng, const Eigen::Vector3d& center, double min_scale, double max_scale,
                         double min_opacity, double max_opacity) {
    std::uniform_real_distribution<double> s(min_scale, max_scale);
    std::uniform_real_distribution<double> o(min_opacity, max_opacity);
    std::uniform_real_distribution<double> c(-1.5, 1.5);
    Gaussian g;
    g.center = center;
    g.rotation = random_rotation(rng);
    g.scale = {s(rng), s(rng), s(rng)};
    g.opacity = o(rng);
    g.color_dc = {c(rng), c(rng), c(rng)};
    return g;
}

CameraView make_camera(int id, int width, int height, double focal, const Eigen::Vector3d& eye,
                       const Eigen::Vector3d& target) {
    CameraView v;
    v.view_id = id;
    v.width = width;
    v.height = height;
    v.fx = v.fy = focal;
    v.cx = 0.5 * (width - 1);
    v.cy = 0.5 * (height - 1);
    v.world_to_camera = look_at(eye, target);
    return v;
}

void build_two_cluster(const SynthConfig& config, std::mt19937_64& rng, SynthFixture& f) {
    const Eigen::Vector3d fg_center(-0.8, 0.0, 0.0);
    const Eigen::Vector3d bg_center(0.8, 0.0, 0.0);
    const std::size_t n_fg = std::max<std::size_t>(1, config.num_gaussians / 4);
    f.num_objects = 2;
    for (std::size_t i = 0; i < config.num_gaussians; ++i) {
        const bool fg = i % 4 == 0 && i / 4 < n_fg;
        const Eigen::Vector3d c = (fg ? fg_center : bg_center) + in_ball(rng, 0.3);
        f.scene.gaussians.push_back(random_gaussian(rng, c, 0.02, 0.05, 0.6, 0.95));
        f.labels.push_back(fg ? 1 : 0);
    }
    // Front arc of +-30 degrees keeps the two blobs apart in every view.
    const double focal = 1.0 * config.width;
    for (int v = 0; v < config.num_views; ++v) {
        const double t = config.num_views > 1 ? static_cast<double>(v) / (config.num_views - 1) : 0.5;
        const double azimuth = (-30.0 + 60.0 * t) * std::numbers::pi / 180.0;
        const double height = v % 2 == 0 ? 0.4 : -0.4;
        const Eigen::Vector3d eye(3.2 * std::sin(azimuth), height, -3.2 * std::cos(azimuth));
        f.cameras.push_back({make_camera(v, config.width, config.height, focal, eye, Eigen::Vector3d::Zero()), {}});
    }
}

void build_random(const SynthConfig& config, std::mt19937_64& rng, SynthFixture& f) {
    f.num_objects = config.foreground_objects + 1;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::Vector3d> seeds;
    for (std::uint32_t e = 0; e < f.num_objects; ++e) seeds.emplace_back(u(rng), u(rng), u(rng));
    const double spacing = 2.0 / std::cbrt(static_cast<double>(std::max<std::size_t>(1, config.num_gaussians)));
    for (std::size_t i = 0; i < config.num_gaussians; ++i) {
        const Eigen::Vector3d c(u(rng), u(rng), u(rng));
        std::uint16_t label = 0;
        for (std::uint32_t e = 1; e < f.num_objects; ++e) {
            if ((c - seeds[e]).squaredNorm() < (c - seeds[label]).squaredNorm()) label = static_cast<std::uint16_t>(e);
        }
        f.scene.gaussians.push_back(random_gaussian(rng, c, 0.15 * spacing, 0.6 * spacing, 0.3, 0.95));
        f.labels.push_back(label);
    }
    const double focal = 0.9 * config.width;
    for (int v = 0; v < config.num_views; ++v) {
        const double azimuth = 2.0 * std::numbers::pi * v / std::max(1, config.num_views) + 0.3;
        const double height = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
        const Eigen::Vector3d eye(4.0 * std::sin(azimuth), height, -4.0 * std::cos(azimuth));
        f.cameras.push_back({make_camera(v, config.width, config.height, focal, eye, Eigen::Vector3d::Zero()), {}});
    }
}

} // namespace

SynthPreset parse_synth_preset(const std::string& text) {
    if (text == "two-cluster") return SynthPreset::kTwoCluster;
    if (text == "random") return SynthPreset::kRandom;
    throw InputError(fmt::format("unknown preset '{}' (expected two-cluster or random)", text));
}

LabelMask ground_truth_mask(const GaussianScene& scene, std::span<const std::uint16_t> labels,
                            std::uint32_t num_objects, const CameraView& view, double tau) {
    LabelMask mask = make_mask(view);
    std::vector<double> best(view.pixel_count(), std::numeric_limits<double>::infinity());
    for (std::uint32_t e = 1; e < num_objects; ++e) {
        std::vector<std::uint8_t> members(scene.size());
        for (std::size_t i = 0; i < scene.size(); ++i) members[i] = labels[i] == e ? 1 : 0;
        const RenderOutput r = render_naive(scene, view, {}, 0, RenderOptions{}, members);
        for (std::size_t px = 0; px < r.alpha.size(); ++px) {
            if (r.alpha[px] > tau && r.depth[px] < best[px]) {
                best[px] = r.depth[px];
                mask.labels[px] = static_cast<std::uint16_t>(e);
            }
        }
    }
    return mask;
}

SynthFixture generate_synthetic(const SynthConfig& config) {
    if (config.num_gaussians < 1) throw InputError("synthetic scene needs at least one Gaussian");
    if (config.num_views < 1) throw InputError("synthetic scene needs at least one view");
    if (config.width < 1 || config.height < 1) throw InputError("synthetic views need a positive size");
    if (config.preset == SynthPreset::kRandom && config.foreground_objects < 1) {
        throw InputError("random preset needs at least one foreground object");
    }
    if (!(config.label_noise >= 0.0 && config.label_noise <= 1.0)) throw InputError("label noise must be in [0, 1]");

    std::mt19937_64 rng(config.seed);
    SynthFixture f;
    f.scene.source_path = fmt::format("synthetic:seed={}", config.seed);
    if (config.preset == SynthPreset::kTwoCluster) {
        build_two_cluster(config, rng, f);
    } else {
        build_random(config, rng, f);
    }
    for (const CameraEntry& c : f.cameras) {
        LabelMask m = ground_truth_mask(f.scene, f.labels, f.num_objects, c.view);
        f.gt_masks.push_back(std::move(m));
    }
    return f;
}

void write_fixture(const SynthFixture& fixture, const SynthConfig& config, const std::filesystem::path& dir,
                   const std::vector<int>& mask_views) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "gt");
    fs::create_directories(dir / "masks");
    export_ply(fixture.scene, dir / "scene.ply");

    std::set<int> with_mask(mask_views.begin(), mask_views.end());
    std::mt19937_64 noise_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::bernoulli_distribution flip(config.label_noise);
    std::uniform_int_distribution<int> any_label(0, static_cast<int>(fixture.num_objects) - 1);

    std::vector<CameraEntry> cameras = fixture.cameras;
    for (std::size_t k = 0; k < cameras.size(); ++k) {
        const int id = cameras[k].view.view_id;
        save_label_mask(fixture.gt_masks[k], dir / "gt" / fmt::format("{}.png", id));
        if (!with_mask.empty() && !with_mask.contains(id)) continue;
        LabelMask training = fixture.gt_masks[k];
        if (config.label_noise > 0.0) {
            for (auto& l : training.labels) {
                if (flip(noise_rng)) l = static_cast<std::uint16_t>(any_label(noise_rng));
            }
        }
        const std::string rel = fmt::format("masks/{}.png", id);
        save_label_mask(training, dir / rel);
        cameras[k].mask_path = rel;
    }
    save_cameras(cameras, dir / "cameras.json");

    const nlohmann::json labels = {{"num_objects", fixture.num_objects}, {"labels", fixture.labels}};
    std::ofstream out(dir / "gt_labels.json", std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", (dir / "gt_labels.json").string()));
    out << labels.dump() << '\n';
}

} // namespace splatseg
