#pragma once

#include "splatseg/camera_io.hpp"
#include "splatseg/label_mask.hpp"
#include "splatseg/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace splatseg {

enum class SynthPreset {
    kTwoCluster, // foreground blob (object 1) beside a background blob, disjoint in every view
    kRandom,     // Gaussians in a box, objects = Voronoi cells of random seeds
};

SynthPreset parse_synth_preset(const std::string& text);

struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t num_gaussians = 2000;
    int num_views = 12;
    int width = 128;
    int height = 128;
    SynthPreset preset = SynthPreset::kTwoCluster;
    std::uint32_t foreground_objects = 2; // random preset only
    double label_noise = 0.0;             // probability a training-mask pixel gets a random label
};

struct SynthFixture {
    GaussianScene scene;
    std::vector<CameraEntry> cameras;
    std::uint32_t num_objects = 2;     // E, background included
    std::vector<std::uint16_t> labels; // ground-truth object per Gaussian
    std::vector<LabelMask> gt_masks;   // one per camera, noise-free
};

/// Deterministic in `config`. Ground-truth masks come from the naive renderer:
/// each pixel takes the nearest object (blended depth) whose own subset
/// reaches rho > 0.1 there.
SynthFixture generate_synthetic(const SynthConfig& config);

/// Ground-truth mask rule used by generate_synthetic, exposed for tests.
LabelMask ground_truth_mask(const GaussianScene& scene, std::span<const std::uint16_t> labels,
                            std::uint32_t num_objects, const CameraView& view, double tau = 0.1);

/// Writes scene.ply, cameras.json, gt/{id}.png for every view, masks/{id}.png
/// for each id in `mask_views` (all views when empty; label noise applied
/// here) and gt_labels.json.
void write_fixture(const SynthFixture& fixture, const SynthConfig& config, const std::filesystem::path& dir,
                   const std::vector<int>& mask_views = {});

} // namespace splatseg
