#pragma once

#include "splatseg/contribution.hpp"
#include "splatseg/label_mask.hpp"
#include "splatseg/scene.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace splatseg::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
Eigen::Quaterniond random_rotation(Rng& rng);

struct SceneShape {
    std::size_t count = 20;
    double extent = 1.0;     // centers in [-extent, extent]^3
    double min_scale = 0.05;
    double max_scale = 0.3;
    double min_opacity = 0.05;
    double max_opacity = 1.0;
};

GaussianScene random_scene(Rng& rng, const SceneShape& shape);

/// Camera on a sphere of `distance` around the origin looking at it, focal
/// chosen so the unit ball roughly fills the image.
CameraView random_camera(Rng& rng, int view_id, int width, int height, double distance = 4.0);

/// Labels drawn uniformly from [0, num_objects).
LabelMask random_mask(Rng& rng, const CameraView& view, std::uint32_t num_objects);

/// Blobby masks: each pixel takes the label of the nearest of a few random
/// seed points, so labels are spatially coherent.
LabelMask blob_mask(Rng& rng, const CameraView& view, std::uint32_t num_objects);

ContributionMatrix random_contributions(Rng& rng, std::uint32_t num_objects, std::uint32_t num_gaussians,
                                        double zero_fraction = 0.1);

std::vector<std::uint8_t> random_labels(Rng& rng, std::size_t n, double p = 0.5);

} // namespace splatseg::testing
