#pragma once

#include "splatseg/assignment.hpp"
#include "splatseg/scene.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace splatseg {

/// An edited scene plus, for each kept Gaussian, its index in the source scene.
struct SceneSubset {
    GaussianScene scene;
    std::vector<std::uint32_t> source_index;
};

/// Gaussians belonging to any of `object_ids`, in source order.
/// Throws InputError for ids >= E or a scene/assignment size mismatch.
SceneSubset extract_subset(const GaussianScene& scene, const Assignment& assignment,
                           std::span<const std::uint32_t> object_ids);

/// Complement of extract_subset: deletes every member of `object_ids`.
SceneSubset remove_objects(const GaussianScene& scene, const Assignment& assignment,
                           std::span<const std::uint32_t> object_ids);

} // namespace splatseg
