#include "splatseg/editing.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>

namespace splatseg {
namespace {

std::vector<std::uint8_t> union_of(const GaussianScene& scene, const Assignment& assignment,
                                   std::span<const std::uint32_t> object_ids) {
    if (assignment.num_gaussians != scene.size()) {
        throw InputError(fmt::format("assignment covers {} Gaussians but the scene has {}", assignment.num_gaussians,
                                     scene.size()));
    }
    std::vector<std::uint8_t> selected(scene.size(), 0);
    for (const std::uint32_t id : object_ids) {
        if (id >= assignment.num_objects) {
            throw InputError(fmt::format("unknown object id {} (assignment has E = {})", id, assignment.num_objects));
        }
        for (std::uint32_t i = 0; i < assignment.num_gaussians; ++i) {
            if (assignment.is_member(id, i)) selected[i] = 1;
        }
    }
    return selected;
}

SceneSubset keep_where(const GaussianScene& scene, const std::vector<std::uint8_t>& selected, std::uint8_t keep) {
    SceneSubset out;
    out.scene.source_path = scene.source_path;
    for (std::size_t i = 0; i < scene.size(); ++i) {
        if (selected[i] != keep) continue;
        out.scene.gaussians.push_back(scene.gaussians[i]);
        out.source_index.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

} // namespace

SceneSubset extract_subset(const GaussianScene& scene, const Assignment& assignment,
                           std::span<const std::uint32_t> object_ids) {
    return keep_where(scene, union_of(scene, assignment, object_ids), 1);
}

SceneSubset remove_objects(const GaussianScene& scene, const Assignment& assignment,
                           std::span<const std::uint32_t> object_ids) {
    return keep_where(scene, union_of(scene, assignment, object_ids), 0);
}

} // namespace splatseg
