#pragma once

#include "splatseg/camera_io.hpp"
#include "splatseg/scene.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace splatseg {

inline constexpr std::size_t kPromptCandidates = 10;

struct PointPrompt {
    int view_id = 0;
    Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
    std::optional<std::uint32_t> gaussian_index;
};

/// Resolves a clicked pixel to a Gaussian. Candidates are the `candidates`
/// centers in front of the camera closest to the pixel's viewing ray
/// (perpendicular distance, ties by index). Among candidates whose 3*max(scale)
/// reach covers the ray, the one with least camera depth wins; if none covers
/// it, the least-depth candidate wins.
///
/// Throws InputError for pixels outside the image, LookupError when no
/// Gaussian has positive depth.
std::uint32_t backproject_prompt(const GaussianScene& scene, const CameraView& view, const Eigen::Vector2d& pixel,
                                 std::size_t candidates = kPromptCandidates);

enum class PromptStatus { kInFrame, kOutOfFrame, kBehindCamera };
std::string to_string(PromptStatus status);

struct PropagatedPrompt {
    int view_id = 0;
    PromptStatus status = PromptStatus::kInFrame;
    Eigen::Vector2d pixel = Eigen::Vector2d::Zero(); // projected position, also set when out of frame
};

/// Projects Gaussian `gaussian_index`'s center into every view. Views where
/// it is behind the near plane or outside the image are reported, not dropped.
std::vector<PropagatedPrompt> project_prompts_to_views(const GaussianScene& scene, std::uint32_t gaussian_index,
                                                       std::span<const CameraView> views);

/// JSON array of {view_id, x, y}.
std::vector<PointPrompt> load_prompts(const std::filesystem::path& path);
std::vector<PointPrompt> parse_prompts(const std::string& json_text, const std::string& origin = "<memory>");

/// Resolves every prompt against its view and writes
/// {"prompts": [{view_id, x, y, gaussian_index, propagated: [...]}],
///  "per_view": {"<view_id>": [{x, y, gaussian_index}]}}.
std::string propagate_prompts_json(const GaussianScene& scene, const std::vector<CameraEntry>& cameras,
                                   std::span<const PointPrompt> prompts);

} // namespace splatseg
