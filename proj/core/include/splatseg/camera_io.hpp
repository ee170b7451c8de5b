#pragma once

#include "splatseg/scene.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace splatseg {

struct CameraEntry {
    CameraView view;
    std::optional<std::string> mask_path;
};

/// Parses a camera file: a JSON array of
/// {view_id, width, height, fx, fy, cx, cy, world_to_camera: [16, row-major], mask_path?, near_clip?}.
/// Every view is validated; duplicate view ids are rejected.
std::vector<CameraEntry> load_cameras(const std::filesystem::path& path);
std::vector<CameraEntry> parse_cameras(const std::string& json_text, const std::string& origin = "<memory>");

void save_cameras(const std::vector<CameraEntry>& cameras, const std::filesystem::path& path);

/// Index of the camera with `view_id`, or LookupError.
const CameraEntry& find_camera(const std::vector<CameraEntry>& cameras, int view_id);

} // namespace splatseg
