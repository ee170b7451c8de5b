#pragma once

#include "splatseg/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace splatseg {

/// Per-pixel object ids for one view; 0 is background.
struct LabelMask {
    int view_id = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> labels; // row-major

    std::uint16_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    /// max label + 1
    std::uint32_t num_objects() const;
};

LabelMask make_mask(const CameraView& view, std::uint16_t fill = 0);

LabelMask load_label_mask(const std::filesystem::path& path, int view_id);
void save_label_mask(const LabelMask& mask, const std::filesystem::path& path);

/// Looks up `{view_id}.png` in `dir`; a missing file means the view has no mask.
std::optional<LabelMask> find_view_mask(const std::filesystem::path& dir, int view_id);

/// A view optionally paired with its mask. Views without a mask contribute
/// nothing to accumulation or the objective.
struct MaskedView {
    CameraView view;
    std::optional<LabelMask> mask;
};

} // namespace splatseg
