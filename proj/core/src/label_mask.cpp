#include "splatseg/label_mask.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace splatseg {

std::uint32_t LabelMask::num_objects() const {
    if (labels.empty()) return 0;
    return static_cast<std::uint32_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

LabelMask make_mask(const CameraView& view, std::uint16_t fill) {
    LabelMask m;
    m.view_id = view.view_id;
    m.width = view.width;
    m.height = view.height;
    m.labels.assign(view.pixel_count(), fill);
    return m;
}

LabelMask load_label_mask(const std::filesystem::path& path, int view_id) {
    Image16 image = read_png_gray(path);
    LabelMask m;
    m.view_id = view_id;
    m.width = image.width;
    m.height = image.height;
    m.labels = std::move(image.pixels);
    return m;
}

void save_label_mask(const LabelMask& mask, const std::filesystem::path& path) {
    const std::string bytes = encode_png16(Image16{mask.width, mask.height, mask.labels});
    write_file(path, bytes);
}

std::optional<LabelMask> find_view_mask(const std::filesystem::path& dir, int view_id) {
    const auto path = dir / fmt::format("{}.png", view_id);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return load_label_mask(path, view_id);
}

} // namespace splatseg
