#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace splatseg {

/// Single-channel image with 16-bit samples.
struct Image16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;
};

/// 16-bit grayscale PNG, sample value stored verbatim.
std::string encode_png16(const Image16& image);
/// 8-bit RGB PNG from interleaved rgb bytes.
std::string encode_png_rgb8(int width, int height, std::span<const std::uint8_t> rgb);
/// Decodes 8- or 16-bit grayscale PNG into 16-bit samples (8-bit values are
/// kept as-is, not rescaled). Throws FormatError for color images.
Image16 decode_png_gray(std::span<const char> bytes, const std::string& origin = "<memory>");

Image16 read_png_gray(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const char> bytes);
std::string read_file(const std::filesystem::path& path);

/// Raw float grid: width, height as little-endian u32 followed by
/// width * height float32 values, row-major.
void write_float_grid(const std::filesystem::path& path, int width, int height, std::span<const double> values);

struct FloatGrid {
    int width = 0;
    int height = 0;
    std::vector<float> values;
};
FloatGrid read_float_grid(const std::filesystem::path& path);

} // namespace splatseg
