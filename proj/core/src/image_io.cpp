#include "splatseg/image_io.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>
#include <png.h>

#include <cstring>
#include <fstream>
#include <sstream>

namespace splatseg {
namespace {

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw IoError("png: cannot allocate writer");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw IoError("png: cannot allocate reader");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), length);
}

void flush_nothing(png_structp) {}

struct ReadCursor {
    std::span<const char> bytes;
    std::size_t pos = 0;
};

void read_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + length > cur->bytes.size()) png_error(png, "truncated PNG");
    std::memcpy(data, cur->bytes.data() + cur->pos, length);
    cur->pos += length;
}

std::string encode(int width, int height, int bit_depth, int color_type, const std::vector<png_bytep>& rows) {
    std::string out;
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw IoError("png: encoding failed");
    png_set_write_fn(w.png, &out, append_bytes, flush_nothing);
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    png_write_image(w.png, const_cast<png_bytepp>(rows.data()));
    png_write_end(w.png, nullptr);
    return out;
}

} // namespace

std::string encode_png16(const Image16& image) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
        throw InputError("png: image dimensions do not match pixel count");
    }
    // PNG stores 16-bit samples big-endian.
    std::vector<std::uint8_t> buffer(image.pixels.size() * 2);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        buffer[2 * i] = static_cast<std::uint8_t>(image.pixels[i] >> 8);
        buffer[2 * i + 1] = static_cast<std::uint8_t>(image.pixels[i] & 0xff);
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + static_cast<std::size_t>(y) * image.width * 2;
    return encode(image.width, image.height, 16, PNG_COLOR_TYPE_GRAY, rows);
}

std::string encode_png_rgb8(int width, int height, std::span<const std::uint8_t> rgb) {
    if (width < 1 || height < 1 || rgb.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
        throw InputError("png: rgb buffer does not match dimensions");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3);
    }
    return encode(width, height, 8, PNG_COLOR_TYPE_RGB, rows);
}

Image16 decode_png_gray(std::span<const char> bytes, const std::string& origin) {
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
        throw FormatError(fmt::format("{}: not a PNG file", origin));
    }
    PngReader r;
    ReadCursor cursor{bytes, 0};
    Image16 image;
    std::vector<std::uint8_t> buffer;
    if (setjmp(png_jmpbuf(r.png))) throw FormatError(fmt::format("{}: corrupt PNG", origin));
    png_set_read_fn(r.png, &cursor, read_bytes);
    png_read_info(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);
    const int bit_depth = png_get_bit_depth(r.png, r.info);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        throw FormatError(fmt::format("{}: label masks must be grayscale PNG", origin));
    }
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    png_read_update_info(r.png, r.info);
    image.width = static_cast<int>(png_get_image_width(r.png, r.info));
    image.height = static_cast<int>(png_get_image_height(r.png, r.info));
    const std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
    buffer.resize(rowbytes * static_cast<std::size_t>(image.height));
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    image.pixels.resize(static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height));
    const bool wide = bit_depth == 16;
    for (int y = 0; y < image.height; ++y) {
        const std::uint8_t* row = rows[static_cast<std::size_t>(y)];
        for (int x = 0; x < image.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * image.width + x;
            image.pixels[i] = wide ? static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]) : row[x];
        }
    }
    return image;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::span<const char> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

Image16 read_png_gray(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    return decode_png_gray(bytes, path.string());
}

void write_float_grid(const std::filesystem::path& path, int width, int height, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InputError("float grid size does not match dimensions");
    }
    std::string bytes(8 + values.size() * 4, '\0');
    const auto w = static_cast<std::uint32_t>(width);
    const auto h = static_cast<std::uint32_t>(height);
    std::memcpy(bytes.data(), &w, 4);
    std::memcpy(bytes.data() + 4, &h, 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto f = static_cast<float>(values[i]);
        std::memcpy(bytes.data() + 8 + 4 * i, &f, 4);
    }
    write_file(path, bytes);
}

FloatGrid read_float_grid(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 8) throw FormatError(fmt::format("{}: float grid header truncated", path.string()));
    std::uint32_t w = 0, h = 0;
    std::memcpy(&w, bytes.data(), 4);
    std::memcpy(&h, bytes.data() + 4, 4);
    FloatGrid grid;
    grid.width = static_cast<int>(w);
    grid.height = static_cast<int>(h);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (bytes.size() != 8 + 4 * n) throw FormatError(fmt::format("{}: float grid payload size mismatch", path.string()));
    grid.values.resize(n);
    std::memcpy(grid.values.data(), bytes.data() + 8, 4 * n);
    return grid;
}

} // namespace splatseg
