#include "splatseg/ply_io.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

static_assert(std::endian::native == std::endian::little, "PLY I/O assumes a little-endian host");

namespace splatseg {
namespace {

enum class ScalarType { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32, kFloat32, kFloat64 };

std::optional<ScalarType> parse_scalar_type(const std::string& name) {
    static const std::unordered_map<std::string, ScalarType> kTypes = {
        {"char", ScalarType::kInt8},     {"int8", ScalarType::kInt8},       {"uchar", ScalarType::kUInt8},
        {"uint8", ScalarType::kUInt8},   {"short", ScalarType::kInt16},     {"int16", ScalarType::kInt16},
        {"ushort", ScalarType::kUInt16}, {"uint16", ScalarType::kUInt16},   {"int", ScalarType::kInt32},
        {"int32", ScalarType::kInt32},   {"uint", ScalarType::kUInt32},     {"uint32", ScalarType::kUInt32},
        {"float", ScalarType::kFloat32}, {"float32", ScalarType::kFloat32}, {"double", ScalarType::kFloat64},
        {"float64", ScalarType::kFloat64},
    };
    const auto it = kTypes.find(name);
    if (it == kTypes.end()) return std::nullopt;
    return it->second;
}

std::size_t scalar_size(ScalarType t) {
    switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUInt8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUInt16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUInt32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
    }
    return 0;
}

template <typename T>
T load_as(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
}

double read_scalar(ScalarType t, const char* p) {
    switch (t) {
    case ScalarType::kInt8: return load_as<std::int8_t>(p);
    case ScalarType::kUInt8: return load_as<std::uint8_t>(p);
    case ScalarType::kInt16: return load_as<std::int16_t>(p);
    case ScalarType::kUInt16: return load_as<std::uint16_t>(p);
    case ScalarType::kInt32: return load_as<std::int32_t>(p);
    case ScalarType::kUInt32: return load_as<std::uint32_t>(p);
    case ScalarType::kFloat32: return load_as<float>(p);
    case ScalarType::kFloat64: return load_as<double>(p);
    }
    return 0.0;
}

struct Property {
    std::string name;
    ScalarType type = ScalarType::kFloat32;
    std::size_t offset = 0;
    bool is_list = false;
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
    std::size_t stride = 0;
};

struct Header {
    std::vector<Element> elements;
    std::streamoff data_offset = 0;
};

Header parse_header(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
        throw FormatError(fmt::format("{}: not a PLY file", origin));
    }
    Header header;
    bool format_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream tokens(line);
        std::string keyword;
        tokens >> keyword;
        if (keyword == "end_header") {
            if (!format_seen) throw FormatError(fmt::format("{}: missing format line", origin));
            header.data_offset = in.tellg();
            return header;
        }
        if (keyword == "format") {
            std::string format;
            tokens >> format;
            if (format != "binary_little_endian") {
                throw FormatError(fmt::format("{}: unsupported PLY format '{}' (binary_little_endian required)", origin, format));
            }
            format_seen = true;
        } else if (keyword == "element") {
            Element e;
            tokens >> e.name >> e.count;
            if (!tokens) throw FormatError(fmt::format("{}: malformed element line '{}'", origin, line));
            header.elements.push_back(std::move(e));
        } else if (keyword == "property") {
            if (header.elements.empty()) throw FormatError(fmt::format("{}: property before any element", origin));
            Element& e = header.elements.back();
            std::string type_name;
            tokens >> type_name;
            Property p;
            if (type_name == "list") {
                std::string count_type, item_type;
                tokens >> count_type >> item_type >> p.name;
                p.is_list = true;
            } else {
                const auto type = parse_scalar_type(type_name);
                if (!type) throw FormatError(fmt::format("{}: unknown property type '{}'", origin, type_name));
                tokens >> p.name;
                p.type = *type;
                p.offset = e.stride;
                e.stride += scalar_size(*type);
            }
            if (p.name.empty()) throw FormatError(fmt::format("{}: malformed property line '{}'", origin, line));
            e.properties.push_back(std::move(p));
        } else if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) {
            continue;
        } else {
            throw FormatError(fmt::format("{}: unexpected header line '{}'", origin, line));
        }
    }
    throw FormatError(fmt::format("{}: header is missing end_header", origin));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

GaussianScene load_scene_ply(const std::filesystem::path& path) {
    const std::string origin = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}'", origin));

    const Header header = parse_header(in, origin);
    const auto vertex_it = std::find_if(header.elements.begin(), header.elements.end(),
                                        [](const Element& e) { return e.name == "vertex"; });
    if (vertex_it == header.elements.end()) throw FormatError(fmt::format("{}: no vertex element", origin));

    std::size_t skip_bytes = 0;
    for (auto it = header.elements.begin(); it != vertex_it; ++it) {
        if (std::any_of(it->properties.begin(), it->properties.end(), [](const Property& p) { return p.is_list; })) {
            throw FormatError(fmt::format("{}: list properties before the vertex element are not supported", origin));
        }
        skip_bytes += it->count * it->stride;
    }
    const Element& vertex = *vertex_it;
    if (std::any_of(vertex.properties.begin(), vertex.properties.end(), [](const Property& p) { return p.is_list; })) {
        throw FormatError(fmt::format("{}: list properties in the vertex element are not supported", origin));
    }
    if (vertex.count == 0) throw DataError(fmt::format("{}: scene has no Gaussians", origin));

    auto require = [&](const std::string& name) -> const Property& {
        for (const Property& p : vertex.properties) {
            if (p.name == name) return p;
        }
        throw FormatError(fmt::format("{}: missing required vertex property '{}'", origin, name));
    };
    const std::array<const Property*, 3> pos = {&require("x"), &require("y"), &require("z")};
    const std::array<const Property*, 3> dc = {&require("f_dc_0"), &require("f_dc_1"), &require("f_dc_2")};
    const Property& opacity = require("opacity");
    const std::array<const Property*, 3> scale = {&require("scale_0"), &require("scale_1"), &require("scale_2")};
    const std::array<const Property*, 4> rot = {&require("rot_0"), &require("rot_1"), &require("rot_2"),
                                                &require("rot_3")};

    in.seekg(header.data_offset + static_cast<std::streamoff>(skip_bytes));
    std::vector<char> data(vertex.count * vertex.stride);
    in.read(data.data(), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) {
        throw FormatError(fmt::format("{}: truncated vertex data (expected {} bytes)", origin, data.size()));
    }

    GaussianScene scene;
    scene.source_path = origin;
    scene.gaussians.resize(vertex.count);
    for (std::size_t i = 0; i < vertex.count; ++i) {
        const char* row = data.data() + i * vertex.stride;
        auto get = [&](const Property* p) {
            const double v = read_scalar(p->type, row + p->offset);
            if (!std::isfinite(v)) {
                throw DataError(fmt::format("{}: non-finite '{}' at vertex {}", origin, p->name, i));
            }
            return v;
        };
        Gaussian& g = scene.gaussians[i];
        g.center = {get(pos[0]), get(pos[1]), get(pos[2])};
        g.color_dc = {get(dc[0]), get(dc[1]), get(dc[2])};
        g.opacity = logistic(get(&opacity));
        g.scale = {std::exp(get(scale[0])), std::exp(get(scale[1])), std::exp(get(scale[2]))};
        Eigen::Quaterniond q(get(rot[0]), get(rot[1]), get(rot[2]), get(rot[3]));
        if (!(q.norm() > 0.0)) throw DataError(fmt::format("{}: zero quaternion at vertex {}", origin, i));
        g.rotation = q.normalized();
        if (!g.scale.allFinite() || (g.scale.array() <= 0.0).any()) {
            throw DataError(fmt::format("{}: scale underflow or overflow at vertex {}", origin, i));
        }
    }
    return scene;
}

void export_ply(const GaussianScene& scene, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));

    static constexpr std::array<const char*, 17> kNames = {
        "x",       "y",       "z",       "nx",      "ny",    "nz",    "f_dc_0", "f_dc_1", "f_dc_2",
        "opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2",  "rot_3"};
    std::string header = "ply\nformat binary_little_endian 1.0\n";
    header += fmt::format("element vertex {}\n", scene.size());
    for (const char* name : kNames) header += fmt::format("property float {}\n", name);
    header += "end_header\n";
    out.write(header.data(), static_cast<std::streamsize>(header.size()));

    constexpr double kOpacityEps = 1e-12;
    std::vector<float> row(kNames.size());
    for (const Gaussian& g : scene.gaussians) {
        const double o = std::clamp(g.opacity, kOpacityEps, 1.0 - kOpacityEps);
        const Eigen::Quaterniond q = g.rotation.normalized();
        const std::array<double, 17> values = {g.center.x(),
                                               g.center.y(),
                                               g.center.z(),
                                               0.0,
                                               0.0,
                                               0.0,
                                               g.color_dc.x(),
                                               g.color_dc.y(),
                                               g.color_dc.z(),
                                               std::log(o / (1.0 - o)),
                                               std::log(g.scale.x()),
                                               std::log(g.scale.y()),
                                               std::log(g.scale.z()),
                                               q.w(),
                                               q.x(),
                                               q.y(),
                                               q.z()};
        std::transform(values.begin(), values.end(), row.begin(), [](double v) { return static_cast<float>(v); });
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

} // namespace splatseg
