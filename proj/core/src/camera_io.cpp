#include "splatseg/camera_io.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace splatseg {

using nlohmann::json;

std::vector<CameraEntry> parse_cameras(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(fmt::format("{}: invalid JSON: {}", origin, e.what()));
    }
    if (!doc.is_array()) throw FormatError(fmt::format("{}: camera file must be a JSON array", origin));

    std::vector<CameraEntry> cameras;
    std::set<int> seen;
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const json& item = doc[k];
        auto field = [&](const char* name) -> const json& {
            if (!item.is_object() || !item.contains(name)) {
                throw FormatError(fmt::format("{}: camera {} is missing '{}'", origin, k, name));
            }
            return item.at(name);
        };
        CameraEntry entry;
        try {
            CameraView& v = entry.view;
            v.view_id = field("view_id").get<int>();
            v.width = field("width").get<int>();
            v.height = field("height").get<int>();
            v.fx = field("fx").get<double>();
            v.fy = field("fy").get<double>();
            v.cx = field("cx").get<double>();
            v.cy = field("cy").get<double>();
            const auto m = field("world_to_camera").get<std::vector<double>>();
            if (m.size() != 16) {
                throw FormatError(fmt::format("{}: camera {} world_to_camera needs 16 numbers, got {}", origin, k, m.size()));
            }
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) v.world_to_camera(r, c) = m[static_cast<std::size_t>(r * 4 + c)];
            }
            if (item.contains("near_clip")) v.near_clip = item.at("near_clip").get<double>();
            if (item.contains("mask_path") && !item.at("mask_path").is_null()) {
                entry.mask_path = item.at("mask_path").get<std::string>();
            }
        } catch (const json::type_error& e) {
            throw FormatError(fmt::format("{}: camera {} has a field of the wrong type: {}", origin, k, e.what()));
        }
        entry.view.validate();
        if (!seen.insert(entry.view.view_id).second) {
            throw InputError(fmt::format("{}: duplicate view_id {}", origin, entry.view.view_id));
        }
        cameras.push_back(std::move(entry));
    }
    return cameras;
}

std::vector<CameraEntry> load_cameras(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_cameras(buffer.str(), path.string());
}

void save_cameras(const std::vector<CameraEntry>& cameras, const std::filesystem::path& path) {
    json doc = json::array();
    for (const CameraEntry& entry : cameras) {
        const CameraView& v = entry.view;
        std::vector<double> m(16);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) m[static_cast<std::size_t>(r * 4 + c)] = v.world_to_camera(r, c);
        }
        json item = {{"view_id", v.view_id}, {"width", v.width}, {"height", v.height}, {"fx", v.fx},
                     {"fy", v.fy},           {"cx", v.cx},       {"cy", v.cy},         {"world_to_camera", m},
                     {"near_clip", v.near_clip}};
        if (entry.mask_path) item["mask_path"] = *entry.mask_path;
        doc.push_back(std::move(item));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << doc.dump(2) << '\n';
}

const CameraEntry& find_camera(const std::vector<CameraEntry>& cameras, int view_id) {
    for (const CameraEntry& c : cameras) {
        if (c.view.view_id == view_id) return c;
    }
    throw LookupError(fmt::format("unknown view id {}", view_id));
}

} // namespace splatseg
