#include "splatseg/prompts.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace splatseg {

std::uint32_t backproject_prompt(const GaussianScene& scene, const CameraView& view, const Eigen::Vector2d& pixel,
                                 std::size_t candidates) {
    if (!(pixel.x() >= 0.0 && pixel.x() < view.width && pixel.y() >= 0.0 && pixel.y() < view.height)) {
        throw InputError(fmt::format("prompt ({}, {}) is outside view {} ({}x{})", pixel.x(), pixel.y(), view.view_id,
                                     view.width, view.height));
    }
    const Eigen::Matrix3d r = view.rotation();
    const Eigen::Vector3d origin = view.camera_center();
    const Eigen::Vector3d dir =
        (r.transpose() * Eigen::Vector3d((pixel.x() - view.cx) / view.fx, (pixel.y() - view.cy) / view.fy, 1.0))
            .normalized();

    struct Candidate {
        double distance;
        double depth;
        std::uint32_t index;
    };
    std::vector<Candidate> pool;
    for (std::size_t i = 0; i < scene.size(); ++i) {
        const Gaussian& g = scene.gaussians[i];
        const double depth = view.to_camera(g.center).z();
        if (!(depth > 0.0)) continue;
        const Eigen::Vector3d v = g.center - origin;
        const double along = std::max(0.0, v.dot(dir));
        pool.push_back({(v - along * dir).norm(), depth, static_cast<std::uint32_t>(i)});
    }
    if (pool.empty()) throw LookupError(fmt::format("no Gaussian lies in front of view {}", view.view_id));

    const std::size_t k = std::min(candidates, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                      [](const Candidate& a, const Candidate& b) {
                          return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
                      });

    auto nearer = [](const Candidate* best, const Candidate& c) {
        return !best || c.depth < best->depth || (c.depth == best->depth && c.index < best->index);
    };
    const Candidate* best_hit = nullptr;
    const Candidate* best_any = nullptr;
    for (std::size_t j = 0; j < k; ++j) {
        const Candidate& c = pool[j];
        const double reach = 3.0 * scene.gaussians[c.index].scale.maxCoeff();
        if (c.distance <= reach && nearer(best_hit, c)) best_hit = &c;
        if (nearer(best_any, c)) best_any = &c;
    }
    return (best_hit ? best_hit : best_any)->index;
}

std::string to_string(PromptStatus status) {
    switch (status) {
    case PromptStatus::kInFrame: return "in_frame";
    case PromptStatus::kOutOfFrame: return "out_of_frame";
    case PromptStatus::kBehindCamera: return "behind_camera";
    }
    return "unknown";
}

std::vector<PropagatedPrompt> project_prompts_to_views(const GaussianScene& scene, std::uint32_t gaussian_index,
                                                       std::span<const CameraView> views) {
    if (gaussian_index >= scene.size()) {
        throw InputError(fmt::format("Gaussian index {} out of range (N = {})", gaussian_index, scene.size()));
    }
    const Eigen::Vector3d center = scene.gaussians[gaussian_index].center;
    std::vector<PropagatedPrompt> out;
    out.reserve(views.size());
    for (const CameraView& view : views) {
        PropagatedPrompt p;
        p.view_id = view.view_id;
        const Eigen::Vector3d c = view.to_camera(center);
        if (!(c.z() > view.near_clip)) {
            p.status = PromptStatus::kBehindCamera;
        } else {
            p.pixel = {view.fx * c.x() / c.z() + view.cx, view.fy * c.y() / c.z() + view.cy};
            const bool inside = p.pixel.x() >= 0.0 && p.pixel.x() < view.width && p.pixel.y() >= 0.0 &&
                                p.pixel.y() < view.height;
            p.status = inside ? PromptStatus::kInFrame : PromptStatus::kOutOfFrame;
        }
        out.push_back(p);
    }
    return out;
}

std::vector<PointPrompt> parse_prompts(const std::string& json_text, const std::string& origin) {
    std::vector<PointPrompt> prompts;
    try {
        const nlohmann::json doc = nlohmann::json::parse(json_text);
        if (!doc.is_array()) throw FormatError(fmt::format("{}: prompt file must be a JSON array", origin));
        for (const auto& item : doc) {
            PointPrompt p;
            p.view_id = item.at("view_id").get<int>();
            p.pixel = {item.at("x").get<double>(), item.at("y").get<double>()};
            prompts.push_back(p);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(fmt::format("{}: bad prompt file: {}", origin, e.what()));
    }
    return prompts;
}

std::vector<PointPrompt> load_prompts(const std::filesystem::path& path) {
    return parse_prompts(read_file(path), path.string());
}

std::string propagate_prompts_json(const GaussianScene& scene, const std::vector<CameraEntry>& cameras,
                                   std::span<const PointPrompt> prompts) {
    std::vector<CameraView> views;
    for (const CameraEntry& c : cameras) views.push_back(c.view);

    nlohmann::json resolved = nlohmann::json::array();
    std::map<int, nlohmann::json> per_view;
    for (const PointPrompt& prompt : prompts) {
        const CameraView& source = find_camera(cameras, prompt.view_id).view;
        const std::uint32_t index = backproject_prompt(scene, source, prompt.pixel);
        nlohmann::json propagated = nlohmann::json::array();
        for (const PropagatedPrompt& p : project_prompts_to_views(scene, index, views)) {
            nlohmann::json item = {{"view_id", p.view_id}, {"status", to_string(p.status)}};
            if (p.status != PromptStatus::kBehindCamera) {
                item["x"] = p.pixel.x();
                item["y"] = p.pixel.y();
            }
            if (p.status == PromptStatus::kInFrame) {
                per_view[p.view_id].push_back({{"x", p.pixel.x()}, {"y", p.pixel.y()}, {"gaussian_index", index}});
            }
            propagated.push_back(std::move(item));
        }
        resolved.push_back({{"view_id", prompt.view_id},
                            {"x", prompt.pixel.x()},
                            {"y", prompt.pixel.y()},
                            {"gaussian_index", index},
                            {"propagated", std::move(propagated)}});
    }
    nlohmann::json views_json = nlohmann::json::object();
    for (auto& [id, list] : per_view) views_json[std::to_string(id)] = std::move(list);
    return nlohmann::json{{"prompts", std::move(resolved)}, {"per_view", std::move(views_json)}}.dump(2);
}

} // namespace splatseg
