#include "splatseg/service.hpp"

#include "splatseg/editing.hpp"
#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"
#include "splatseg/mask_render.hpp"
#include "splatseg/ply_io.hpp"
#include "splatseg/prompts.hpp"
#include "splatseg/rasterizer.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>

namespace splatseg {
namespace {

constexpr double kShC0 = 0.28209479177387814;

int status_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::kLookup: return 404;
    case ErrorKind::kIo: return 500;
    default: return 400;
    }
}

} // namespace

SegmentationService::SegmentationService(GaussianScene scene, std::vector<CameraEntry> cameras,
                                         std::optional<ContributionMatrix> contributions,
                                         std::filesystem::path output_dir)
    : scene_(std::move(scene)), cameras_(std::move(cameras)), contributions_(std::move(contributions)),
      output_dir_(std::move(output_dir)) {
    if (contributions_ && contributions_->num_gaussians() != scene_.size()) {
        throw InputError(fmt::format("contribution matrix has N = {} but the scene has {} Gaussians",
                                     contributions_->num_gaussians(), scene_.size()));
    }
}

std::string SegmentationService::token_for(AssignmentMode mode, double gamma) {
    if (gamma == 0.0) gamma = 0.0; // fold -0.0
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffu;
            h *= 1099511628211ULL;
        }
    };
    mix(mode == AssignmentMode::kBinary ? 1 : 2);
    mix(std::bit_cast<std::uint64_t>(gamma));
    return fmt::format("{:016x}", h);
}

std::string SegmentationService::scene_json() const {
    nlohmann::json views = nlohmann::json::array();
    for (const CameraEntry& c : cameras_) {
        views.push_back({{"view_id", c.view.view_id},
                         {"width", c.view.width},
                         {"height", c.view.height},
                         {"has_mask", c.mask_path.has_value()}});
    }
    nlohmann::json doc = {{"N", scene_.size()}, {"views", std::move(views)}};
    doc["E"] = contributions_ ? nlohmann::json(contributions_->num_objects()) : nlohmann::json(nullptr);
    return doc.dump();
}

SegmentationService::AssignResult SegmentationService::assign(double gamma, AssignmentMode mode) {
    if (!contributions_) throw HttpError(409, "contribution matrix not loaded");
    const std::string token = token_for(mode, gamma);
    {
        std::shared_lock lock(mutex_);
        if (auto it = assignments_.find(token); it != assignments_.end()) {
            return {token, mode, gamma, it->second->member_counts(), true};
        }
    }
    auto assignment = std::make_shared<const Assignment>(
        mode == AssignmentMode::kBinary ? assign_binary(*contributions_, gamma) : assign_scene(*contributions_, gamma));
    std::vector<std::size_t> counts = assignment->member_counts();
    std::unique_lock lock(mutex_);
    assignments_.emplace(token, std::move(assignment));
    return {token, mode, gamma, std::move(counts), false};
}

std::shared_ptr<const Assignment> SegmentationService::find_assignment(const std::string& token) const {
    std::shared_lock lock(mutex_);
    const auto it = assignments_.find(token);
    if (it == assignments_.end()) throw HttpError(404, fmt::format("unknown assignment token '{}'", token));
    return it->second;
}

const CameraView& SegmentationService::view(int view_id) const {
    for (const CameraEntry& c : cameras_) {
        if (c.view.view_id == view_id) return c.view;
    }
    throw HttpError(404, fmt::format("unknown view {}", view_id));
}

std::string SegmentationService::mask_png(int view_id, const std::string& token, double tau) const {
    const CameraView& v = view(view_id);
    const auto assignment = find_assignment(token);
    const RenderedMask m = render_mask(scene_, *assignment, v, tau);
    return encode_png16(Image16{m.mask.width, m.mask.height, m.mask.labels});
}

std::string SegmentationService::preview_png(int view_id) const {
    const CameraView& v = view(view_id);
    std::vector<double> colors(scene_.size() * 3);
    for (std::size_t i = 0; i < scene_.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            colors[i * 3 + static_cast<std::size_t>(c)] =
                std::clamp(0.5 + kShC0 * scene_.gaussians[i].color_dc[c], 0.0, 1.0);
        }
    }
    const RenderOutput r = render_property(scene_, v, colors, 3);
    std::vector<std::uint8_t> rgb(r.value.size());
    std::transform(r.value.begin(), r.value.end(), rgb.begin(), [](double x) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
    });
    return encode_png_rgb8(r.width, r.height, rgb);
}

std::string SegmentationService::propagate_prompts(const std::string& prompts_json) const {
    const std::vector<PointPrompt> prompts = parse_prompts(prompts_json, "request body");
    for (const PointPrompt& p : prompts) view(p.view_id);
    return propagate_prompts_json(scene_, cameras_, prompts);
}

std::filesystem::path SegmentationService::remove(std::span<const std::uint32_t> object_ids,
                                                  const std::string& token) const {
    const auto assignment = find_assignment(token);
    const SceneSubset kept = remove_objects(scene_, *assignment, object_ids);
    std::vector<std::uint32_t> ids(object_ids.begin(), object_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::filesystem::create_directories(output_dir_);
    const auto path = output_dir_ / fmt::format("removed_{}_{}.ply", token, fmt::join(ids, "-"));
    export_ply(kept.scene, path);
    return path;
}

struct ServiceServer::Impl {
    SegmentationService& service;
    httplib::Server server;

    explicit Impl(SegmentationService& s) : service(s) { routes(); }

    static void fail(httplib::Response& res, int status, const std::string& message) {
        res.status = status;
        res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
    }

    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const HttpError& e) {
                fail(res, e.status(), e.what());
            } catch (const nlohmann::json::exception& e) {
                fail(res, 400, fmt::format("bad request body: {}", e.what()));
            } catch (const Error& e) {
                fail(res, status_for(e), e.what());
            } catch (const std::invalid_argument& e) {
                fail(res, 400, fmt::format("bad parameter: {}", e.what()));
            } catch (const std::out_of_range& e) {
                fail(res, 400, fmt::format("bad parameter: {}", e.what()));
            } catch (const std::exception& e) {
                fail(res, 500, e.what());
            }
        };
    }

    static std::string required_param(const httplib::Request& req, const char* name) {
        if (!req.has_param(name)) throw HttpError(400, fmt::format("missing query parameter '{}'", name));
        return req.get_param_value(name);
    }

    static nlohmann::json body_object(const httplib::Request& req) {
        nlohmann::json body = nlohmann::json::parse(req.body);
        if (!body.is_object()) throw HttpError(400, "request body must be a JSON object");
        return body;
    }

    void routes() {
        server.Get("/scene", guarded([this](const httplib::Request&, httplib::Response& res) {
                       res.set_content(service.scene_json(), "application/json");
                   }));

        server.Post("/assign", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const nlohmann::json body = body_object(req);
                        if (!body.contains("gamma") || !body.at("gamma").is_number()) {
                            throw HttpError(400, "'gamma' must be a number");
                        }
                        const double gamma = body.at("gamma").get<double>();
                        const AssignmentMode mode =
                            parse_assignment_mode(body.value("mode", std::string("binary")));
                        const auto result = service.assign(gamma, mode);
                        res.set_content(nlohmann::json{{"token", result.token},
                                                       {"mode", to_string(result.mode)},
                                                       {"gamma", result.gamma},
                                                       {"member_counts", result.member_counts},
                                                       {"cached", result.cached}}
                                            .dump(),
                                        "application/json");
                    }));

        server.Get("/mask", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const int view_id = std::stoi(required_param(req, "view"));
                       const std::string token = required_param(req, "token");
                       const double tau = req.has_param("tau") ? std::stod(req.get_param_value("tau")) : 0.1;
                       res.set_content(service.mask_png(view_id, token, tau), "image/png");
                   }));

        server.Get("/preview", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const int view_id = std::stoi(required_param(req, "view"));
                       res.set_content(service.preview_png(view_id), "image/png");
                   }));

        server.Post("/prompts", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        res.set_content(service.propagate_prompts(req.body), "application/json");
                    }));

        server.Post("/remove", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const nlohmann::json body = body_object(req);
                        if (!body.contains("object_ids") || !body.at("object_ids").is_array()) {
                            throw HttpError(400, "'object_ids' must be an array");
                        }
                        if (!body.contains("token") || !body.at("token").is_string()) {
                            throw HttpError(400, "'token' must be a string");
                        }
                        const auto ids = body.at("object_ids").get<std::vector<std::uint32_t>>();
                        const auto path = service.remove(ids, body.at("token").get<std::string>());
                        res.set_content(nlohmann::json{{"path", path.string()}}.dump(), "application/json");
                    }));
    }
};

ServiceServer::ServiceServer(SegmentationService& service) : impl_(std::make_unique<Impl>(service)) {}
ServiceServer::~ServiceServer() { stop(); }

bool ServiceServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int ServiceServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool ServiceServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void ServiceServer::stop() {
    if (impl_) impl_->server.stop();
}
bool ServiceServer::is_running() const { return impl_->server.is_running(); }

} // namespace splatseg
