#pragma once

#include "splatseg/assignment.hpp"
#include "splatseg/camera_io.hpp"
#include "splatseg/contribution.hpp"
#include "splatseg/scene.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splatseg {

/// Error carrying the HTTP status the server should answer with.
class HttpError : public std::runtime_error {
public:
    HttpError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

/// State behind the interactive endpoints: one scene, its cameras, an
/// optional contribution matrix, and assignments cached by token. Assignment
/// never touches A after construction; the token of an assignment is a hash
/// of (mode, gamma), so repeated slider positions hit the cache.
class SegmentationService {
public:
    SegmentationService(GaussianScene scene, std::vector<CameraEntry> cameras,
                        std::optional<ContributionMatrix> contributions, std::filesystem::path output_dir);

    struct AssignResult {
        std::string token;
        AssignmentMode mode;
        double gamma;
        std::vector<std::size_t> member_counts;
        bool cached;
    };

    /// {"N", "E", "views": [{"view_id", "width", "height", "has_mask"}]}
    std::string scene_json() const;
    AssignResult assign(double gamma, AssignmentMode mode);
    std::shared_ptr<const Assignment> find_assignment(const std::string& token) const;
    std::string mask_png(int view_id, const std::string& token, double tau) const;
    std::string preview_png(int view_id) const;
    /// Body: [{view_id, x, y}]; answers with propagate_prompts_json's document.
    std::string propagate_prompts(const std::string& prompts_json) const;
    std::filesystem::path remove(std::span<const std::uint32_t> object_ids, const std::string& token) const;

    static std::string token_for(AssignmentMode mode, double gamma);

    const GaussianScene& scene() const { return scene_; }
    const std::vector<CameraEntry>& cameras() const { return cameras_; }

private:
    const CameraView& view(int view_id) const;

    GaussianScene scene_;
    std::vector<CameraEntry> cameras_;
    std::optional<ContributionMatrix> contributions_;
    std::filesystem::path output_dir_;

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const Assignment>> assignments_;
};

/// HTTP front end: GET /scene, POST /assign, GET /mask, GET /preview,
/// POST /prompts, POST /remove. Error bodies are {"error": message}.
class ServiceServer {
public:
    explicit ServiceServer(SegmentationService& service);
    ~ServiceServer();
    ServiceServer(const ServiceServer&) = delete;
    ServiceServer& operator=(const ServiceServer&) = delete;

    /// Binds and blocks until stop().
    bool listen(const std::string& host, int port);
    /// Binds to a free port and returns it; serve with listen_after_bind().
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    bool is_running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace splatseg
