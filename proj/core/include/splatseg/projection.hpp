#pragma once

#include "splatseg/scene.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace splatseg {

// Constants of the standard splatting pipeline.
inline constexpr double kCovarianceDilation = 0.3;     // px^2 added to the 2D covariance diagonal
inline constexpr double kMaxAlpha = 0.99;
inline constexpr double kMinAlpha = 1.0 / 255.0;
inline constexpr double kSupportSigmas = 3.0;           // footprint half-extent in std-devs
inline constexpr double kDegenerateDeterminant = 1e-12;

/// A Gaussian splatted into one view.
struct ProjectedGaussian {
    std::uint32_t gaussian_index = 0;
    Eigen::Vector2d mean2d = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov2d = Eigen::Matrix2d::Identity();     // dilated image-space covariance
    Eigen::Matrix2d inv_cov2d = Eigen::Matrix2d::Identity(); // conic
    double depth = 0.0;                                      // camera-space z of the center
    int radius = 0;                                          // ceil(3 sqrt(lambda_max))
    double opacity = 0.0;
};

struct ProjectionStats {
    std::size_t behind_near_clip = 0;
    std::size_t degenerate = 0;
    std::size_t off_screen = 0;
};

/// 2x3 perspective Jacobian d(pixel)/d(camera point) at `p_cam`.
Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraView& view, const Eigen::Vector3d& p_cam);

/// Projects one Gaussian. Returns nullopt (and bumps the matching counter in
/// `stats` when given) if the center is at or behind the near plane, the
/// dilated covariance is degenerate, or the 3-sigma box misses the image.
std::optional<ProjectedGaussian> project_gaussian(const Gaussian& g, std::uint32_t index, const CameraView& view,
                                                  ProjectionStats* stats = nullptr);

/// Projects every Gaussian (or only those with member_mask[i] != 0 when the
/// mask is non-empty), preserving index order.
std::vector<ProjectedGaussian> project_scene(const GaussianScene& scene, const CameraView& view,
                                             std::span<const std::uint8_t> member_mask = {},
                                             ProjectionStats* stats = nullptr);

/// Squared Mahalanobis distance of `pixel` from the splat center.
inline double mahalanobis_sq(const ProjectedGaussian& p, const Eigen::Vector2d& pixel) {
    const Eigen::Vector2d d = pixel - p.mean2d;
    return d.dot(p.inv_cov2d * d);
}

/// True where the pixel lies inside the splat's 3-sigma ellipse; the
/// renderers only blend a splat at pixels it supports.
inline bool supports(const ProjectedGaussian& p, const Eigen::Vector2d& pixel) {
    return mahalanobis_sq(p, pixel) <= kSupportSigmas * kSupportSigmas;
}

/// opacity * exp(-1/2 d^T inv_cov d), clamped to kMaxAlpha.
double evaluate_alpha(const ProjectedGaussian& p, const Eigen::Vector2d& pixel, double opacity);

} // namespace splatseg
