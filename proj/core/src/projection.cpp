#include "splatseg/projection.hpp"

#include <algorithm>
#include <cmath>

namespace splatseg {

Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraView& view, const Eigen::Vector3d& p_cam) {
    const double z = p_cam.z();
    const double z2 = z * z;
    Eigen::Matrix<double, 2, 3> j;
    j << view.fx / z, 0.0, -view.fx * p_cam.x() / z2,
         0.0, view.fy / z, -view.fy * p_cam.y() / z2;
    return j;
}

std::optional<ProjectedGaussian> project_gaussian(const Gaussian& g, std::uint32_t index, const CameraView& view,
                                                  ProjectionStats* stats) {
    const Eigen::Vector3d p_cam = view.to_camera(g.center);
    if (!(p_cam.z() > view.near_clip)) {
        if (stats) ++stats->behind_near_clip;
        return std::nullopt;
    }

    const Eigen::Matrix<double, 2, 3> t = projection_jacobian(view, p_cam) * view.rotation();
    Eigen::Matrix2d cov = t * covariance3d(g) * t.transpose();
    cov(0, 1) = cov(1, 0) = 0.5 * (cov(0, 1) + cov(1, 0));
    cov(0, 0) += kCovarianceDilation;
    cov(1, 1) += kCovarianceDilation;

    const double det = cov.determinant();
    if (!(det > kDegenerateDeterminant)) {
        if (stats) ++stats->degenerate;
        return std::nullopt;
    }

    ProjectedGaussian out;
    out.gaussian_index = index;
    out.mean2d = {view.fx * p_cam.x() / p_cam.z() + view.cx, view.fy * p_cam.y() / p_cam.z() + view.cy};
    out.cov2d = cov;
    out.inv_cov2d << cov(1, 1) / det, -cov(0, 1) / det, -cov(1, 0) / det, cov(0, 0) / det;
    out.depth = p_cam.z();
    out.opacity = g.opacity;

    const double mid = 0.5 * (cov(0, 0) + cov(1, 1));
    const double lambda_max = mid + std::sqrt(std::max(0.0, mid * mid - det));
    out.radius = static_cast<int>(std::ceil(kSupportSigmas * std::sqrt(lambda_max)));

    const double r = out.radius;
    if (out.mean2d.x() + r < 0.0 || out.mean2d.x() - r >= view.width || out.mean2d.y() + r < 0.0 ||
        out.mean2d.y() - r >= view.height) {
        if (stats) ++stats->off_screen;
        return std::nullopt;
    }
    return out;
}

std::vector<ProjectedGaussian> project_scene(const GaussianScene& scene, const CameraView& view,
                                             std::span<const std::uint8_t> member_mask, ProjectionStats* stats) {
    std::vector<ProjectedGaussian> out;
    out.reserve(scene.size());
    for (std::size_t i = 0; i < scene.size(); ++i) {
        if (!member_mask.empty() && member_mask[i] == 0) continue;
        if (auto p = project_gaussian(scene.gaussians[i], static_cast<std::uint32_t>(i), view, stats)) {
            out.push_back(*p);
        }
    }
    return out;
}

double evaluate_alpha(const ProjectedGaussian& p, const Eigen::Vector2d& pixel, double opacity) {
    return std::min(kMaxAlpha, opacity * std::exp(-0.5 * mahalanobis_sq(p, pixel)));
}

} // namespace splatseg
