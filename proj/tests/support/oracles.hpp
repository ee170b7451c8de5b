#pragma once

// Test-only reference computations. They go through the definitions
// directly (per-pixel full sort, finite differences, exhaustive search) and
// share no code with the tiled renderer or the accumulation pass.

#include "splatseg/contribution.hpp"
#include "splatseg/label_mask.hpp"
#include "splatseg/projection.hpp"
#include "splatseg/rasterizer.hpp"
#include "splatseg/scene.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace splatseg::testing {

/// Rotation matrix from the textbook unit-quaternion formula (w first).
Eigen::Matrix3d quaternion_matrix(double w, double x, double y, double z);

/// d(pixel)/d(camera point) by central differences.
Eigen::Matrix<double, 2, 3> numeric_jacobian(const CameraView& view, const Eigen::Vector3d& p_cam, double h = 1e-6);

/// Screen covariance through numeric_jacobian and quaternion_matrix, dilated.
Eigen::Matrix2d reference_cov2d(const Gaussian& g, const CameraView& view);

struct ReferenceSample {
    std::uint32_t index;
    double alpha;
    double transmittance;
    double depth;
};

/// Every splat that contributes at `pixel`, front to back, found by testing
/// all projected Gaussians of the scene.
std::vector<ReferenceSample> reference_samples(const std::vector<ProjectedGaussian>& projected,
                                               const Eigen::Vector2d& pixel, const RenderOptions& options);

struct ReferenceImage {
    std::vector<double> value; // pixel-major, `channels` per pixel
    std::vector<double> alpha;
    std::vector<double> depth;
};

ReferenceImage reference_render(const GaussianScene& scene, const CameraView& view, const std::vector<double>& channel,
                                int channels, const RenderOptions& options,
                                const std::vector<std::uint8_t>& members = {});

/// A by definition, in long double.
std::vector<long double> reference_contributions(const GaussianScene& scene, const std::vector<MaskedView>& views,
                                                 std::uint32_t num_objects, const RenderOptions& options);

/// Sum of |sum_i P_i alpha_i T_i - M| over masked pixels.
double reference_objective(const GaussianScene& scene, const std::vector<MaskedView>& views,
                           const std::vector<std::uint8_t>& labels, const RenderOptions& options);

/// Exhaustive minimum of reference_objective over all 2^N labelings.
double exhaustive_minimum(const GaussianScene& scene, const std::vector<MaskedView>& views,
                          const RenderOptions& options);

/// Tiles holding at least one pixel inside the splat's 3-sigma ellipse.
std::set<std::pair<int, int>> tiles_touched(const ProjectedGaussian& p, const CameraView& view);

/// Prompt resolution by scanning every Gaussian.
std::uint32_t reference_backproject(const GaussianScene& scene, const CameraView& view, const Eigen::Vector2d& pixel,
                                    std::size_t candidates);

} // namespace splatseg::testing
