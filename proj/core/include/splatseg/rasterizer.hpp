#pragma once

#include "splatseg/projection.hpp"
#include "splatseg/scene.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace splatseg {

inline constexpr int kTileSize = 16;
inline constexpr double kTerminationTransmittance = 1e-4;

/// Both throughput cut-offs can be switched off for oracle comparisons.
struct RenderOptions {
    bool early_termination = true; // stop a pixel walk once T < 1e-4
    bool alpha_floor = true;       // skip splats with alpha < 1/255
};

inline constexpr RenderOptions kExactRender{false, true};

/// Per-tile depth-ordered splat lists. Entries are positions into the
/// projected list the binning was built from.
struct TileBinning {
    int tiles_x = 0;
    int tiles_y = 0;
    std::vector<std::uint32_t> offsets; // tiles_x * tiles_y + 1 prefix offsets
    std::vector<std::uint32_t> entries;

    std::size_t tile_count() const { return static_cast<std::size_t>(tiles_x) * static_cast<std::size_t>(tiles_y); }
    std::span<const std::uint32_t> tile(int tx, int ty) const {
        const std::size_t t = static_cast<std::size_t>(ty) * static_cast<std::size_t>(tiles_x) + static_cast<std::size_t>(tx);
        return {entries.data() + offsets[t], entries.data() + offsets[t + 1]};
    }
    std::size_t count(int tx, int ty) const { return tile(tx, ty).size(); }
};

/// Bins each splat into every tile its [mean - r, mean + r] box overlaps
/// (tile t spans [16t, 16t + 16) on each axis). Tile lists are sorted by depth,
/// ties broken by gaussian_index.
TileBinning bin_gaussians_to_tiles(std::span<const ProjectedGaussian> projected, const CameraView& view);

/// A view with its splats projected and binned. Reusable across renders of
/// different channels.
struct PreparedView {
    CameraView view;
    std::vector<ProjectedGaussian> projected;
    TileBinning binning;
    ProjectionStats stats;
};

PreparedView prepare_view(const GaussianScene& scene, const CameraView& view,
                          std::span<const std::uint8_t> member_mask = {});

struct RenderOutput {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> value; // height * width * channels, row-major
    std::vector<double> alpha; // accumulated alpha rho
    std::vector<double> depth; // blended depth normalized by rho (0 where rho == 0)

    std::size_t pixel(int x, int y) const { return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x); }
};

/// One blended splat at a pixel, front to back.
struct BlendSample {
    std::uint32_t gaussian_index;
    double alpha;
    double transmittance; // T before this splat
    double depth;
    double weight() const { return alpha * transmittance; }
};

/// Calls fn(x, y, samples) for every pixel of the view with the pixel's
/// surviving samples in blend order. Pixels are visited tile by tile.
void visit_pixel_samples(const PreparedView& prepared, const RenderOptions& options,
                         const std::function<void(int, int, std::span<const BlendSample>)>& fn);

/// X = sum x_i alpha_i T_i per pixel for a per-Gaussian channel laid out as
/// channel[gaussian_index * channels + c]. Parallel over tiles.
RenderOutput render_property(const PreparedView& prepared, std::span<const double> channel, int channels,
                             const RenderOptions& options = {});
RenderOutput render_property(const GaussianScene& scene, const CameraView& view, std::span<const double> channel,
                             int channels, const RenderOptions& options = {});

/// rho and D of the member subset rendered on its own, so transmittance only
/// reflects occlusion among members.
RenderOutput render_subset_alpha_depth(const GaussianScene& scene, const CameraView& view,
                                       std::span<const std::uint8_t> member_mask, const RenderOptions& options = {});

/// Reference renderer: per pixel, gather every supporting splat, sort by
/// (depth, index) and composite. O(pixels * N log N); for tests and oracles.
RenderOutput render_naive(const GaussianScene& scene, const CameraView& view, std::span<const double> channel,
                          int channels, const RenderOptions& options = kExactRender,
                          std::span<const std::uint8_t> member_mask = {});

} // namespace splatseg
