#include "splatseg/rasterizer.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace splatseg {
namespace {

int tile_of(double coord) { return static_cast<int>(std::floor(coord / kTileSize)); }

// Front-to-back walk over one pixel's ordered splat list.
template <typename Fn>
void blend_pixel(std::span<const ProjectedGaussian> projected, std::span<const std::uint32_t> order,
                 const Eigen::Vector2d& pixel, const RenderOptions& options, Fn&& fn) {
    double t = 1.0;
    for (const std::uint32_t pos : order) {
        const ProjectedGaussian& p = projected[pos];
        if (!supports(p, pixel)) continue;
        const double alpha = evaluate_alpha(p, pixel, p.opacity);
        if (options.alpha_floor && alpha < kMinAlpha) continue;
        fn(BlendSample{p.gaussian_index, alpha, t, p.depth});
        t *= 1.0 - alpha;
        if (options.early_termination && t < kTerminationTransmittance) break;
    }
}

void check_channel(std::size_t n, std::span<const double> channel, int channels) {
    if (channels < 0 || channel.size() != n * static_cast<std::size_t>(channels)) {
        throw InputError(fmt::format("channel has {} values, expected {} Gaussians x {} channels", channel.size(), n,
                                     channels));
    }
}

RenderOutput make_output(const CameraView& view, int channels) {
    RenderOutput out;
    out.width = view.width;
    out.height = view.height;
    out.channels = channels;
    out.value.assign(view.pixel_count() * static_cast<std::size_t>(channels), 0.0);
    out.alpha.assign(view.pixel_count(), 0.0);
    out.depth.assign(view.pixel_count(), 0.0);
    return out;
}

} // namespace

TileBinning bin_gaussians_to_tiles(std::span<const ProjectedGaussian> projected, const CameraView& view) {
    TileBinning b;
    b.tiles_x = (view.width + kTileSize - 1) / kTileSize;
    b.tiles_y = (view.height + kTileSize - 1) / kTileSize;

    struct Range {
        int x0, x1, y0, y1;
    };
    std::vector<Range> ranges(projected.size());
    std::vector<std::uint32_t> counts(b.tile_count(), 0);
    for (std::size_t k = 0; k < projected.size(); ++k) {
        const ProjectedGaussian& p = projected[k];
        const double r = p.radius;
        Range& rg = ranges[k];
        rg.x0 = std::max(0, tile_of(p.mean2d.x() - r));
        rg.x1 = std::min(b.tiles_x - 1, tile_of(p.mean2d.x() + r));
        rg.y0 = std::max(0, tile_of(p.mean2d.y() - r));
        rg.y1 = std::min(b.tiles_y - 1, tile_of(p.mean2d.y() + r));
        for (int ty = rg.y0; ty <= rg.y1; ++ty) {
            for (int tx = rg.x0; tx <= rg.x1; ++tx) ++counts[static_cast<std::size_t>(ty * b.tiles_x + tx)];
        }
    }

    b.offsets.assign(b.tile_count() + 1, 0);
    std::partial_sum(counts.begin(), counts.end(), b.offsets.begin() + 1);
    b.entries.resize(b.offsets.back());
    std::vector<std::uint32_t> cursor(b.offsets.begin(), b.offsets.end() - 1);
    for (std::size_t k = 0; k < projected.size(); ++k) {
        const Range& rg = ranges[k];
        for (int ty = rg.y0; ty <= rg.y1; ++ty) {
            for (int tx = rg.x0; tx <= rg.x1; ++tx) {
                b.entries[cursor[static_cast<std::size_t>(ty * b.tiles_x + tx)]++] = static_cast<std::uint32_t>(k);
            }
        }
    }

    auto closer = [&](std::uint32_t a, std::uint32_t c) {
        const ProjectedGaussian& pa = projected[a];
        const ProjectedGaussian& pc = projected[c];
        if (pa.depth != pc.depth) return pa.depth < pc.depth;
        return pa.gaussian_index < pc.gaussian_index;
    };
    for (std::size_t t = 0; t < b.tile_count(); ++t) {
        std::sort(b.entries.begin() + b.offsets[t], b.entries.begin() + b.offsets[t + 1], closer);
    }
    return b;
}

PreparedView prepare_view(const GaussianScene& scene, const CameraView& view,
                          std::span<const std::uint8_t> member_mask) {
    if (!member_mask.empty() && member_mask.size() != scene.size()) {
        throw InputError(fmt::format("member mask has {} entries for {} Gaussians", member_mask.size(), scene.size()));
    }
    PreparedView pv;
    pv.view = view;
    pv.projected = project_scene(scene, view, member_mask, &pv.stats);
    pv.binning = bin_gaussians_to_tiles(pv.projected, view);
    return pv;
}

void visit_pixel_samples(const PreparedView& prepared, const RenderOptions& options,
                         const std::function<void(int, int, std::span<const BlendSample>)>& fn) {
    const CameraView& view = prepared.view;
    std::vector<BlendSample> samples;
    for (int ty = 0; ty < prepared.binning.tiles_y; ++ty) {
        for (int tx = 0; tx < prepared.binning.tiles_x; ++tx) {
            const auto order = prepared.binning.tile(tx, ty);
            const int x_end = std::min(view.width, (tx + 1) * kTileSize);
            const int y_end = std::min(view.height, (ty + 1) * kTileSize);
            for (int y = ty * kTileSize; y < y_end; ++y) {
                for (int x = tx * kTileSize; x < x_end; ++x) {
                    samples.clear();
                    blend_pixel(prepared.projected, order, Eigen::Vector2d(x, y), options,
                                [&](const BlendSample& s) { samples.push_back(s); });
                    fn(x, y, samples);
                }
            }
        }
    }
}

RenderOutput render_property(const PreparedView& prepared, std::span<const double> channel, int channels,
                             const RenderOptions& options) {
    const CameraView& view = prepared.view;
    RenderOutput out = make_output(view, channels);
    const auto nc = static_cast<std::size_t>(channels);
    const int tiles_x = prepared.binning.tiles_x;

    parallel_for(prepared.binning.tile_count(), [&](std::size_t t) {
        const int tx = static_cast<int>(t % static_cast<std::size_t>(tiles_x));
        const int ty = static_cast<int>(t / static_cast<std::size_t>(tiles_x));
        const auto order = prepared.binning.tile(tx, ty);
        const int x_end = std::min(view.width, (tx + 1) * kTileSize);
        const int y_end = std::min(view.height, (ty + 1) * kTileSize);
        for (int y = ty * kTileSize; y < y_end; ++y) {
            for (int x = tx * kTileSize; x < x_end; ++x) {
                const std::size_t px = out.pixel(x, y);
                double rho = 0.0;
                double depth = 0.0;
                double* value = out.value.data() + px * nc;
                blend_pixel(prepared.projected, order, Eigen::Vector2d(x, y), options, [&](const BlendSample& s) {
                    const double w = s.weight();
                    const double* xi = channel.data() + static_cast<std::size_t>(s.gaussian_index) * nc;
                    for (std::size_t c = 0; c < nc; ++c) value[c] += xi[c] * w;
                    rho += w;
                    depth += s.depth * w;
                });
                out.alpha[px] = rho;
                out.depth[px] = rho > 0.0 ? depth / rho : 0.0;
            }
        }
    });
    return out;
}

RenderOutput render_property(const GaussianScene& scene, const CameraView& view, std::span<const double> channel,
                             int channels, const RenderOptions& options) {
    check_channel(scene.size(), channel, channels);
    return render_property(prepare_view(scene, view), channel, channels, options);
}

RenderOutput render_subset_alpha_depth(const GaussianScene& scene, const CameraView& view,
                                       std::span<const std::uint8_t> member_mask, const RenderOptions& options) {
    if (member_mask.size() != scene.size()) {
        throw InputError(fmt::format("member mask has {} entries for {} Gaussians", member_mask.size(), scene.size()));
    }
    return render_property(prepare_view(scene, view, member_mask), {}, 0, options);
}

RenderOutput render_naive(const GaussianScene& scene, const CameraView& view, std::span<const double> channel,
                          int channels, const RenderOptions& options, std::span<const std::uint8_t> member_mask) {
    check_channel(scene.size(), channel, channels);
    if (!member_mask.empty() && member_mask.size() != scene.size()) {
        throw InputError(fmt::format("member mask has {} entries for {} Gaussians", member_mask.size(), scene.size()));
    }
    const std::vector<ProjectedGaussian> projected = project_scene(scene, view, member_mask);
    RenderOutput out = make_output(view, channels);
    const auto nc = static_cast<std::size_t>(channels);

    std::vector<const ProjectedGaussian*> hits;
    for (int y = 0; y < view.height; ++y) {
        for (int x = 0; x < view.width; ++x) {
            const Eigen::Vector2d pixel(x, y);
            hits.clear();
            for (const ProjectedGaussian& p : projected) {
                if (supports(p, pixel)) hits.push_back(&p);
            }
            std::sort(hits.begin(), hits.end(), [](const ProjectedGaussian* a, const ProjectedGaussian* b) {
                return a->depth != b->depth ? a->depth < b->depth : a->gaussian_index < b->gaussian_index;
            });

            const std::size_t px = out.pixel(x, y);
            double transmittance = 1.0;
            double rho = 0.0;
            double depth = 0.0;
            for (const ProjectedGaussian* p : hits) {
                const double alpha = evaluate_alpha(*p, pixel, p->opacity);
                if (options.alpha_floor && alpha < kMinAlpha) continue;
                const double w = alpha * transmittance;
                for (std::size_t c = 0; c < nc; ++c) {
                    out.value[px * nc + c] += channel[static_cast<std::size_t>(p->gaussian_index) * nc + c] * w;
                }
                rho += w;
                depth += p->depth * w;
                transmittance *= 1.0 - alpha;
                if (options.early_termination && transmittance < kTerminationTransmittance) break;
            }
            out.alpha[px] = rho;
            out.depth[px] = rho > 0.0 ? depth / rho : 0.0;
        }
    }
    return out;
}

} // namespace splatseg
