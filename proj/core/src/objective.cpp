#include "splatseg/objective.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace splatseg {
namespace {

void check_binary(const MaskedView& mv) {
    const LabelMask& m = *mv.mask;
    if (m.width != mv.view.width || m.height != mv.view.height) {
        throw InputError(fmt::format("view {}: mask size does not match the view", mv.view.view_id));
    }
    if (std::any_of(m.labels.begin(), m.labels.end(), [](std::uint16_t l) { return l > 1; })) {
        throw InputError(fmt::format("view {}: objective needs binary masks", mv.view.view_id));
    }
}

} // namespace

double objective_value(const GaussianScene& scene, std::span<const MaskedView> views,
                       std::span<const std::uint8_t> labels, const RenderOptions& options) {
    if (labels.size() != scene.size()) {
        throw InputError(fmt::format("{} labels for {} Gaussians", labels.size(), scene.size()));
    }
    std::vector<double> channel(labels.begin(), labels.end());
    double total = 0.0;
    for (const MaskedView& mv : views) {
        if (!mv.mask) continue;
        check_binary(mv);
        const RenderOutput r = render_naive(scene, mv.view, channel, 1, options);
        for (std::size_t px = 0; px < r.value.size(); ++px) {
            total += std::abs(r.value[px] - static_cast<double>(mv.mask->labels[px]));
        }
    }
    return total;
}

BruteForceResult brute_force_oracle(const GaussianScene& scene, std::span<const MaskedView> views,
                                    const RenderOptions& options) {
    const std::size_t n = scene.size();
    if (n > kMaxBruteForceGaussians) {
        throw InputError(fmt::format("brute force refuses N = {} (limit {})", n, kMaxBruteForceGaussians));
    }

    // Per pixel: target label and the alpha*T weight of every Gaussian, from
    // one-hot naive renders.
    struct Pixel {
        double target;
        std::vector<std::pair<std::uint32_t, double>> weights;
    };
    std::vector<Pixel> pixels;
    std::vector<double> one_hot(n, 0.0);
    for (const MaskedView& mv : views) {
        if (!mv.mask) continue;
        check_binary(mv);
        std::vector<Pixel> view_pixels(mv.view.pixel_count());
        for (std::size_t px = 0; px < view_pixels.size(); ++px) view_pixels[px].target = mv.mask->labels[px];
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(one_hot.begin(), one_hot.end(), 0.0);
            one_hot[i] = 1.0;
            const RenderOutput r = render_naive(scene, mv.view, one_hot, 1, options);
            for (std::size_t px = 0; px < view_pixels.size(); ++px) {
                if (r.value[px] != 0.0) view_pixels[px].weights.emplace_back(static_cast<std::uint32_t>(i), r.value[px]);
            }
        }
        for (Pixel& p : view_pixels) pixels.push_back(std::move(p));
    }

    BruteForceResult best;
    best.objective = std::numeric_limits<double>::infinity();
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        double f = 0.0;
        for (const Pixel& p : pixels) {
            double x = 0.0;
            for (const auto& [i, w] : p.weights) {
                if ((bits >> i) & 1u) x += w;
            }
            f += std::abs(x - p.target);
        }
        if (f < best.objective) {
            best.objective = f;
            best.labels.resize(n);
            for (std::size_t i = 0; i < n; ++i) best.labels[i] = static_cast<std::uint8_t>((bits >> i) & 1u);
        }
    }
    return best;
}

} // namespace splatseg
