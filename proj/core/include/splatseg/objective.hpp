#pragma once

#include "splatseg/label_mask.hpp"
#include "splatseg/rasterizer.hpp"
#include "splatseg/scene.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace splatseg {

inline constexpr std::size_t kMaxBruteForceGaussians = 20;

/// Sum over masked views and pixels of |render(P) - M| with the naive
/// renderer. Masks must be binary (labels 0/1).
double objective_value(const GaussianScene& scene, std::span<const MaskedView> views,
                       std::span<const std::uint8_t> labels, const RenderOptions& options = kExactRender);

struct BruteForceResult {
    std::vector<std::uint8_t> labels;
    double objective = 0.0;
};

/// Scores all 2^N labelings and returns the first minimizer in enumeration
/// order. Per-pixel blend weights come from the naive renderer once, since
/// alpha and T do not depend on the labels. Refuses N > 20 with InputError.
BruteForceResult brute_force_oracle(const GaussianScene& scene, std::span<const MaskedView> views,
                                    const RenderOptions& options = kExactRender);

} // namespace splatseg
