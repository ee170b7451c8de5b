#pragma once

#include "splatseg/label_mask.hpp"
#include "splatseg/rasterizer.hpp"
#include "splatseg/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace splatseg {

/// A[e][i]: alpha * T mass Gaussian i deposits on pixels labeled e, summed
/// over all masked views. Dense, row-major, float32.
class ContributionMatrix {
public:
    ContributionMatrix() = default;
    ContributionMatrix(std::uint32_t num_objects, std::uint32_t num_gaussians);

    std::uint32_t num_objects() const { return num_objects_; }
    std::uint32_t num_gaussians() const { return num_gaussians_; }

    float at(std::uint32_t e, std::uint32_t i) const { return values_[index(e, i)]; }
    float& at(std::uint32_t e, std::uint32_t i) { return values_[index(e, i)]; }
    std::span<const float> row(std::uint32_t e) const { return {values_.data() + index(e, 0), num_gaussians_}; }
    std::span<float> row(std::uint32_t e) { return {values_.data() + index(e, 0), num_gaussians_}; }
    std::span<const float> values() const { return values_; }
    std::span<float> values() { return values_; }

    /// sum over e of A[e][i], accumulated in double.
    double column_sum(std::uint32_t i) const;
    bool observed(std::uint32_t i) const { return column_sum(i) > 0.0; }

    ContributionMatrix& operator+=(const ContributionMatrix& other);
    ContributionMatrix& operator*=(float factor);

private:
    std::size_t index(std::uint32_t e, std::uint32_t i) const {
        return static_cast<std::size_t>(e) * num_gaussians_ + i;
    }

    std::uint32_t num_objects_ = 0;
    std::uint32_t num_gaussians_ = 0;
    std::vector<float> values_;
};

/// Walks every pixel of every masked view and adds each surviving splat's
/// alpha * T into the row of the pixel's label. Views are split into at most
/// 8 contiguous groups (fewer when E * N partials would exceed 512 MiB), each
/// with private double-precision partials reduced in group order, so the
/// result does not depend on the thread schedule.
///
/// Throws InputError when a mask's size differs from its view or a label is
/// >= num_objects.
ContributionMatrix accumulate_contributions(const GaussianScene& scene, std::span<const MaskedView> views,
                                            std::uint32_t num_objects, const RenderOptions& options = {});

/// "FSA1" magic, E and N as little-endian u32, then E * N float32 row-major.
void save_contributions(const ContributionMatrix& a, const std::filesystem::path& path);
ContributionMatrix load_contributions(const std::filesystem::path& path);

} // namespace splatseg
