#include "splatseg/contribution.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"
#include "splatseg/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace splatseg {
namespace {

constexpr char kMagic[4] = {'F', 'S', 'A', '1'};
constexpr std::size_t kMaxGroups = 8;
constexpr std::size_t kPartialBudgetBytes = std::size_t{1} << 29;

void check_mask(const MaskedView& mv, std::uint32_t num_objects) {
    const LabelMask& mask = *mv.mask;
    if (mask.width != mv.view.width || mask.height != mv.view.height) {
        throw InputError(fmt::format("view {}: mask is {}x{} but the view is {}x{}", mv.view.view_id, mask.width,
                                     mask.height, mv.view.width, mv.view.height));
    }
    for (std::size_t k = 0; k < mask.labels.size(); ++k) {
        if (mask.labels[k] >= num_objects) {
            throw InputError(fmt::format("view {}: label {} at pixel ({}, {}) exceeds object count {}",
                                         mv.view.view_id, mask.labels[k], k % static_cast<std::size_t>(mask.width),
                                         k / static_cast<std::size_t>(mask.width), num_objects));
        }
    }
}

} // namespace

ContributionMatrix::ContributionMatrix(std::uint32_t num_objects, std::uint32_t num_gaussians)
    : num_objects_(num_objects), num_gaussians_(num_gaussians),
      values_(static_cast<std::size_t>(num_objects) * num_gaussians, 0.0f) {}

double ContributionMatrix::column_sum(std::uint32_t i) const {
    double s = 0.0;
    for (std::uint32_t e = 0; e < num_objects_; ++e) s += at(e, i);
    return s;
}

ContributionMatrix& ContributionMatrix::operator+=(const ContributionMatrix& other) {
    if (other.num_objects_ != num_objects_ || other.num_gaussians_ != num_gaussians_) {
        throw InputError(fmt::format("cannot add {}x{} contributions to {}x{}", other.num_objects_,
                                     other.num_gaussians_, num_objects_, num_gaussians_));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ContributionMatrix& ContributionMatrix::operator*=(float factor) {
    for (float& v : values_) v *= factor;
    return *this;
}

ContributionMatrix accumulate_contributions(const GaussianScene& scene, std::span<const MaskedView> views,
                                            std::uint32_t num_objects, const RenderOptions& options) {
    if (num_objects < 1) throw InputError("object count must be at least 1");
    std::vector<const MaskedView*> masked;
    for (const MaskedView& mv : views) {
        if (!mv.mask) continue;
        mv.view.validate();
        check_mask(mv, num_objects);
        masked.push_back(&mv);
    }

    const auto n = static_cast<std::uint32_t>(scene.size());
    const std::size_t cells = static_cast<std::size_t>(num_objects) * n;
    const std::size_t by_memory = std::max<std::size_t>(1, kPartialBudgetBytes / std::max<std::size_t>(1, cells * sizeof(double)));
    const std::size_t groups = std::min({kMaxGroups, masked.size(), by_memory});
    std::vector<std::vector<double>> partials(groups);

    parallel_for(groups, [&](std::size_t g) {
        std::vector<double>& acc = partials[g];
        acc.assign(cells, 0.0);
        // Contiguous view ranges per group.
        const std::size_t begin = g * masked.size() / groups;
        const std::size_t end = (g + 1) * masked.size() / groups;
        for (std::size_t v = begin; v < end; ++v) {
            const MaskedView& mv = *masked[v];
            const LabelMask& mask = *mv.mask;
            const PreparedView prepared = prepare_view(scene, mv.view);
            visit_pixel_samples(prepared, options, [&](int x, int y, std::span<const BlendSample> samples) {
                double* row = acc.data() + static_cast<std::size_t>(mask.at(x, y)) * n;
                for (const BlendSample& s : samples) row[s.gaussian_index] += s.weight();
            });
        }
    });

    ContributionMatrix a(num_objects, n);
    auto out = a.values();
    for (std::size_t k = 0; k < cells; ++k) {
        double s = 0.0;
        for (const auto& partial : partials) s += partial[k];
        out[k] = static_cast<float>(s);
    }
    return a;
}

void save_contributions(const ContributionMatrix& a, const std::filesystem::path& path) {
    std::string bytes(12 + a.values().size() * sizeof(float), '\0');
    const std::uint32_t e = a.num_objects();
    const std::uint32_t n = a.num_gaussians();
    std::memcpy(bytes.data(), kMagic, 4);
    std::memcpy(bytes.data() + 4, &e, 4);
    std::memcpy(bytes.data() + 8, &n, 4);
    std::memcpy(bytes.data() + 12, a.values().data(), a.values().size() * sizeof(float));
    write_file(path, bytes);
}

ContributionMatrix load_contributions(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError(fmt::format("{}: not a contribution matrix (bad magic)", path.string()));
    }
    std::uint32_t e = 0, n = 0;
    std::memcpy(&e, bytes.data() + 4, 4);
    std::memcpy(&n, bytes.data() + 8, 4);
    const std::size_t cells = static_cast<std::size_t>(e) * n;
    if (bytes.size() != 12 + cells * sizeof(float)) {
        throw FormatError(fmt::format("{}: payload has {} bytes, expected {}", path.string(), bytes.size() - 12,
                                      cells * sizeof(float)));
    }
    ContributionMatrix a(e, n);
    std::memcpy(a.values().data(), bytes.data() + 12, cells * sizeof(float));
    for (const float v : a.values()) {
        if (!(v >= 0.0f) || !std::isfinite(v)) {
            throw DataError(fmt::format("{}: contribution entries must be finite and non-negative", path.string()));
        }
    }
    return a;
}

} // namespace splatseg
