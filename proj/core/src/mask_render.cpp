#include "splatseg/mask_render.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

namespace splatseg {
namespace {

void check_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw InputError(fmt::format("tau {} is outside (0, 1)", tau));
}

void check_scene_size(const GaussianScene& scene, const Assignment& assignment) {
    if (assignment.num_gaussians != scene.size()) {
        throw InputError(fmt::format("assignment covers {} Gaussians but the scene has {}", assignment.num_gaussians,
                                     scene.size()));
    }
}

} // namespace

RenderedMask render_binary_mask(const GaussianScene& scene, const Assignment& assignment, const CameraView& view,
                                double tau, const RenderOptions& options) {
    if (assignment.mode != AssignmentMode::kBinary) throw ContractError("render_binary_mask needs a binary assignment");
    check_tau(tau);
    check_scene_size(scene, assignment);

    RenderedMask out{make_mask(view), assignment.gamma, tau};
    const std::vector<std::uint8_t> foreground = assignment.members_of(1);
    if (std::none_of(foreground.begin(), foreground.end(), [](std::uint8_t v) { return v != 0; })) return out;

    const RenderOutput r = render_subset_alpha_depth(scene, view, foreground, options);
    for (std::size_t px = 0; px < r.alpha.size(); ++px) out.mask.labels[px] = r.alpha[px] > tau ? 1 : 0;
    return out;
}

RenderedMask render_scene_mask(const GaussianScene& scene, const Assignment& assignment, const CameraView& view,
                               double tau, MaskSelection selection, const RenderOptions& options) {
    if (assignment.mode != AssignmentMode::kScene) throw ContractError("render_scene_mask needs a scene assignment");
    check_tau(tau);
    check_scene_size(scene, assignment);

    RenderedMask out{make_mask(view), assignment.gamma, tau};
    const std::size_t pixels = view.pixel_count();
    // Best score so far per pixel: depth (smaller wins) or rho (larger wins).
    std::vector<double> best(pixels, selection == MaskSelection::kDepthGuided ? std::numeric_limits<double>::infinity()
                                                                              : -1.0);
    for (std::uint32_t e = 1; e < assignment.num_objects; ++e) {
        const std::vector<std::uint8_t> members = assignment.members_of(e);
        if (std::none_of(members.begin(), members.end(), [](std::uint8_t v) { return v != 0; })) continue;
        const RenderOutput r = render_subset_alpha_depth(scene, view, members, options);
        for (std::size_t px = 0; px < pixels; ++px) {
            if (!(r.alpha[px] > tau)) continue;
            // Objects are visited in increasing id, so strict comparison keeps the smaller id on ties.
            const bool wins = selection == MaskSelection::kDepthGuided ? r.depth[px] < best[px] : r.alpha[px] > best[px];
            if (wins) {
                best[px] = selection == MaskSelection::kDepthGuided ? r.depth[px] : r.alpha[px];
                out.mask.labels[px] = static_cast<std::uint16_t>(e);
            }
        }
    }
    return out;
}

RenderedMask render_mask(const GaussianScene& scene, const Assignment& assignment, const CameraView& view, double tau) {
    return assignment.mode == AssignmentMode::kBinary ? render_binary_mask(scene, assignment, view, tau)
                                                      : render_scene_mask(scene, assignment, view, tau);
}

} // namespace splatseg
