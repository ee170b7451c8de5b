#pragma once

#include "splatseg/assignment.hpp"
#include "splatseg/label_mask.hpp"
#include "splatseg/rasterizer.hpp"
#include "splatseg/scene.hpp"

namespace splatseg {

inline constexpr double kDefaultTau = 0.1;

struct RenderedMask {
    LabelMask mask;
    double gamma = 0.0;
    double tau = kDefaultTau;
};

/// How render_scene_mask resolves pixels claimed by several objects.
enum class MaskSelection {
    kDepthGuided, // nearest blended depth among objects with rho > tau
    kMaxAlpha,    // largest rho among objects with rho > tau (no depth guidance)
};

/// Foreground = pixels where the foreground subset's rho > tau.
/// Throws ContractError for scene assignments, InputError for tau outside (0, 1).
RenderedMask render_binary_mask(const GaussianScene& scene, const Assignment& assignment, const CameraView& view,
                                double tau = kDefaultTau, const RenderOptions& options = {});

/// Renders each non-empty object subset separately and labels every pixel
/// with the qualifying object of minimal depth (ties to the smaller id).
/// Throws ContractError for binary assignments, InputError for bad tau.
RenderedMask render_scene_mask(const GaussianScene& scene, const Assignment& assignment, const CameraView& view,
                               double tau = kDefaultTau, MaskSelection selection = MaskSelection::kDepthGuided,
                               const RenderOptions& options = {});

/// Dispatches on assignment.mode.
RenderedMask render_mask(const GaussianScene& scene, const Assignment& assignment, const CameraView& view,
                         double tau = kDefaultTau);

} // namespace splatseg
