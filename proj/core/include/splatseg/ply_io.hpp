#pragma once

#include "splatseg/scene.hpp"

#include <filesystem>

namespace splatseg {

/// Reads a binary little-endian 3DGS checkpoint PLY. Activations are applied
/// on load: opacity = logistic(raw), scale = exp(raw), rotation normalized
/// (rot_0 is w). f_rest_* and normals are skipped.
///
/// Throws FormatError naming the missing property or malformed header,
/// DataError with the vertex index on non-finite values, IoError when the file
/// cannot be read.
GaussianScene load_scene_ply(const std::filesystem::path& path);

/// Writes `scene` in the same layout with inverse activations (logit opacity,
/// log scale). Output bytes depend only on the scene contents.
void export_ply(const GaussianScene& scene, const std::filesystem::path& path);

} // namespace splatseg
