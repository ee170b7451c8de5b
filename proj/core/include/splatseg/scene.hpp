#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace splatseg {

inline constexpr double kDefaultNearClip = 0.01;

/// One 3D Gaussian with activations already applied.
struct Gaussian {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity(); // unit norm
    Eigen::Vector3d scale = Eigen::Vector3d::Ones();               // per-axis std-dev, > 0
    double opacity = 1.0;                                           // [0, 1]
    Eigen::Vector3d color_dc = Eigen::Vector3d::Zero();             // raw f_dc_* SH coefficients
};

/// Ordered set of Gaussians. Positions in `gaussians` are the stable indices
/// every contribution matrix and assignment refers to.
struct GaussianScene {
    std::vector<Gaussian> gaussians;
    std::string source_path;

    std::size_t size() const noexcept { return gaussians.size(); }
    bool empty() const noexcept { return gaussians.empty(); }
};

/// Pinhole camera with a rigid world-to-camera transform. +z looks forward,
/// pixel (x, y) is sampled at integer coordinates.
struct CameraView {
    int view_id = 0;
    int width = 1;
    int height = 1;
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    Eigen::Matrix4d world_to_camera = Eigen::Matrix4d::Identity();
    double near_clip = kDefaultNearClip;

    Eigen::Matrix3d rotation() const { return world_to_camera.topLeftCorner<3, 3>(); }
    Eigen::Vector3d translation() const { return world_to_camera.topRightCorner<3, 1>(); }
    Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const { return rotation() * world + translation(); }
    Eigen::Vector3d camera_center() const { return -rotation().transpose() * translation(); }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

    /// Throws InputError unless width/height >= 1, fx/fy > 0, the rotation
    /// block is orthonormal within 1e-5 and the bottom row is (0, 0, 0, 1).
    void validate() const;
};

/// Symmetric 3x3 covariance R(q) diag(s)^2 R(q)^T.
Eigen::Matrix3d covariance3d(const Gaussian& g);

/// Builds a world-to-camera matrix for a camera at `eye` looking at `target`.
/// `up` is the approximate world up direction; image y grows downward.
Eigen::Matrix4d look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                        const Eigen::Vector3d& up = Eigen::Vector3d::UnitY());

} // namespace splatseg
