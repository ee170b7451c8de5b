#include "splatseg/scene.hpp"

#include "splatseg/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace splatseg {

void CameraView::validate() const {
    if (width < 1 || height < 1) {
        throw InputError(fmt::format("view {}: image size {}x{} must be at least 1x1", view_id, width, height));
    }
    if (!(fx > 0.0) || !(fy > 0.0)) {
        throw InputError(fmt::format("view {}: focal lengths must be positive (fx={}, fy={})", view_id, fx, fy));
    }
    if (!world_to_camera.allFinite()) {
        throw InputError(fmt::format("view {}: world_to_camera has non-finite entries", view_id));
    }
    const Eigen::Matrix3d r = rotation();
    const double err = (r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (err > 1e-5) {
        throw InputError(fmt::format("view {}: rotation block is not orthonormal (error {:.3g})", view_id, err));
    }
    if (r.determinant() < 0.0) {
        throw InputError(fmt::format("view {}: rotation block is a reflection", view_id));
    }
    const Eigen::RowVector4d bottom = world_to_camera.row(3);
    if ((bottom - Eigen::RowVector4d(0.0, 0.0, 0.0, 1.0)).cwiseAbs().maxCoeff() > 1e-9) {
        throw InputError(fmt::format("view {}: world_to_camera bottom row must be (0, 0, 0, 1)", view_id));
    }
    if (!(near_clip >= 0.0)) {
        throw InputError(fmt::format("view {}: near_clip must be non-negative", view_id));
    }
}

Eigen::Matrix3d covariance3d(const Gaussian& g) {
    const Eigen::Matrix3d r = g.rotation.normalized().toRotationMatrix();
    const Eigen::Matrix3d m = r * g.scale.asDiagonal();
    return m * m.transpose();
}

Eigen::Matrix4d look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up) {
    const Eigen::Vector3d forward = (target - eye).normalized();
    // Camera frame is x right, y down, z forward.
    Eigen::Vector3d right = forward.cross(up);
    if (right.norm() < 1e-9) {
        right = forward.cross(Eigen::Vector3d::UnitZ());
    }
    right.normalize();
    const Eigen::Vector3d down = forward.cross(right);

    Eigen::Matrix4d w2c = Eigen::Matrix4d::Identity();
    w2c.block<1, 3>(0, 0) = right.transpose();
    w2c.block<1, 3>(1, 0) = down.transpose();
    w2c.block<1, 3>(2, 0) = forward.transpose();
    w2c.topRightCorner<3, 1>() = -w2c.topLeftCorner<3, 3>() * eye;
    return w2c;
}

} // namespace splatseg
