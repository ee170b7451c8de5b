#include "generators.hpp"
#include "oracles.hpp"

#include "splatseg/projection.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>

using namespace splatseg;
using namespace splatseg::testing;

TEST(Projection, JacobianMatchesFiniteDifferences) {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const CameraView v = random_camera(rng, 0, 64, 48);
        const Eigen::Vector3d p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, 0.5, 6));
        const auto j = projection_jacobian(v, p);
        const auto n = numeric_jacobian(v, p);
        EXPECT_LT((j - n).cwiseAbs().maxCoeff(), 1e-5 * (1.0 + j.cwiseAbs().maxCoeff()));
    }
}

TEST(Projection, ScreenCovarianceMatchesReferenceRoute) {
    Rng rng(42);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const GaussianScene scene = random_scene(rng, {.count = 20});
        const CameraView v = random_camera(rng, 0, 64, 64);
        for (std::size_t i = 0; i < scene.size(); ++i) {
            const auto p = project_gaussian(scene.gaussians[i], static_cast<std::uint32_t>(i), v);
            if (!p) continue;
            const Eigen::Matrix2d ref = reference_cov2d(scene.gaussians[i], v);
            EXPECT_LT((p->cov2d - ref).cwiseAbs().maxCoeff(), 1e-5 * (1.0 + ref.cwiseAbs().maxCoeff()));
            EXPECT_LT((p->inv_cov2d * p->cov2d - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-9);
            const Eigen::Vector3d pc = v.to_camera(scene.gaussians[i].center);
            EXPECT_NEAR(p->depth, pc.z(), 1e-12);
            EXPECT_NEAR(p->mean2d.x(), v.fx * pc.x() / pc.z() + v.cx, 1e-9);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(p->cov2d);
            const double extent = 3.0 * std::sqrt(es.eigenvalues().maxCoeff());
            EXPECT_GE(p->radius, extent - 1e-9);
            EXPECT_LT(p->radius, extent + 1.0);
            ++checked;
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(Projection, DilationAddsPointThreePixels) {
    Gaussian g;
    g.scale = Eigen::Vector3d::Constant(1e-9);
    CameraView v;
    v.width = v.height = 16;
    v.fx = v.fy = 10;
    v.cx = v.cy = 8;
    g.center = {0, 0, 2};
    const auto p = project_gaussian(g, 0, v);
    ASSERT_TRUE(p);
    EXPECT_NEAR(p->cov2d(0, 0), 0.3, 1e-12);
    EXPECT_NEAR(p->cov2d(1, 1), 0.3, 1e-12);
    EXPECT_NEAR(p->cov2d(0, 1), 0.0, 1e-12);
    EXPECT_EQ(p->radius, 2);
}

TEST(Projection, CullsBehindNearClipAndOffScreen) {
    CameraView v;
    v.width = v.height = 32;
    v.fx = v.fy = 32;
    v.cx = v.cy = 15.5;
    Gaussian g;
    g.scale = Eigen::Vector3d::Constant(0.01);
    ProjectionStats stats;
    g.center = {0, 0, -1};
    EXPECT_FALSE(project_gaussian(g, 0, v, &stats));
    g.center = {0, 0, kDefaultNearClip};
    EXPECT_FALSE(project_gaussian(g, 0, v, &stats));
    EXPECT_EQ(stats.behind_near_clip, 2u);
    g.center = {0, 0, 0.5};
    EXPECT_TRUE(project_gaussian(g, 0, v, &stats));
    g.center = {100, 0, 1};
    EXPECT_FALSE(project_gaussian(g, 0, v, &stats));
    EXPECT_EQ(stats.off_screen, 1u);
}

TEST(Projection, FootprintJustOutsideImageStillKeptWhenBoxOverlaps) {
    CameraView v;
    v.width = v.height = 32;
    v.fx = v.fy = 32;
    v.cx = v.cy = 15.5;
    Gaussian g;
    g.scale = Eigen::Vector3d::Constant(0.1);
    g.center = {-0.55, 0, 1}; // center at x = -2.1 px, radius ~10 px
    const auto p = project_gaussian(g, 0, v);
    ASSERT_TRUE(p);
    EXPECT_LT(p->mean2d.x(), 0.0);
}

TEST(Projection, AlphaClampAndSupport) {
    ProjectedGaussian p;
    p.mean2d = {5, 5};
    p.cov2d = Eigen::Matrix2d::Identity();
    p.inv_cov2d = Eigen::Matrix2d::Identity();
    EXPECT_DOUBLE_EQ(evaluate_alpha(p, {5, 5}, 1.0), kMaxAlpha);
    EXPECT_NEAR(evaluate_alpha(p, {6, 5}, 0.5), 0.5 * std::exp(-0.5), 1e-15);
    EXPECT_TRUE(supports(p, {8, 5}));
    EXPECT_FALSE(supports(p, {8.01, 5}));
}

TEST(Projection, ProjectSceneHonorsMemberMaskAndOrder) {
    Rng rng(43);
    const GaussianScene scene = random_scene(rng, {.count = 30});
    const CameraView v = random_camera(rng, 0, 64, 64);
    std::vector<std::uint8_t> mask(scene.size(), 0);
    for (std::size_t i = 0; i < mask.size(); i += 3) mask[i] = 1;
    const auto all = project_scene(scene, v);
    const auto some = project_scene(scene, v, mask);
    for (std::size_t k = 1; k < all.size(); ++k) EXPECT_LT(all[k - 1].gaussian_index, all[k].gaussian_index);
    for (const auto& p : some) EXPECT_EQ(mask[p.gaussian_index], 1);
    std::size_t expected = 0;
    for (const auto& p : all) expected += mask[p.gaussian_index];
    EXPECT_EQ(some.size(), expected);
}
