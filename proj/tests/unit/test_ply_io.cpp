#include "generators.hpp"
#include "temp_dir.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"
#include "splatseg/ply_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

using namespace splatseg;
using namespace splatseg::testing;

namespace {

const std::vector<std::string> kProps = {"x",       "y",       "z",       "f_dc_0",  "f_dc_1", "f_dc_2",
                                         "opacity", "scale_0", "scale_1", "scale_2", "rot_0",  "rot_1",
                                         "rot_2",   "rot_3"};

std::string float_ply(const std::vector<std::string>& props, const std::vector<std::vector<float>>& rows,
                      const std::string& preamble = "", const std::string& prefix_bytes = "") {
    std::string s = "ply\nformat binary_little_endian 1.0\n" + preamble;
    s += "element vertex " + std::to_string(rows.size()) + "\n";
    for (const auto& p : props) s += "property float " + p + "\n";
    s += "end_header\n" + prefix_bytes;
    for (const auto& row : rows) s.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
    return s;
}

std::vector<float> raw_row(float x, float opacity_logit, float log_scale, float w) {
    return {x, 0.5f, -0.25f, 0.1f, 0.2f, 0.3f, opacity_logit, log_scale, log_scale, log_scale, w, 0.0f, 0.0f, 0.0f};
}

GaussianScene load_bytes(const TempDir& dir, const std::string& bytes) {
    const auto path = dir / "scene.ply";
    write_file(path, bytes);
    return load_scene_ply(path);
}

} // namespace

TEST(PlyLoad, AppliesActivations) {
    TempDir dir;
    const GaussianScene s = load_bytes(dir, float_ply(kProps, {raw_row(1.0f, 0.0f, std::log(0.5f), 2.0f)}));
    ASSERT_EQ(s.size(), 1u);
    const Gaussian& g = s.gaussians[0];
    EXPECT_NEAR(g.center.x(), 1.0, 1e-7);
    EXPECT_NEAR(g.opacity, 0.5, 1e-7);
    EXPECT_NEAR(g.scale.x(), 0.5, 1e-7);
    EXPECT_NEAR(g.rotation.w(), 1.0, 1e-7);
    EXPECT_NEAR(g.color_dc.z(), 0.3, 1e-7);
}

TEST(PlyLoad, IgnoresExtraPropertiesAndPrecedingElements) {
    TempDir dir;
    std::vector<std::string> props = kProps;
    props.insert(props.begin() + 3, {"nx", "ny", "nz"});
    props.push_back("f_rest_0");
    std::vector<float> row = raw_row(2.0f, 1.0f, 0.0f, 1.0f);
    row.insert(row.begin() + 3, {9.f, 9.f, 9.f});
    row.push_back(7.f);
    const std::string preamble = "comment made by hand\nelement meta 1\nproperty uchar flag\n";
    const GaussianScene s = load_bytes(dir, float_ply(props, {row}, preamble, std::string(1, '\x01')));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.gaussians[0].center.x(), 2.0, 1e-7);
    EXPECT_NEAR(s.gaussians[0].scale.y(), 1.0, 1e-7);
}

TEST(PlyLoad, RejectsAscii) {
    TempDir dir;
    const std::string text = "ply\nformat ascii 1.0\nelement vertex 0\nend_header\n";
    EXPECT_THROW(load_bytes(dir, text), FormatError);
}

TEST(PlyLoad, NamesMissingProperty) {
    TempDir dir;
    std::vector<std::string> props = kProps;
    props.erase(props.begin() + 7);
    std::vector<float> row = raw_row(0, 0, 0, 1);
    row.erase(row.begin() + 7);
    try {
        load_bytes(dir, float_ply(props, {row}));
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("scale_0"), std::string::npos);
    }
}

TEST(PlyLoad, ReportsVertexIndexOfNonFiniteValue) {
    TempDir dir;
    std::vector<float> bad = raw_row(0, 0, 0, 1);
    bad[1] = std::numeric_limits<float>::quiet_NaN();
    try {
        load_bytes(dir, float_ply(kProps, {raw_row(0, 0, 0, 1), raw_row(0, 0, 0, 1), bad}));
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("vertex 2"), std::string::npos) << e.what();
    }
}

TEST(PlyLoad, RejectsZeroQuaternionTruncationAndEmptyScene) {
    TempDir dir;
    EXPECT_THROW(load_bytes(dir, float_ply(kProps, {raw_row(0, 0, 0, 0)})), DataError);
    std::string truncated = float_ply(kProps, {raw_row(0, 0, 0, 1)});
    truncated.resize(truncated.size() - 3);
    EXPECT_THROW(load_bytes(dir, truncated), FormatError);
    EXPECT_THROW(load_bytes(dir, float_ply(kProps, {})), DataError);
    EXPECT_THROW(load_bytes(dir, "not a ply"), FormatError);
    EXPECT_THROW(load_scene_ply(dir / "missing.ply"), IoError);
}

TEST(PlyLoad, ReadsDoubleProperties) {
    TempDir dir;
    std::string s = "ply\nformat binary_little_endian 1.0\nelement vertex 1\n";
    for (const auto& p : kProps) s += "property double " + p + "\n";
    s += "end_header\n";
    std::vector<double> row = {0.125, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0};
    s.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
    EXPECT_DOUBLE_EQ(load_bytes(dir, s).gaussians[0].center.x(), 0.125);
}

TEST(PlyRoundTrip, ExportThenLoadWithin1e6) {
    TempDir dir;
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianScene scene = random_scene(rng, {.count = 200});
        export_ply(scene, dir / "out.ply");
        const GaussianScene back = load_scene_ply(dir / "out.ply");
        ASSERT_EQ(back.size(), scene.size());
        for (std::size_t i = 0; i < scene.size(); ++i) {
            const Gaussian& a = scene.gaussians[i];
            const Gaussian& b = back.gaussians[i];
            EXPECT_LT((a.center - b.center).cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_LT((a.color_dc - b.color_dc).cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_NEAR(a.opacity, b.opacity, 1e-6);
            EXPECT_LT(((a.scale - b.scale).array() / a.scale.array()).abs().maxCoeff(), 1e-6);
            EXPECT_NEAR(std::abs(a.rotation.coeffs().dot(b.rotation.coeffs())), 1.0, 1e-6);
        }
    }
}

TEST(PlyRoundTrip, ExportIsByteIdentical) {
    TempDir dir;
    Rng rng(22);
    const GaussianScene scene = random_scene(rng, {.count = 100});
    export_ply(scene, dir / "a.ply");
    export_ply(scene, dir / "b.ply");
    EXPECT_EQ(read_file(dir / "a.ply"), read_file(dir / "b.ply"));
    // Re-exporting a loaded file reproduces it.
    export_ply(load_scene_ply(dir / "a.ply"), dir / "c.ply");
    const GaussianScene c = load_scene_ply(dir / "c.ply");
    EXPECT_EQ(c.size(), scene.size());
}

TEST(PlyRoundTrip, SaturatedOpacityStaysFinite) {
    TempDir dir;
    GaussianScene scene;
    Gaussian g;
    g.opacity = 1.0;
    scene.gaussians.push_back(g);
    g.opacity = 0.0;
    scene.gaussians.push_back(g);
    export_ply(scene, dir / "sat.ply");
    const GaussianScene back = load_scene_ply(dir / "sat.ply");
    EXPECT_GT(back.gaussians[0].opacity, 0.999);
    EXPECT_LT(back.gaussians[1].opacity, 1e-3);
}
