#include "generators.hpp"
#include "temp_dir.hpp"

#include "splatseg/camera_io.hpp"
#include "splatseg/errors.hpp"

#include <gtest/gtest.h>

using namespace splatseg;
using namespace splatseg::testing;

namespace {

const char* kIdentity = "[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]";

std::string camera_json(int id, const std::string& extra = "") {
    return "{\"view_id\":" + std::to_string(id) + ",\"width\":32,\"height\":24,\"fx\":30,\"fy\":31,\"cx\":15.5,\"cy\":11.5," +
           "\"world_to_camera\":" + kIdentity + extra + "}";
}

} // namespace

TEST(CameraParse, ReadsAllFields) {
    const auto cams = parse_cameras("[" + camera_json(3, ",\"mask_path\":\"m/3.png\",\"near_clip\":0.2") + "]");
    ASSERT_EQ(cams.size(), 1u);
    EXPECT_EQ(cams[0].view.view_id, 3);
    EXPECT_EQ(cams[0].view.width, 32);
    EXPECT_DOUBLE_EQ(cams[0].view.fy, 31.0);
    EXPECT_DOUBLE_EQ(cams[0].view.near_clip, 0.2);
    EXPECT_EQ(cams[0].mask_path.value(), "m/3.png");
}

TEST(CameraParse, DefaultsNearClip) {
    const auto cams = parse_cameras("[" + camera_json(0) + "]");
    EXPECT_DOUBLE_EQ(cams[0].view.near_clip, kDefaultNearClip);
    EXPECT_FALSE(cams[0].mask_path.has_value());
}

TEST(CameraParse, RejectsMalformedInput) {
    EXPECT_THROW(parse_cameras("{"), FormatError);
    EXPECT_THROW(parse_cameras("{}"), FormatError);
    EXPECT_THROW(parse_cameras("[{\"view_id\":0}]"), FormatError);
    EXPECT_THROW(parse_cameras("[" + camera_json(0, ",\"width\":\"wide\"").replace(0, 0, "") + "]"), FormatError);
    EXPECT_THROW(parse_cameras("[" + camera_json(1) + "," + camera_json(1) + "]"), InputError);
    std::string bad = camera_json(0);
    bad.replace(bad.find(kIdentity), std::string(kIdentity).size(), "[2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]");
    EXPECT_THROW(parse_cameras("[" + bad + "]"), InputError);
    std::string short_matrix = camera_json(0);
    short_matrix.replace(short_matrix.find(kIdentity), std::string(kIdentity).size(), "[1,0,0]");
    EXPECT_THROW(parse_cameras("[" + short_matrix + "]"), FormatError);
}

TEST(CameraIo, SaveLoadRoundTrip) {
    TempDir dir;
    Rng rng(31);
    std::vector<CameraEntry> cams;
    for (int v = 0; v < 5; ++v) {
        CameraEntry e{random_camera(rng, v, 40 + v, 30, 4.0), std::nullopt};
        if (v % 2 == 0) e.mask_path = "masks/" + std::to_string(v) + ".png";
        cams.push_back(e);
    }
    save_cameras(cams, dir / "cameras.json");
    const auto back = load_cameras(dir / "cameras.json");
    ASSERT_EQ(back.size(), cams.size());
    for (std::size_t k = 0; k < cams.size(); ++k) {
        EXPECT_EQ(back[k].view.view_id, cams[k].view.view_id);
        EXPECT_EQ(back[k].view.width, cams[k].view.width);
        EXPECT_DOUBLE_EQ(back[k].view.cx, cams[k].view.cx);
        EXPECT_EQ(back[k].view.world_to_camera, cams[k].view.world_to_camera);
        EXPECT_EQ(back[k].mask_path, cams[k].mask_path);
    }
}

TEST(CameraIo, FindCamera) {
    const auto cams = parse_cameras("[" + camera_json(4) + "," + camera_json(9) + "]");
    EXPECT_EQ(find_camera(cams, 9).view.view_id, 9);
    EXPECT_THROW(find_camera(cams, 5), LookupError);
    EXPECT_THROW(load_cameras("/nonexistent/cameras.json"), IoError);
}
