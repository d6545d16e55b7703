// Copyright 2026 The radarbev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "radarbev/bev_encode.hpp"
#include "radarbev/io.hpp"

using namespace radarbev;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "radarbev_test_io";
    fs::create_directories(dir);
    return dir / name;
}

bool within_6_digits(double a, double b) {
    return std::abs(a - b) <= 5e-6 * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

}  // namespace

TEST_CASE("format_number") {
    CHECK(io::format_number(0.0) == "0");
    CHECK(io::format_number(-0.0) == "0");
    CHECK(io::format_number(1.5) == "1.5");
    CHECK(io::format_number(123456789.0) == "1.23457e+08");
    CHECK(io::format_number(0.1234567) == "0.123457");
}

TEST_CASE("cloud codecs round-trip at six significant digits") {
    Rng rng(1);
    const auto cloud = oracle::random_cloud(rng, 50, 49.0);
    for (const auto& text : {io::cloud_to_csv(cloud), io::cloud_to_jsonl(cloud)}) {
        const auto back = text.front() == 'x' ? io::cloud_from_csv(text) : io::cloud_from_jsonl(text);
        REQUIRE(back.size() == cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            CHECK(within_6_digits(back.points[i].x, cloud.points[i].x));
            CHECK(within_6_digits(back.points[i].y, cloud.points[i].y));
            CHECK(within_6_digits(back.points[i].rcs, cloud.points[i].rcs));
            CHECK(within_6_digits(back.points[i].doppler, cloud.points[i].doppler));
        }
        // A second pass is exact.
        CHECK(io::cloud_to_csv(back) == io::cloud_to_csv(cloud));
    }
    const auto path = scratch("cloud.jsonl");
    io::write_cloud(path, cloud);
    const auto read = io::read_cloud(path);
    CHECK(read.frame_id == "cloud");
    CHECK(read.size() == cloud.size());
}

TEST_CASE("cloud parse errors") {
    CHECK_THROWS_AS(io::cloud_from_csv("a,b,c,d\n1,2,3,4\n"), ParseError);
    CHECK_THROWS_AS(io::cloud_from_csv("x,y,rcs,doppler\n1,2,3\n"), ParseError);
    CHECK_THROWS_AS(io::cloud_from_csv("x,y,rcs,doppler\n1,2,abc,4\n"), ParseError);
    CHECK_THROWS_AS(io::cloud_from_csv("x,y,rcs,doppler\n1,2,nan,4\n"), ParseError);
    CHECK_THROWS_AS(io::cloud_from_jsonl("{\"x\":1}\n"), ParseError);
    CHECK(io::cloud_from_csv("x,y,rcs,doppler\n").empty());
    CHECK_THROWS_AS(io::read_cloud(scratch("missing.csv")), io::IoError);
}

TEST_CASE("boxes round-trip") {
    BoundingBox b;
    b.cx = 1.25;
    b.cy = -3.5;
    b.length = 4.5;
    b.width = 1.75;
    b.yaw = 0.5;
    b.cls = ObjectClass::Trailer;
    b.visibility = 0.75;
    const auto back = io::boxes_from_json(io::boxes_to_json({b, b}));
    REQUIRE(back.size() == 2u);
    CHECK(back[1].cls == ObjectClass::Trailer);
    CHECK(back[1].cx == 1.25);
    CHECK(back[1].visibility == 0.75);
    CHECK_THROWS_AS(io::boxes_from_json("{}"), ParseError);
    CHECK_THROWS_AS(io::boxes_from_json("[{\"cx\": 1}]"), ParseError);
}

TEST_CASE("png maps are bit-exact") {
    Rng rng(2);
    const GridSpec grid{10.0, 37};
    BevMap m(grid, Channel::Doppler, ranges::kDoppler);
    for (auto& v : m.values) v = rng.uniform();
    const auto q = quantized(m);
    const auto path = scratch("map_doppler.png");
    io::write_map(path, m);
    const auto back = io::read_map(path);
    CHECK(back.grid == grid);
    CHECK(back.channel == Channel::Doppler);
    CHECK(back.range == ranges::kDoppler);
    CHECK(back.values == q.values);

    std::vector<std::uint8_t> levels(grid.cell_count());
    for (auto& l : levels) l = static_cast<std::uint8_t>(rng.below(256));
    int size = 0;
    CHECK(io::decode_png(io::encode_png(levels, grid.size), size) == levels);
    CHECK(size == grid.size);
    CHECK_THROWS_AS(io::decode_png({1, 2, 3}, size), ParseError);
}

TEST_CASE("attribute error after the 8-bit round trip") {
    Rng rng(3);
    const GridSpec grid;
    const auto cloud = oracle::random_cloud(rng, 300, 49.0);
    const auto maps = encode(cloud, grid, GaussianKernel(2.0));
    io::write_map(scratch("rt_rcs.png"), maps.rcs);
    io::write_map(scratch("rt_doppler.png"), maps.doppler);
    const auto rcs = io::read_map(scratch("rt_rcs.png"));
    const auto doppler = io::read_map(scratch("rt_doppler.png"));
    const auto cells = maps.occupancy.cells();
    const auto attrs = sample_attributes(cells, rcs, doppler);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& p = cloud.points[*maps.occupancy.owner_of(cells[i])];
        CHECK(std::abs(attrs[i].rcs - p.rcs) <= 0.169);
        CHECK(std::abs(attrs[i].doppler - p.doppler) <= 0.471);
    }
}

TEST_CASE("attributed points and correspondences") {
    const auto colors =
        io::attributed_points_from_csv("x,y,z,r,g,b\n1,2,0.5,0.1,0.2,0.3\n", PayloadKind::Color);
    REQUIRE(colors.size() == 1u);
    CHECK(std::get<Color>(colors[0].payload).g == 0.2);
    const auto labels = io::attributed_points_from_csv("x,y,z,label\n1,2,0.5,7\n", PayloadKind::Label);
    CHECK(std::get<Label>(labels[0].payload).id == 7);
    CHECK_THROWS_AS(io::attributed_points_from_csv("x,y,z,label\n1,2,0.5,7.5\n", PayloadKind::Label),
                    ParseError);
    const auto corr = io::correspondences_from_csv("x,y,z,x2,y2,z2,dt\n10,0,0,12,0,0,0.5\n");
    REQUIRE(corr.size() == 1u);
    CHECK(corr[0].dt == 0.5);
    CHECK_THROWS_AS(io::correspondences_from_csv("x,y,z,x2,y2,z2,dt\n10,0,0,12,0,0,0\n"),
                    ParseError);
}

TEST_CASE("scene config round-trip") {
    SceneConfig cfg;
    cfg.seed = 99;
    cfg.n_objects = 4;
    cfg.grid = {25.0, 256};
    cfg.classes.pop_back();
    const auto back = io::scene_config_from_json(io::scene_config_to_json(cfg));
    CHECK(back.seed == 99u);
    CHECK(back.n_objects == 4);
    CHECK(back.grid == cfg.grid);
    CHECK(back.classes.size() == 3u);
    CHECK(io::scene_config_from_json("{}").n_clutter == SceneConfig{}.n_clutter);
    CHECK_THROWS_AS(io::scene_config_from_json("[1]"), ParseError);
}

TEST_CASE("manifest") {
    const std::string text = R"({"frames": [
        {"frame_id": "a", "gt": "a_gt.csv", "syn": "/abs/a_syn.csv", "boxes": "a.json"},
        {"frame_id": "b", "gt": "b_gt.csv",
         "syn_maps": {"density": "d.png", "rcs": "r.png", "doppler": "v.png"}}]})";
    const auto entries = io::manifest_from_json(text, "/data");
    REQUIRE(entries.size() == 2u);
    CHECK(entries[0].gt_cloud == fs::path("/data/a_gt.csv"));
    CHECK(entries[0].syn_cloud == fs::path("/abs/a_syn.csv"));
    CHECK_FALSE(entries[1].boxes.has_value());
    CHECK(entries[1].syn_rcs == fs::path("/data/r.png"));
    CHECK_THROWS_AS(io::manifest_from_json(
                        R"({"frames": [{"frame_id": "a", "gt": "x", "syn": "y"},
                                       {"frame_id": "a", "gt": "x", "syn": "y"}]})",
                        "."),
                    ParseError);
    CHECK_THROWS_AS(io::manifest_from_json(R"({"frames": [{"frame_id": "a", "gt": "x"}]})", "."),
                    ParseError);
}

TEST_CASE("atomic writes leave no temporary file") {
    const auto path = scratch("atomic.txt");
    io::write_file_atomic(path, "hello");
    CHECK(io::read_file(path) == "hello");
    CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}
