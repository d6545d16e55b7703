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

#include "doctest.h"
#include "radarbev/rng.hpp"
#include "radarbev/scene_bev.hpp"

using namespace radarbev;

TEST_CASE("radial_velocity") {
    CHECK(radial_velocity({{10, 0, 0, 0.0}, {12, 0, 0, 0.0}, 0.5}) == doctest::Approx(4.0));
    CHECK(radial_velocity({{10, 0, 0, 0.0}, {10, 1, 0, 0.0}, 0.5}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(radial_velocity({{10, 0, 0, 0.0}, {9, 0, 0, 0.0}, 0.5}) == doctest::Approx(-2.0));

    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-40, 40), y = rng.uniform(-40, 40);
        if (std::hypot(x, y) < 1e-3) continue;
        const double dx = rng.normal(), dy = rng.normal(), dz = rng.normal();
        const double dt = rng.uniform(0.05, 1.0);
        const Correspondence c{{x, y, 1.0, 0.0}, {x + dx, y + dy, 1.0 + dz, 0.0}, dt};
        const double n = std::hypot(x, y);
        const double oracle = (dx / dt) * (x / n) + (dy / dt) * (y / n);
        CHECK(radial_velocity(c) == doctest::Approx(oracle));
    }

    CHECK_THROWS_AS(radial_velocity({{10, 0, 0, 0.0}, {12, 0, 0, 0.0}, 0.0}), PreconditionError);
    CHECK_THROWS_AS(radial_velocity({{0, 0, 3, 0.0}, {1, 0, 3, 0.0}, 0.1}), PreconditionError);
}

TEST_CASE("project_to_bev") {
    const GridSpec grid;
    SUBCASE("empty input is background") {
        const auto maps = project_to_bev({}, grid, PayloadKind::Label);
        REQUIRE(maps.size() == 1u);
        for (double v : maps[0].values) CHECK(v == 0.0);
        CHECK(project_to_bev({}, grid, PayloadKind::Color).size() == 3u);
    }
    SUBCASE("highest point wins the cell") {
        const std::vector<AttributedPoint3D> pts{{1.0, 1.0, 1.0, Label{10}},
                                                 {1.01, 1.02, 3.0, Label{200}}};
        const auto m = project_to_bev(pts, grid, PayloadKind::Label)[0];
        CHECK(m.channel == Channel::Semantic);
        CHECK(m.at(*world_to_cell(1.0, 1.0, grid)) == doctest::Approx(200.0 / 255.0));
    }
    SUBCASE("points above the height limit are dropped") {
        const std::vector<AttributedPoint3D> pts{{1.0, 1.0, 6.0, Color{1.0, 1.0, 1.0}}};
        const auto maps = project_to_bev(pts, grid, PayloadKind::Color);
        REQUIRE(maps.size() == 3u);
        for (const auto& m : maps) CHECK(m.at(*world_to_cell(1.0, 1.0, grid)) == 0.0);
    }
    SUBCASE("order of equal-height points does not matter") {
        std::vector<AttributedPoint3D> pts{{2.0, 2.0, 1.0, 10.0}, {2.01, 2.01, 1.0, -10.0}};
        const auto a = project_to_bev(pts, grid, PayloadKind::Scalar)[0];
        std::swap(pts[0], pts[1]);
        const auto b = project_to_bev(pts, grid, PayloadKind::Scalar)[0];
        CHECK(a.values == b.values);
    }
    SUBCASE("mismatched payload kind") {
        const std::vector<AttributedPoint3D> pts{{1.0, 1.0, 1.0, Label{3}}};
        CHECK_THROWS_AS(project_to_bev(pts, grid, PayloadKind::Color), PreconditionError);
    }
}

TEST_CASE("radial_velocity_map") {
    const GridSpec grid;
    CHECK(radial_velocity_map({}, grid).values == std::vector<double>(grid.cell_count(), 0.0));
    const std::vector<Correspondence> one{{{10, 0, 0, 0.0}, {12, 0, 0, 0.0}, 0.5}};
    const auto m = radial_velocity_map(one, grid);
    CHECK(m.channel == Channel::RadialVelocity);
    CHECK(m.at(*world_to_cell(10, 0, grid)) == doctest::Approx(124.0 / 240.0));
    CHECK(m.at(*world_to_cell(10, 0, grid)) == doctest::Approx(0.5167).epsilon(1e-3));

    const std::vector<Correspondence> stacked{{{10, 0, 1, 0.0}, {12, 0, 1, 0.0}, 0.5},
                                              {{10.01, 0.01, 2, 0.0}, {10.01, 0.01, 2, 0.0}, 0.5},
                                              {{0, 0, 1, 0.0}, {1, 0, 1, 0.0}, 0.5}};
    const auto s = radial_velocity_map(stacked, grid);
    CHECK(s.at(*world_to_cell(10, 0, grid)) == doctest::Approx(0.5));  // z = 2 point, 0 m/s
}
