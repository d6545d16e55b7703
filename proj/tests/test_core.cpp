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
#include <limits>
#include <numbers>

#include "doctest.h"
#include "radarbev/core.hpp"
#include "radarbev/rng.hpp"

using namespace radarbev;

TEST_CASE("world_to_cell") {
    const GridSpec grid;
    CHECK(world_to_cell(0.0, 0.0, grid) == CellIndex{256, 256});
    CHECK(world_to_cell(-50.0, -50.0, grid) == CellIndex{0, 0});
    CHECK_FALSE(world_to_cell(50.0, 0.0, grid).has_value());
    CHECK_FALSE(world_to_cell(0.0, -50.0001, grid).has_value());
    // Rows follow y, columns follow x.
    CHECK(world_to_cell(-50.0, 49.99, grid) == CellIndex{511, 0});
    CHECK_FALSE(world_to_cell(std::nan(""), 0.0, grid).has_value());
}

TEST_CASE("cell_center inverts world_to_cell") {
    const GridSpec grid;
    const auto c = cell_center({256, 256}, grid);
    CHECK(c.x == doctest::Approx(0.09765625));
    CHECK(c.y == doctest::Approx(0.09765625));
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const CellIndex cell{static_cast<int>(rng.below(512)), static_cast<int>(rng.below(512))};
        const auto p = cell_center(cell, grid);
        CHECK(world_to_cell(p.x, p.y, grid) == cell);
    }
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec({0.0, 512}).validate(), PreconditionError);
    CHECK_THROWS_AS(GridSpec({50.0, 0}).validate(), PreconditionError);
    CHECK_NOTHROW(GridSpec{}.validate());
    CHECK(GridSpec{}.resolution() == doctest::Approx(100.0 / 512.0));
}

TEST_CASE("normalization") {
    CHECK(normalize_value(23.0, ranges::kRcs) == doctest::Approx(0.5));
    CHECK(normalize_value(-120.0, ranges::kDoppler) == 0.0);
    CHECK(normalize_value(70.0, ranges::kRcs) == 1.0);
    CHECK(normalize_value(-30.0, ranges::kRcs) == 0.0);
    CHECK(denormalize_value(0.5, ranges::kRcs) == doctest::Approx(23.0));
    CHECK(denormalize_value(0.0, ranges::kDoppler) == doctest::Approx(-120.0));
    CHECK_THROWS_AS(normalize_value(std::numeric_limits<double>::infinity(), ranges::kRcs),
                    PreconditionError);
    CHECK_THROWS_AS(normalize_value(1.0, ValueRange{1.0, 1.0}), PreconditionError);
}

TEST_CASE("quantization levels") {
    CHECK(quantize_level(0.0) == 0);
    CHECK(quantize_level(1.0) == 255);
    CHECK(quantize_level(0.5) == 128);
    for (int level = 0; level < 256; ++level) {
        const auto l = static_cast<std::uint8_t>(level);
        CHECK(quantize_level(dequantize_level(l)) == l);
    }
    // Half a level is the worst-case round-trip error.
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(std::abs(dequantize_level(quantize_level(u)) - u) <= 0.5 / 255.0 + 1e-12);
    }
}

TEST_CASE("channel names round-trip") {
    for (auto ch : {Channel::Density, Channel::Rcs, Channel::Doppler, Channel::Appearance,
                    Channel::Semantic, Channel::RadialVelocity}) {
        CHECK(channel_from_string(to_string(ch)) == ch);
    }
    CHECK_THROWS_AS(channel_from_string("lidar"), ParseError);
}

TEST_CASE("gaussian kernel values") {
    const GaussianKernel k(2.0);
    CHECK(k.radius() == 6);
    CHECK(k.width() == 13);
    CHECK(k.weight(0, 0) == 1.0);
    CHECK(k.weight(0, 1) == doctest::Approx(std::exp(-1.0 / 8.0)));
    CHECK(k.weight(0, 1) == doctest::Approx(0.8825).epsilon(1e-4));
    CHECK(k.weight(2, -3) == doctest::Approx(std::exp(-13.0 / 8.0)));
    double direct = 0.0;
    for (int dr = -6; dr <= 6; ++dr) {
        for (int dc = -6; dc <= 6; ++dc) direct += std::exp(-(dr * dr + dc * dc) / 8.0);
    }
    CHECK(k.mass() == doctest::Approx(direct).epsilon(1e-12));
    CHECK(GaussianKernel(0.5).radius() == 2);
    CHECK_THROWS_AS(GaussianKernel(0.0), PreconditionError);
}

namespace {

// Direct 2-D zero-padded convolution.
std::vector<double> convolve_direct(const std::vector<double>& in, int size,
                                    const GaussianKernel& k) {
    std::vector<double> out(in.size(), 0.0);
    const int r = k.radius();
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            double acc = 0.0;
            for (int dr = -r; dr <= r; ++dr) {
                for (int dc = -r; dc <= r; ++dc) {
                    const int ii = i + dr, jj = j + dc;
                    if (ii < 0 || jj < 0 || ii >= size || jj >= size) continue;
                    acc += k.weight(dr, dc) * in[static_cast<std::size_t>(ii) * size + jj];
                }
            }
            out[static_cast<std::size_t>(i) * size + j] = acc;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("separable convolution matches the direct sum") {
    Rng rng(11);
    for (double sigma : {0.5, 1.0, 2.0, 3.0}) {
        const GaussianKernel k(sigma);
        const int size = 24;
        std::vector<double> x(static_cast<std::size_t>(size) * size);
        for (auto& v : x) v = rng.bernoulli(0.2) ? rng.uniform() : 0.0;
        const auto fast = convolve(x, size, k);
        const auto slow = convolve_direct(x, size, k);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]));
    }
}

TEST_CASE("convolution is self-adjoint") {
    Rng rng(12);
    const GaussianKernel k(2.0);
    const int size = 32;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(size * size), y(size * size);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        const auto kx = convolve(x, size, k);
        const auto ky = convolve(y, size, k);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            lhs += kx[i] * y[i];
            rhs += x[i] * ky[i];
        }
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), 1.0));
    }
}

TEST_CASE("object classes") {
    CHECK(class_from_string("Car") == ObjectClass::Car);
    CHECK(class_from_string("TRUCK") == ObjectClass::Truck);
    CHECK(to_string(ObjectClass::Trailer) == "trailer");
    CHECK_THROWS_AS(class_from_string("bicycle"), ParseError);
}

TEST_CASE("bounding box containment and frame") {
    BoundingBox b;
    b.cx = 10.0;
    b.cy = 5.0;
    b.length = 4.0;
    b.width = 2.0;
    b.yaw = std::numbers::pi / 2.0;
    CHECK(b.contains(10.0, 5.0));
    CHECK(b.contains(10.0, 7.0));  // front edge, boundary inclusive
    CHECK_FALSE(b.contains(12.0, 5.0));
    const auto front = b.to_box_frame(10.0, 7.0);
    CHECK(front.x == doctest::Approx(2.0));
    CHECK(front.y == doctest::Approx(0.0).epsilon(1e-12));
    const auto center = b.to_box_frame(10.0, 5.0);
    CHECK(center.x == doctest::Approx(0.0));
    CHECK(center.y == doctest::Approx(0.0));
}

TEST_CASE("roi filter is inclusive on both sides") {
    RadarPointCloud cloud;
    cloud.points = {{0, 0, 0, 0}, {50.0, 0, 0, 0}, {-50.0, -50.0, 0, 0}, {10, 60, 0, 0}};
    const auto kept = filter_roi(cloud);
    REQUIRE(kept.size() == 3);
    CHECK(kept.points[1].x == 50.0);
    CHECK(kept.points[2].x == -50.0);
}

TEST_CASE("rng is reproducible and unbiased enough") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng rng(7);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
}
