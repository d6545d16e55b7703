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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radarbev {

/// Malformed input text (CSV, JSON, PNG, sidecar).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The recovery solver could not produce a usable result.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One radar detection in the ego frame: x forward, y left (meters),
/// RCS in dBsm, signed radial Doppler in m/s (positive = receding).
struct RadarPoint {
    double x = 0.0;
    double y = 0.0;
    double rcs = 0.0;
    double doppler = 0.0;

    bool operator==(const RadarPoint&) const = default;
};

bool is_finite(const RadarPoint& p);

/// Ordered detections. Point index is the tie-break key for every
/// "lowest index wins" rule downstream, so order is preserved everywhere.
struct RadarPointCloud {
    std::vector<RadarPoint> points;
    std::string frame_id;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Drops points outside the |x| <= extent, |y| <= extent region of interest.
RadarPointCloud filter_roi(const RadarPointCloud& cloud, double extent = 50.0);

struct CellIndex {
    int row = 0;
    int col = 0;

    bool operator==(const CellIndex&) const = default;
    auto operator<=>(const CellIndex&) const = default;
};

/// Square metric raster centered on the ego vehicle. Rows index y, columns
/// index x, both increasing with the coordinate. Cells are half-open.
struct GridSpec {
    double extent = 50.0;
    int size = 512;

    double resolution() const { return 2.0 * extent / size; }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(size) * static_cast<std::size_t>(size);
    }
    std::size_t flat(CellIndex c) const {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(size) +
               static_cast<std::size_t>(c.col);
    }
    CellIndex unflat(std::size_t i) const {
        return {static_cast<int>(i / static_cast<std::size_t>(size)),
                static_cast<int>(i % static_cast<std::size_t>(size))};
    }
    bool contains(CellIndex c) const {
        return c.row >= 0 && c.row < size && c.col >= 0 && c.col < size;
    }
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

std::optional<CellIndex> world_to_cell(double x, double y, const GridSpec& grid);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

Vec2 cell_center(CellIndex c, const GridSpec& grid);

/// Physical interpretation of the normalized values 0 and 1.
struct ValueRange {
    double min = 0.0;
    double max = 1.0;

    double span() const { return max - min; }
    void validate() const;

    bool operator==(const ValueRange&) const = default;
};

namespace ranges {
inline constexpr ValueRange kRcs{-20.0, 66.0};
inline constexpr ValueRange kDoppler{-120.0, 120.0};
inline constexpr ValueRange kDensity{0.0, 1.0};
inline constexpr ValueRange kLocation{-50.0, 50.0};
}  // namespace ranges

/// Clips v into the range, then maps linearly onto [0, 1].
/// Throws PreconditionError on non-finite input.
double normalize_value(double v, const ValueRange& range);
double denormalize_value(double u, const ValueRange& range);

/// 8-bit quantization of a normalized value: round(u * 255).
std::uint8_t quantize_level(double u);
double dequantize_level(std::uint8_t level);

enum class Channel { Density, Rcs, Doppler, Appearance, Semantic, RadialVelocity };

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

/// A normalized single-channel BEV raster, row-major, values in [0, 1].
struct BevMap {
    GridSpec grid;
    Channel channel = Channel::Density;
    ValueRange range = ranges::kDensity;
    std::vector<double> values;

    BevMap() = default;
    BevMap(GridSpec g, Channel ch, ValueRange r, double fill = 0.0)
        : grid(g), channel(ch), range(r), values(g.cell_count(), fill) {}

    double at(CellIndex c) const { return values[grid.flat(c)]; }
    double& at(CellIndex c) { return values[grid.flat(c)]; }
};

/// Unit-peak isotropic Gaussian; sigma is in grid cells, radius = ceil(3 sigma).
class GaussianKernel {
public:
    explicit GaussianKernel(double sigma);

    double sigma() const { return sigma_; }
    int radius() const { return radius_; }
    int width() const { return 2 * radius_ + 1; }

    /// Weight at offset (dr, dc) from the center, each in [-radius, radius].
    double weight(int dr, int dc) const {
        return profile_[static_cast<std::size_t>(dr + radius_)] *
               profile_[static_cast<std::size_t>(dc + radius_)];
    }
    /// 1-D factor; the 2-D kernel is its outer product.
    std::span<const double> profile() const { return profile_; }
    /// Sum of all 2-D weights.
    double mass() const { return mass_; }

private:
    double sigma_;
    int radius_;
    std::vector<double> profile_;
    double mass_;
};

/// Same-size 2-D convolution with zero padding. The kernel is symmetric, so
/// this operator is also its own adjoint.
void convolve(std::span<const double> in, std::span<double> out, int size,
              const GaussianKernel& kernel);
std::vector<double> convolve(std::span<const double> in, int size,
                             const GaussianKernel& kernel);

enum class ObjectClass { Car, Truck, Trailer, Other };

std::string_view to_string(ObjectClass c);
ObjectClass class_from_string(std::string_view s);

/// Oriented BEV rectangle. length runs along the heading (yaw), width across.
struct BoundingBox {
    double cx = 0.0;
    double cy = 0.0;
    double length = 1.0;
    double width = 1.0;
    double yaw = 0.0;
    ObjectClass cls = ObjectClass::Car;
    double visibility = 1.0;

    void validate() const;
    /// Boundary inclusive.
    bool contains(double x, double y) const;
    /// Translate by (-cx, -cy), then rotate by -yaw.
    Vec2 to_box_frame(double x, double y) const;
};

}  // namespace radarbev
