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

#include "radarbev/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace radarbev {

bool is_finite(const RadarPoint& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.rcs) &&
           std::isfinite(p.doppler);
}

RadarPointCloud filter_roi(const RadarPointCloud& cloud, double extent) {
    RadarPointCloud out;
    out.frame_id = cloud.frame_id;
    for (const auto& p : cloud.points) {
        if (std::abs(p.x) <= extent && std::abs(p.y) <= extent) out.points.push_back(p);
    }
    return out;
}

void GridSpec::validate() const {
    if (!(extent > 0.0) || !std::isfinite(extent) || size <= 0) {
        throw PreconditionError("grid: extent and size must be positive");
    }
}

std::optional<CellIndex> world_to_cell(double x, double y, const GridSpec& grid) {
    if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
    const double res = grid.resolution();
    const double fr = std::floor((y + grid.extent) / res);
    const double fc = std::floor((x + grid.extent) / res);
    if (fr < 0.0 || fc < 0.0 || fr >= grid.size || fc >= grid.size) return std::nullopt;
    return CellIndex{static_cast<int>(fr), static_cast<int>(fc)};
}

Vec2 cell_center(CellIndex c, const GridSpec& grid) {
    const double res = grid.resolution();
    return {-grid.extent + (c.col + 0.5) * res, -grid.extent + (c.row + 0.5) * res};
}

void ValueRange::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
        throw PreconditionError("value range: need finite min < max");
    }
}

double normalize_value(double v, const ValueRange& range) {
    if (!std::isfinite(v)) throw PreconditionError("normalize_value: non-finite input");
    if (!(range.span() > 0.0)) throw PreconditionError("normalize_value: empty range");
    const double clipped = std::clamp(v, range.min, range.max);
    return (clipped - range.min) / range.span();
}

double denormalize_value(double u, const ValueRange& range) {
    return range.min + u * range.span();
}

std::uint8_t quantize_level(double u) {
    const double level = std::round(std::clamp(u, 0.0, 1.0) * 255.0);
    return static_cast<std::uint8_t>(level);
}

double dequantize_level(std::uint8_t level) { return level / 255.0; }

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::Density: return "density";
        case Channel::Rcs: return "rcs";
        case Channel::Doppler: return "doppler";
        case Channel::Appearance: return "appearance";
        case Channel::Semantic: return "semantic";
        case Channel::RadialVelocity: return "radial_velocity";
    }
    return "density";
}

Channel channel_from_string(std::string_view s) {
    for (auto c : {Channel::Density, Channel::Rcs, Channel::Doppler, Channel::Appearance,
                   Channel::Semantic, Channel::RadialVelocity}) {
        if (to_string(c) == s) return c;
    }
    throw ParseError("unknown channel '" + std::string(s) + "'");
}

GaussianKernel::GaussianKernel(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw PreconditionError("gaussian kernel: sigma must be positive");
    }
    radius_ = static_cast<int>(std::ceil(3.0 * sigma));
    profile_.resize(static_cast<std::size_t>(2 * radius_ + 1));
    double line_mass = 0.0;
    for (int k = -radius_; k <= radius_; ++k) {
        const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
        profile_[static_cast<std::size_t>(k + radius_)] = w;
        line_mass += w;
    }
    mass_ = line_mass * line_mass;
}

void convolve(std::span<const double> in, std::span<double> out, int size,
              const GaussianKernel& kernel) {
    const auto n = static_cast<std::size_t>(size);
    if (in.size() != n * n || out.size() != n * n) {
        throw PreconditionError("convolve: buffer size does not match grid");
    }
    const int radius = kernel.radius();
    const auto w = kernel.profile();
    const auto r = static_cast<std::size_t>(radius);

    // Horizontal pass into tmp through a zero-padded row buffer.
    std::vector<double> tmp(n * n);
    std::vector<double> padded(n + 2 * r, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        const double* src = in.data() + row * n;
        std::copy(src, src + n, padded.begin() + static_cast<std::ptrdiff_t>(r));
        double* dst = tmp.data() + row * n;
        std::fill(dst, dst + n, 0.0);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double wk = w[k];
            const double* p = padded.data() + k;
            for (std::size_t c = 0; c < n; ++c) dst[c] += wk * p[c];
        }
    }

    // Vertical pass, accumulating whole rows.
    for (int row = 0; row < size; ++row) {
        double* dst = out.data() + static_cast<std::size_t>(row) * n;
        std::fill(dst, dst + n, 0.0);
        const int lo = std::max(0, row - radius);
        const int hi = std::min(size - 1, row + radius);
        for (int src_row = lo; src_row <= hi; ++src_row) {
            const double wk = w[static_cast<std::size_t>(src_row - row + radius)];
            const double* s = tmp.data() + static_cast<std::size_t>(src_row) * n;
            for (std::size_t c = 0; c < n; ++c) dst[c] += wk * s[c];
        }
    }
}

std::vector<double> convolve(std::span<const double> in, int size,
                             const GaussianKernel& kernel) {
    std::vector<double> out(in.size());
    convolve(in, out, size, kernel);
    return out;
}

std::string_view to_string(ObjectClass c) {
    switch (c) {
        case ObjectClass::Car: return "car";
        case ObjectClass::Truck: return "truck";
        case ObjectClass::Trailer: return "trailer";
        case ObjectClass::Other: return "other";
    }
    return "other";
}

ObjectClass class_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (auto c : {ObjectClass::Car, ObjectClass::Truck, ObjectClass::Trailer,
                   ObjectClass::Other}) {
        if (to_string(c) == lower) return c;
    }
    throw ParseError("unknown object class '" + std::string(s) + "'");
}

void BoundingBox::validate() const {
    if (!(length > 0.0) || !(width > 0.0)) {
        throw PreconditionError("bounding box: length and width must be positive");
    }
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw PreconditionError("bounding box: visibility must lie in [0, 1]");
    }
}

Vec2 BoundingBox::to_box_frame(double x, double y) const {
    const double dx = x - cx;
    const double dy = y - cy;
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {c * dx + s * dy, -s * dx + c * dy};
}

bool BoundingBox::contains(double x, double y) const {
    const Vec2 local = to_box_frame(x, y);
    return std::abs(local.x) <= 0.5 * length && std::abs(local.y) <= 0.5 * width;
}

}  // namespace radarbev
