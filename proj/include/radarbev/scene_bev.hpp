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

#include <span>
#include <variant>
#include <vector>

#include "radarbev/core.hpp"

namespace radarbev {

struct Color {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    auto operator<=>(const Color&) const = default;
};

/// Class id of a segmented pixel.
struct Label {
    int id = 0;

    auto operator<=>(const Label&) const = default;
};

using Payload = std::variant<Color, Label, double>;

/// Alternative index of Payload.
enum class PayloadKind { Color = 0, Label = 1, Scalar = 2 };

/// A back-projected image point in the ego frame with what it carries.
struct AttributedPoint3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    Payload payload = 0.0;
};

struct Correspondence {
    AttributedPoint3D p_t;
    AttributedPoint3D p_t_next;
    double dt = 0.0;
};

struct ProjectionOptions {
    /// Points above this height are overhead structure and are dropped.
    double max_height = 5.0;
    /// Normalized value of cells no point reaches.
    double background = 0.0;
    /// Range for scalar payloads.
    ValueRange scalar_range = ranges::kDoppler;
    Channel scalar_channel = Channel::RadialVelocity;
    /// Range for label payloads.
    ValueRange label_range{0.0, 255.0};
};

/// Rasterizes attributed points into BEV. Per cell, the highest surviving
/// point wins (exact height ties resolved by payload and position so the
/// result does not depend on input order). Color payloads yield three maps
/// (r, g, b) with the Appearance channel; labels and scalars yield one.
/// Throws PreconditionError when a payload is not of the declared kind.
std::vector<BevMap> project_to_bev(std::span<const AttributedPoint3D> points,
                                   const GridSpec& grid, PayloadKind kind,
                                   const ProjectionOptions& options = {});

/// Radial component (along the ego-to-point direction of p_t in the BEV
/// plane) of the finite-difference velocity; positive when receding.
/// Throws PreconditionError for dt <= 0 or p_t on the vertical ego axis.
double radial_velocity(const Correspondence& c);

/// Per-cell radial velocity of the highest correspondence whose p_t falls in
/// the cell, normalized with the Doppler range. Correspondences without a
/// defined radial direction are skipped.
BevMap radial_velocity_map(std::span<const Correspondence> correspondences,
                           const GridSpec& grid, const ProjectionOptions& options = {});

}  // namespace radarbev
