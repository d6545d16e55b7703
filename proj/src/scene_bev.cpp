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

#include "radarbev/scene_bev.hpp"

#include <cmath>
#include <tuple>

namespace radarbev {

namespace {

// Strict weak order deciding which point owns a cell: higher z first, then
// a total order on everything else.
bool outranks(const AttributedPoint3D& a, const AttributedPoint3D& b) {
    if (a.z != b.z) return a.z > b.z;
    if (a.payload != b.payload) return a.payload > b.payload;
    return std::tie(a.x, a.y) > std::tie(b.x, b.y);
}

}  // namespace

std::vector<BevMap> project_to_bev(std::span<const AttributedPoint3D> points,
                                   const GridSpec& grid, PayloadKind kind,
                                   const ProjectionOptions& options) {
    grid.validate();
    for (const auto& p : points) {
        if (p.payload.index() != static_cast<std::size_t>(kind)) {
            throw PreconditionError("project_to_bev: payload does not match the declared kind");
        }
    }

    std::vector<const AttributedPoint3D*> winner(grid.cell_count(), nullptr);
    for (const auto& p : points) {
        if (!std::isfinite(p.z) || p.z > options.max_height) continue;
        const auto cell = world_to_cell(p.x, p.y, grid);
        if (!cell) continue;
        auto& slot = winner[grid.flat(*cell)];
        if (!slot || outranks(p, *slot)) slot = &p;
    }

    std::vector<BevMap> maps;
    if (kind == PayloadKind::Color) {
        for (int k = 0; k < 3; ++k) {
            maps.emplace_back(grid, Channel::Appearance, ranges::kDensity, options.background);
        }
    } else if (kind == PayloadKind::Label) {
        maps.emplace_back(grid, Channel::Semantic, options.label_range, options.background);
    } else {
        maps.emplace_back(grid, options.scalar_channel, options.scalar_range,
                          options.background);
    }

    for (std::size_t f = 0; f < winner.size(); ++f) {
        const auto* p = winner[f];
        if (!p) continue;
        if (const auto* c = std::get_if<Color>(&p->payload)) {
            maps[0].values[f] = normalize_value(c->r, ranges::kDensity);
            maps[1].values[f] = normalize_value(c->g, ranges::kDensity);
            maps[2].values[f] = normalize_value(c->b, ranges::kDensity);
        } else if (const auto* l = std::get_if<Label>(&p->payload)) {
            maps[0].values[f] = normalize_value(l->id, options.label_range);
        } else {
            maps[0].values[f] = normalize_value(std::get<double>(p->payload),
                                                options.scalar_range);
        }
    }
    return maps;
}

double radial_velocity(const Correspondence& c) {
    if (!(c.dt > 0.0)) throw PreconditionError("radial_velocity: dt must be positive");
    const double norm = std::hypot(c.p_t.x, c.p_t.y);
    if (!(norm > 1e-6)) throw PreconditionError("undefined radial direction");
    const double ux = c.p_t.x / norm;
    const double uy = c.p_t.y / norm;
    const double along = (c.p_t_next.x - c.p_t.x) * ux + (c.p_t_next.y - c.p_t.y) * uy;
    return along / c.dt;
}

BevMap radial_velocity_map(std::span<const Correspondence> correspondences,
                           const GridSpec& grid, const ProjectionOptions& options) {
    std::vector<AttributedPoint3D> points;
    points.reserve(correspondences.size());
    for (const auto& c : correspondences) {
        if (!(std::hypot(c.p_t.x, c.p_t.y) > 1e-6) || !(c.dt > 0.0)) continue;
        points.push_back({c.p_t.x, c.p_t.y, c.p_t.z, radial_velocity(c)});
    }
    ProjectionOptions opts = options;
    opts.scalar_range = ranges::kDoppler;
    opts.scalar_channel = Channel::RadialVelocity;
    auto maps = project_to_bev(points, grid, PayloadKind::Scalar, opts);
    return std::move(maps.front());
}

}  // namespace radarbev
