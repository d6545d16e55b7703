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

#include "radarbev/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_set>

#include "radarbev/rng.hpp"
#include "radarbev/scene_bev.hpp"

namespace radarbev {

std::vector<ClassProfile> SceneConfig::default_classes() {
    return {
        {ObjectClass::Car, 5.0, {3.8, 5.0}, {1.7, 2.0}, 12.0, 4.0, {0.0, 15.0}},
        {ObjectClass::Truck, 2.0, {6.0, 10.0}, {2.3, 2.6}, 22.0, 5.0, {0.0, 12.0}},
        {ObjectClass::Trailer, 1.0, {7.0, 12.0}, {2.4, 2.6}, 18.0, 5.0, {0.0, 12.0}},
        {ObjectClass::Other, 1.0, {0.6, 1.0}, {0.6, 1.0}, -2.0, 3.0, {0.0, 2.0}},
    };
}

void SceneConfig::validate() const {
    grid.validate();
    if (n_objects < 0 || n_clutter < 0) throw PreconditionError("scene: negative counts");
    if (!(min_separation >= 1.0)) throw PreconditionError("scene: min_separation must be >= 1");
    if (points_per_object_min < 0 || points_per_object_max < points_per_object_min) {
        throw PreconditionError("scene: bad points-per-object range");
    }
    if (n_objects > 0 && classes.empty()) throw PreconditionError("scene: no class profiles");
    for (const auto& c : classes) {
        if (!(c.weight > 0.0) || !(c.length.lo > 0.0) || c.length.hi < c.length.lo ||
            !(c.width.lo > 0.0) || c.width.hi < c.width.lo || c.speed.lo < 0.0 ||
            c.speed.hi < c.speed.lo || c.rcs_spread < 0.0) {
            throw PreconditionError("scene: invalid class profile");
        }
        if (c.rcs_mean < ranges::kRcs.min || c.rcs_mean > ranges::kRcs.max ||
            c.speed.hi > ranges::kDoppler.max) {
            throw PreconditionError("scene: class attributes outside the sensor ranges");
        }
    }
    if (!(visibility.lo >= 0.0 && visibility.hi <= 1.0 && visibility.lo <= visibility.hi)) {
        throw PreconditionError("scene: visibility interval must lie in [0, 1]");
    }
    if (!(roi_margin >= 0.0 && roi_margin < grid.extent)) {
        throw PreconditionError("scene: roi_margin must lie in [0, extent)");
    }
    if (retry_budget < 1) throw PreconditionError("scene: retry_budget must be positive");
}

namespace {

// Occupied cells, for the pairwise cell-distance constraint.
class SeparationGuard {
public:
    SeparationGuard(const GridSpec& grid, double min_sep)
        : grid_(grid), reach_(static_cast<int>(std::ceil(min_sep))), min_sep2_(min_sep * min_sep) {}

    bool admits(CellIndex c) const {
        for (int dr = -reach_; dr <= reach_; ++dr) {
            for (int dc = -reach_; dc <= reach_; ++dc) {
                if (dr * dr + dc * dc >= min_sep2_) continue;
                const CellIndex nb{c.row + dr, c.col + dc};
                if (grid_.contains(nb) && taken_.count(grid_.flat(nb))) return false;
            }
        }
        return true;
    }
    void take(CellIndex c) { taken_.insert(grid_.flat(c)); }

private:
    GridSpec grid_;
    int reach_;
    double min_sep2_;
    std::unordered_set<std::size_t> taken_;
};

std::array<Vec2, 4> corners(const BoundingBox& b) {
    const double c = std::cos(b.yaw);
    const double s = std::sin(b.yaw);
    const double hl = 0.5 * b.length;
    const double hw = 0.5 * b.width;
    const std::array<Vec2, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
    std::array<Vec2, 4> out;
    for (std::size_t k = 0; k < 4; ++k) {
        out[k] = {b.cx + c * local[k].x - s * local[k].y, b.cy + s * local[k].x + c * local[k].y};
    }
    return out;
}

struct Segment {
    Vec2 a;
    Vec2 b;
    double length;
};

// Box edges whose outward normal points toward the ego origin.
std::vector<Segment> ego_facing_edges(const BoundingBox& box) {
    const auto pts = corners(box);
    std::vector<Segment> out;
    for (std::size_t k = 0; k < 4; ++k) {
        const Vec2 a = pts[k];
        const Vec2 b = pts[(k + 1) % 4];
        const Vec2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        const Vec2 normal{mid.x - box.cx, mid.y - box.cy};
        if (normal.x * (0.0 - mid.x) + normal.y * (0.0 - mid.y) > 0.0) {
            out.push_back({a, b, std::hypot(b.x - a.x, b.y - a.y)});
        }
    }
    return out;
}

double half_diagonal(const BoundingBox& b) { return 0.5 * std::hypot(b.length, b.width); }

double clamp_rcs(double v) { return std::clamp(v, ranges::kRcs.min, ranges::kRcs.max); }

}  // namespace

Scene generate_scene(const SceneConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    Scene scene;
    scene.cloud.frame_id = "seed_" + std::to_string(cfg.seed);
    const double roi = cfg.grid.extent - cfg.roi_margin;

    const double total_weight =
        std::accumulate(cfg.classes.begin(), cfg.classes.end(), 0.0,
                        [](double acc, const ClassProfile& c) { return acc + c.weight; });
    auto pick_class = [&]() -> const ClassProfile& {
        double u = rng.uniform() * total_weight;
        for (const auto& c : cfg.classes) {
            if (u < c.weight) return c;
            u -= c.weight;
        }
        return cfg.classes.back();
    };

    std::vector<const ClassProfile*> profiles;
    for (int k = 0; k < cfg.n_objects; ++k) {
        const auto& profile = pick_class();
        BoundingBox box;
        box.cls = profile.cls;
        box.length = rng.uniform(profile.length.lo, profile.length.hi);
        box.width = rng.uniform(profile.width.lo, profile.width.hi);
        box.yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
        box.visibility = rng.uniform(cfg.visibility.lo, cfg.visibility.hi);
        const double hd = half_diagonal(box);
        bool placed = false;
        for (int attempt = 0; attempt < cfg.retry_budget && !placed; ++attempt) {
            box.cx = rng.uniform(-roi + hd, roi - hd);
            box.cy = rng.uniform(-roi + hd, roi - hd);
            if (std::hypot(box.cx, box.cy) < cfg.ego_clearance + hd) continue;
            placed = std::none_of(scene.boxes.begin(), scene.boxes.end(), [&](const auto& o) {
                return std::hypot(o.cx - box.cx, o.cy - box.cy) < hd + half_diagonal(o) + 0.5;
            });
        }
        if (!placed) {
            throw PreconditionError("scene: cannot place object " + std::to_string(k) +
                                    " within the retry budget");
        }
        const double speed = rng.uniform(profile.speed.lo, profile.speed.hi);
        scene.boxes.push_back(box);
        scene.velocities.push_back({speed * std::cos(box.yaw), speed * std::sin(box.yaw)});
        profiles.push_back(&profile);
    }

    SeparationGuard guard(cfg.grid, cfg.min_separation);
    auto try_add = [&](double x, double y) {
        if (std::abs(x) > roi || std::abs(y) > roi) return false;
        const auto cell = world_to_cell(x, y, cfg.grid);
        if (!cell || !guard.admits(*cell)) return false;
        guard.take(*cell);
        return true;
    };

    constexpr double kDt = 0.1;
    for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
        const auto& box = scene.boxes[b];
        const auto& profile = *profiles[b];
        const auto edges = ego_facing_edges(box);
        const double outline = std::accumulate(
            edges.begin(), edges.end(), 0.0,
            [](double acc, const Segment& s) { return acc + s.length; });
        const int drawn = cfg.points_per_object_min +
                          static_cast<int>(rng.below(static_cast<std::uint64_t>(
                              cfg.points_per_object_max - cfg.points_per_object_min + 1)));
        // A short visible outline cannot hold many separated points.
        const int capacity =
            1 + static_cast<int>(outline / (cfg.min_separation * cfg.grid.resolution() * 2.0));
        const int count = std::min(drawn, capacity);
        for (int k = 0; k < count; ++k) {
            bool added = false;
            for (int attempt = 0; attempt < cfg.retry_budget && !added; ++attempt) {
                double u = rng.uniform() * outline;
                Vec2 p = edges.back().b;
                for (const auto& e : edges) {
                    if (u <= e.length) {
                        const double t = u / e.length;
                        p = {e.a.x + t * (e.b.x - e.a.x), e.a.y + t * (e.b.y - e.a.y)};
                        break;
                    }
                    u -= e.length;
                }
                if (!try_add(p.x, p.y)) continue;
                added = true;
                const auto& v = scene.velocities[b];
                const Correspondence motion{{p.x, p.y, 0.0, 0.0},
                                            {p.x + v.x * kDt, p.y + v.y * kDt, 0.0, 0.0},
                                            kDt};
                const double rcs = clamp_rcs(rng.normal(profile.rcs_mean, profile.rcs_spread));
                scene.cloud.points.push_back({p.x, p.y, rcs, radial_velocity(motion)});
                scene.point_object.push_back(static_cast<int>(b));
            }
            if (!added) {
                throw PreconditionError(
                    "scene: cannot satisfy min_separation within the retry budget");
            }
        }
    }

    for (int k = 0; k < cfg.n_clutter; ++k) {
        bool added = false;
        for (int attempt = 0; attempt < cfg.retry_budget && !added; ++attempt) {
            const double x = rng.uniform(-roi, roi);
            const double y = rng.uniform(-roi, roi);
            if (!try_add(x, y)) continue;
            added = true;
            const double rcs = clamp_rcs(rng.normal(cfg.clutter_rcs_mean, cfg.clutter_rcs_spread));
            scene.cloud.points.push_back({x, y, rcs, 0.0});
            scene.point_object.push_back(-1);
        }
        if (!added) {
            throw PreconditionError("scene: cannot satisfy min_separation within the retry budget");
        }
    }
    return scene;
}

Scene generate_scene_with_points(SceneConfig cfg, int total_points) {
    // Clutter is drawn after every object, so the object part is unchanged
    // by the clutter count.
    cfg.n_clutter = 0;
    const auto objects_only = generate_scene(cfg);
    const int object_points = static_cast<int>(objects_only.cloud.size());
    if (object_points > total_points) {
        throw PreconditionError("scene: objects alone produce " + std::to_string(object_points) +
                                " points, more than " + std::to_string(total_points));
    }
    cfg.n_clutter = total_points - object_points;
    return generate_scene(cfg);
}

RadarPointCloud perturb_scene(const RadarPointCloud& cloud, const PerturbConfig& cfg) {
    if (cfg.jitter_loc < 0.0 || cfg.jitter_rcs < 0.0 || cfg.jitter_doppler < 0.0 ||
        cfg.drop_rate < 0.0 || cfg.drop_rate > 1.0 || cfg.spawn_rate < 0.0 ||
        cfg.spawn_rate > 1.0) {
        throw PreconditionError("perturb: magnitudes must be non-negative and rates in [0, 1]");
    }
    Rng rng(cfg.seed);
    RadarPointCloud out;
    out.frame_id = cloud.frame_id;
    std::vector<RadarPoint> spawned;
    for (const auto& p : cloud.points) {
        const double u_drop = rng.uniform();
        const double nx = rng.normal();
        const double ny = rng.normal();
        const double nr = rng.normal();
        const double nd = rng.normal();
        const double u_spawn = rng.uniform();
        const RadarPoint extra{rng.uniform(-cfg.extent, cfg.extent),
                               rng.uniform(-cfg.extent, cfg.extent),
                               rng.uniform(ranges::kRcs.min, ranges::kRcs.max),
                               rng.normal(0.0, 5.0)};
        if (u_drop < cfg.drop_rate) continue;
        out.points.push_back({p.x + cfg.jitter_loc * nx, p.y + cfg.jitter_loc * ny,
                              p.rcs + cfg.jitter_rcs * nr, p.doppler + cfg.jitter_doppler * nd});
        if (u_spawn < cfg.spawn_rate) spawned.push_back(extra);
    }
    out.points.insert(out.points.end(), spawned.begin(), spawned.end());
    return out;
}

}  // namespace radarbev
