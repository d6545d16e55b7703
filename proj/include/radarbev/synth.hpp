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

#include <cstdint>
#include <vector>

#include "radarbev/core.hpp"

namespace radarbev {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// How objects of one class look and move.
struct ClassProfile {
    ObjectClass cls = ObjectClass::Car;
    double weight = 1.0;  // relative sampling frequency
    Interval length{4.0, 5.0};
    Interval width{1.7, 2.0};
    double rcs_mean = 10.0;
    double rcs_spread = 4.0;
    Interval speed{0.0, 15.0};
};

struct SceneConfig {
    std::uint64_t seed = 0;
    int n_objects = 10;
    int n_clutter = 20;
    /// Minimum Euclidean distance, in cells, between the cells of any two points.
    double min_separation = 3.0;
    GridSpec grid;
    /// Points sampled on each object's ego-facing outline, inclusive range.
    int points_per_object_min = 3;
    int points_per_object_max = 8;
    std::vector<ClassProfile> classes = default_classes();
    double clutter_rcs_mean = 0.0;
    double clutter_rcs_spread = 6.0;
    /// Objects keep at least this distance (m) from the ego origin.
    double ego_clearance = 5.0;
    /// Boxes and points stay within +-(extent - roi_margin).
    double roi_margin = 1.0;
    /// Box visibility is drawn uniformly from this interval.
    Interval visibility{0.4, 1.0};
    /// Attempts per box or point before giving up.
    int retry_budget = 2000;

    static std::vector<ClassProfile> default_classes();
    void validate() const;
};

struct Scene {
    RadarPointCloud cloud;
    std::vector<BoundingBox> boxes;
    /// Planar velocity (m/s) of each box.
    std::vector<Vec2> velocities;
    /// Box index that produced each point, or -1 for clutter.
    std::vector<int> point_object;
};

/// Deterministic per seed. Throws PreconditionError when the separation or
/// placement constraints cannot be met within the retry budget.
Scene generate_scene(const SceneConfig& cfg);

/// Same objects as generate_scene(cfg), with clutter topping the cloud up to
/// exactly `total_points`. Throws PreconditionError when the objects alone
/// already exceed it.
Scene generate_scene_with_points(SceneConfig cfg, int total_points);

struct PerturbConfig {
    std::uint64_t seed = 0;
    double jitter_loc = 0.0;      // m, per-axis std
    double jitter_rcs = 0.0;      // dBsm std
    double jitter_doppler = 0.0;  // m/s std
    double drop_rate = 0.0;
    /// Per surviving point, probability of one spurious point anywhere in
    /// the region of interest.
    double spawn_rate = 0.0;
    double extent = 50.0;
};

/// Jitters, drops and spawns points. Every point consumes the same random
/// draws whatever the settings, so runs that share a seed differ only in the
/// magnitudes applied.
RadarPointCloud perturb_scene(const RadarPointCloud& cloud, const PerturbConfig& cfg);

}  // namespace radarbev
