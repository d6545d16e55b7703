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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radarbev/core.hpp"

// Comparison metrics between a synthetic (generated) radar cloud and ground
// truth. Functions that are undefined on some inputs (empty clouds, empty
// denominators) return std::nullopt rather than a sentinel.

namespace radarbev {

struct DaThresholds {
    double loc = 1.0;      // m
    double rcs = 8.0;      // dBsm
    double doppler = 2.5;  // m/s

    void validate() const;
};

struct MmdConfig {
    int num_kernels = 5;
};

/// Mean of the two directed mean nearest-neighbor distances over (x, y).
std::optional<double> chamfer_loc(const RadarPointCloud& a, const RadarPointCloud& b);

/// Chamfer over (x, y, rcs, doppler), each normalized to [0, 1] with the fixed
/// sensor ranges (+-50 m, [-20, 66] dBsm, [-120, 120] m/s).
std::optional<double> chamfer_full(const RadarPointCloud& a, const RadarPointCloud& b);

/// Point-cloud IoU with precision over `syn` and recall over `gt`; a point
/// counts when the other cloud has a point strictly closer than delta.
std::optional<double> iou_at(const RadarPointCloud& syn, const RadarPointCloud& gt,
                             double delta = 1.0);

double density_similarity(std::size_t n, std::size_t m);

/// Visibility above 60% and class Car, Truck or Trailer.
bool is_foreground(const BoundingBox& box, double min_visibility = 0.6);

/// Fraction of foreground boxes holding a gt point that also hold a syn
/// point; nullopt when no foreground box holds a gt point.
std::optional<double> hit_rate(std::span<const BoundingBox> boxes, const RadarPointCloud& gt,
                               const RadarPointCloud& syn);

/// Size of a maximum-cardinality matching (Hopcroft-Karp). adjacency[u]
/// lists the right-side vertices (< n_right) joined to left vertex u.
std::size_t max_bipartite_matching(const std::vector<std::vector<std::size_t>>& adjacency,
                                   std::size_t n_right);

struct DaResult {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Edges where location, RCS and Doppler differences are all within their
/// thresholds (inclusive), from gt (left) to syn (right).
std::vector<std::vector<std::size_t>> da_edges(const RadarPointCloud& gt,
                                               const RadarPointCloud& syn,
                                               const DaThresholds& th);

DaResult da_match(const RadarPointCloud& gt, const RadarPointCloud& syn,
                  const DaThresholds& th = {});

using Sample = std::vector<double>;

/// Biased squared MMD with a sum of Gaussians at bandwidths
/// h_l = h_base * 2^(l - 3), h_base the mean squared distance over distinct
/// pairs of the pooled samples. Returns 0 when h_base is 0. Throws
/// PreconditionError on an empty set or inconsistent dimensions.
double mmd(std::span<const Sample> x, std::span<const Sample> y, const MmdConfig& cfg = {});

/// Per-point samples of one attribute family.
std::vector<Sample> location_samples(const RadarPointCloud& cloud);
std::vector<Sample> rcs_samples(const RadarPointCloud& cloud);
std::vector<Sample> doppler_samples(const RadarPointCloud& cloud);

struct BoxSlice {
    std::size_t box_index = 0;
    RadarPointCloud points;
};

/// Points inside each foreground box (boundary inclusive). A point inside
/// several boxes is assigned to all of them.
std::vector<BoxSlice> foreground_slice(const RadarPointCloud& cloud,
                                       std::span<const BoundingBox> boxes,
                                       double min_visibility = 0.6);

/// Box-frame coordinates; RCS and Doppler pass through.
RadarPointCloud canonicalize(const RadarPointCloud& points, const BoundingBox& box);

struct EvalConfig {
    DaThresholds da;
    double iou_delta = 1.0;
    MmdConfig mmd;
    double min_visibility = 0.6;
};

struct BoxEvaluation {
    std::size_t box_index = 0;
    ObjectClass cls = ObjectClass::Car;
    std::size_t gt_count = 0;
    std::size_t syn_count = 0;
    std::optional<double> cd_loc;
    std::optional<double> cd_full;
    double density_similarity = 1.0;
};

/// Ordered (name, value) pairs; nullopt marks an undefined entry.
using MetricRow = std::vector<std::pair<std::string, std::optional<double>>>;

struct ClassPool {
    RadarPointCloud gt;
    RadarPointCloud syn;
};

struct FrameEvaluation {
    std::string frame_id;
    /// cd_loc, cd_full, iou_1m, da_precision, da_recall, da_f1, mmd_loc,
    /// mmd_rcs, mmd_doppler, hit_rate.
    MetricRow entire;
    std::vector<BoxEvaluation> boxes;
    std::size_t occupied_boxes = 0;
    std::size_t hit_boxes = 0;
    /// Canonicalized foreground points per class, pooled across boxes.
    std::map<ObjectClass, ClassPool> class_points;
};

FrameEvaluation evaluate_frame(const std::string& frame_id, const RadarPointCloud& gt,
                               const RadarPointCloud& syn, std::span<const BoundingBox> boxes,
                               const EvalConfig& config = {});

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // population
    std::size_t count = 0;
    std::size_t undefined = 0;
};

/// Mean and population std over the defined entries; undefined ones are
/// only counted.
Stat summarize(std::span<const std::optional<double>> values);

struct ClassMmd {
    std::optional<double> loc;
    std::optional<double> rcs;
    std::optional<double> doppler;
    std::size_t gt_points = 0;
    std::size_t syn_points = 0;
};

struct MetricsReport {
    struct FrameRow {
        std::string frame_id;
        MetricRow values;
    };
    std::vector<FrameRow> per_frame;
    /// Entire-area metrics over frames.
    std::vector<std::pair<std::string, Stat>> aggregate;

    struct Foreground {
        Stat cd_loc;
        Stat cd_full;
        Stat density_similarity;
        /// Hits over gt-occupied boxes, pooled across frames.
        std::optional<double> hit_rate;
        std::size_t occupied_boxes = 0;
        std::size_t hit_boxes = 0;
        std::map<ObjectClass, ClassMmd> class_mmd;
        std::vector<std::pair<std::string, BoxEvaluation>> boxes;
    } foreground;
};

/// Folds frames into the report. Frames are processed in frame_id order, so
/// the result does not depend on the order they were evaluated in.
MetricsReport evaluate_dataset(std::vector<FrameEvaluation> frames,
                               const EvalConfig& config = {});

}  // namespace radarbev
