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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "radarbev/core.hpp"
#include "radarbev/metrics.hpp"
#include "radarbev/recover.hpp"
#include "radarbev/scene_bev.hpp"
#include "radarbev/synth.hpp"

namespace radarbev::io {

namespace fs = std::filesystem;

/// Could not read or write a file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const fs::path& path, const std::string& contents);
std::string read_file(const fs::path& path);

/// Decimal text with 6 significant digits, the precision of every text codec.
std::string format_number(double v);

// Point clouds: CSV with header `x,y,rcs,doppler`, or JSON lines with the
// same keys. The format follows the extension (.csv / .jsonl).
std::string cloud_to_csv(const RadarPointCloud& cloud);
RadarPointCloud cloud_from_csv(const std::string& text);
std::string cloud_to_jsonl(const RadarPointCloud& cloud);
RadarPointCloud cloud_from_jsonl(const std::string& text);
void write_cloud(const fs::path& path, const RadarPointCloud& cloud);
RadarPointCloud read_cloud(const fs::path& path);

// Boxes: JSON array of {cx, cy, length, width, yaw, class, visibility}.
std::string boxes_to_json(const std::vector<BoundingBox>& boxes);
std::vector<BoundingBox> boxes_from_json(const std::string& text);
void write_boxes(const fs::path& path, const std::vector<BoundingBox>& boxes);
std::vector<BoundingBox> read_boxes(const fs::path& path);

// Maps: 8-bit grayscale PNG (image row i = grid row i) with a JSON sidecar
// `<stem>.json` holding the grid, channel and value range.
std::vector<std::uint8_t> encode_png(const std::vector<std::uint8_t>& levels, int size);
std::vector<std::uint8_t> decode_png(const std::vector<std::uint8_t>& bytes, int& size);
fs::path sidecar_path(const fs::path& png_path);
void write_map(const fs::path& png_path, const BevMap& map);
/// Values come back as level / 255.
BevMap read_map(const fs::path& png_path);

// Attributed points: CSV `x,y,z,payload...` where the payload is r,g,b for
// colors, one integer for labels, one number for scalars.
std::vector<AttributedPoint3D> attributed_points_from_csv(const std::string& text,
                                                          PayloadKind kind);
// Correspondences: CSV `x,y,z,x2,y2,z2,dt`.
std::vector<Correspondence> correspondences_from_csv(const std::string& text);

std::string scene_config_to_json(const SceneConfig& cfg);
SceneConfig scene_config_from_json(const std::string& text);

struct ManifestEntry {
    std::string frame_id;
    fs::path gt_cloud;
    std::optional<fs::path> syn_cloud;
    /// Density map PNG of the prediction; RCS and Doppler maps alongside.
    std::optional<fs::path> syn_density;
    std::optional<fs::path> syn_rcs;
    std::optional<fs::path> syn_doppler;
    std::optional<fs::path> boxes;
};

/// JSON {"frames": [{"frame_id", "gt", "syn" | "syn_maps": {density, rcs,
/// doppler}, "boxes"}]}; relative paths resolve against `base_dir`. Throws
/// ParseError on duplicate frame ids or missing fields.
std::vector<ManifestEntry> manifest_from_json(const std::string& text, const fs::path& base_dir);
std::string manifest_to_json(const std::vector<ManifestEntry>& entries);

std::string report_to_json(const MetricsReport& report, const EvalConfig& config);
/// One row per frame, one column per entire-area metric; undefined cells empty.
std::string report_to_csv(const MetricsReport& report);

std::string diagnostics_to_json(RecoveryMethod method, const DeconvParams& params,
                                const GaussianKernel& kernel, const RecoveryOutput& output,
                                double wall_seconds);

}  // namespace radarbev::io
