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
#include <optional>
#include <span>
#include <vector>

#include "radarbev/core.hpp"

namespace radarbev {

/// Binary raster of a point cloud. owner[c] is the lowest index of the
/// points that fell into cell c, or -1 when the cell is empty.
struct OccupancyMap {
    GridSpec grid;
    std::vector<std::uint8_t> occupied;
    std::vector<std::int64_t> owner;

    bool is_occupied(CellIndex c) const { return occupied[grid.flat(c)] != 0; }
    std::optional<std::size_t> owner_of(CellIndex c) const;
    std::size_t count() const;
    /// Occupied cells in (row, col) order.
    std::vector<CellIndex> cells() const;
};

OccupancyMap rasterize(const RadarPointCloud& cloud, const GridSpec& grid);

/// clip(K * occupancy, 0, 1) with zero padding at the borders.
BevMap density_map(const OccupancyMap& occ, const GaussianKernel& kernel);

enum class Attribute { Rcs, Doppler };

/// Nearest-detection (Voronoi) map of one attribute. Distances run from cell
/// centers to the continuous detection coordinates; exact ties go to the
/// lowest point index. Throws PreconditionError when no detection lies on
/// the grid.
BevMap voronoi_attribute_map(const RadarPointCloud& cloud, const GridSpec& grid,
                             Attribute attribute);

/// Per-cell index of the nearest in-grid detection (same rule as above).
std::vector<std::size_t> nearest_detection_labels(const RadarPointCloud& cloud,
                                                  const GridSpec& grid);

struct Attributes {
    double rcs = 0.0;
    double doppler = 0.0;
};

/// Denormalized RCS and Doppler at each cell. Throws PreconditionError on a
/// cell outside the grid or on mismatched maps.
std::vector<Attributes> sample_attributes(std::span<const CellIndex> cells,
                                          const BevMap& rcs_map,
                                          const BevMap& doppler_map);

/// Snaps every value to its nearest 8-bit level.
BevMap quantized(const BevMap& map);

struct EncodedMaps {
    OccupancyMap occupancy;
    BevMap density;
    BevMap rcs;
    BevMap doppler;
};

/// Full point-cloud to map conversion. Attribute maps are left empty
/// (values.size() == 0) when no detection lies on the grid.
EncodedMaps encode(const RadarPointCloud& cloud, const GridSpec& grid,
                   const GaussianKernel& kernel);

}  // namespace radarbev
