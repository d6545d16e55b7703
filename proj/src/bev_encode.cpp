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

#include "radarbev/bev_encode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radarbev {

std::optional<std::size_t> OccupancyMap::owner_of(CellIndex c) const {
    const auto o = owner[grid.flat(c)];
    if (o < 0) return std::nullopt;
    return static_cast<std::size_t>(o);
}

std::size_t OccupancyMap::count() const {
    return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), 1));
}

std::vector<CellIndex> OccupancyMap::cells() const {
    std::vector<CellIndex> out;
    for (std::size_t i = 0; i < occupied.size(); ++i) {
        if (occupied[i]) out.push_back(grid.unflat(i));
    }
    return out;
}

OccupancyMap rasterize(const RadarPointCloud& cloud, const GridSpec& grid) {
    grid.validate();
    OccupancyMap occ;
    occ.grid = grid;
    occ.occupied.assign(grid.cell_count(), 0);
    occ.owner.assign(grid.cell_count(), -1);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        const auto cell = world_to_cell(p.x, p.y, grid);
        if (!cell) continue;
        const auto f = grid.flat(*cell);
        if (!occ.occupied[f]) {
            occ.occupied[f] = 1;
            occ.owner[f] = static_cast<std::int64_t>(i);
        }
    }
    return occ;
}

BevMap density_map(const OccupancyMap& occ, const GaussianKernel& kernel) {
    BevMap map(occ.grid, Channel::Density, ranges::kDensity);
    std::vector<double> src(occ.occupied.begin(), occ.occupied.end());
    convolve(src, map.values, occ.grid.size, kernel);
    for (auto& v : map.values) v = std::clamp(v, 0.0, 1.0);
    return map;
}

namespace {

struct Site {
    double x;
    double y;
    std::size_t index;
};

// Uniform bucket grid over the map extent for exact nearest-site queries.
class SiteIndex {
public:
    SiteIndex(std::vector<Site> sites, const GridSpec& grid) : sites_(std::move(sites)) {
        // Roughly a few sites per bucket, never finer than one cell.
        const double area = 4.0 * grid.extent * grid.extent;
        const double target = std::sqrt(area * 4.0 / static_cast<double>(sites_.size()));
        buckets_ = std::clamp(static_cast<int>(2.0 * grid.extent / target), 1, grid.size);
        origin_ = -grid.extent;
        bucket_w_ = 2.0 * grid.extent / buckets_;
        cells_.assign(static_cast<std::size_t>(buckets_ * buckets_), {});
        for (std::size_t k = 0; k < sites_.size(); ++k) {
            const auto [br, bc] = bucket_of(sites_[k].x, sites_[k].y);
            cells_[static_cast<std::size_t>(br * buckets_ + bc)].push_back(k);
        }
    }

    std::size_t nearest(double qx, double qy) const {
        const auto [qr, qc] = bucket_of(qx, qy);
        double best_d2 = std::numeric_limits<double>::infinity();
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (int ring = 0; ring <= buckets_; ++ring) {
            for (int br = qr - ring; br <= qr + ring; ++br) {
                if (br < 0 || br >= buckets_) continue;
                const bool edge_row = (br == qr - ring || br == qr + ring);
                for (int bc = qc - ring; bc <= qc + ring; ++bc) {
                    if (bc < 0 || bc >= buckets_) continue;
                    if (!edge_row && bc != qc - ring && bc != qc + ring) continue;
                    for (auto k : cells_[static_cast<std::size_t>(br * buckets_ + bc)]) {
                        const auto& s = sites_[k];
                        const double dx = qx - s.x;
                        const double dy = qy - s.y;
                        const double d2 = dx * dx + dy * dy;
                        if (d2 < best_d2 || (d2 == best_d2 && s.index < best)) {
                            best_d2 = d2;
                            best = s.index;
                        }
                    }
                }
            }
            // Sites in ring + 1 lie at least ring * bucket_w_ away.
            const double bound = ring * bucket_w_;
            if (best != std::numeric_limits<std::size_t>::max() && bound * bound > best_d2) break;
        }
        return best;
    }

private:
    std::pair<int, int> bucket_of(double x, double y) const {
        const int r = std::clamp(static_cast<int>(std::floor((y - origin_) / bucket_w_)), 0,
                                 buckets_ - 1);
        const int c = std::clamp(static_cast<int>(std::floor((x - origin_) / bucket_w_)), 0,
                                 buckets_ - 1);
        return {r, c};
    }

    std::vector<Site> sites_;
    int buckets_ = 1;
    double origin_ = 0.0;
    double bucket_w_ = 1.0;
    std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

std::vector<std::size_t> nearest_detection_labels(const RadarPointCloud& cloud,
                                                  const GridSpec& grid) {
    grid.validate();
    std::vector<Site> sites;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        if (world_to_cell(p.x, p.y, grid)) sites.push_back({p.x, p.y, i});
    }
    if (sites.empty()) throw PreconditionError("no detections to tessellate");

    const SiteIndex index(std::move(sites), grid);
    std::vector<std::size_t> labels(grid.cell_count());
    for (std::size_t f = 0; f < labels.size(); ++f) {
        const auto center = cell_center(grid.unflat(f), grid);
        labels[f] = index.nearest(center.x, center.y);
    }
    return labels;
}

BevMap voronoi_attribute_map(const RadarPointCloud& cloud, const GridSpec& grid,
                             Attribute attribute) {
    const auto labels = nearest_detection_labels(cloud, grid);
    const bool rcs = attribute == Attribute::Rcs;
    BevMap map(grid, rcs ? Channel::Rcs : Channel::Doppler,
               rcs ? ranges::kRcs : ranges::kDoppler);
    for (std::size_t f = 0; f < labels.size(); ++f) {
        const auto& p = cloud.points[labels[f]];
        map.values[f] = normalize_value(rcs ? p.rcs : p.doppler, map.range);
    }
    return map;
}

std::vector<Attributes> sample_attributes(std::span<const CellIndex> cells,
                                          const BevMap& rcs_map,
                                          const BevMap& doppler_map) {
    if (!(rcs_map.grid == doppler_map.grid)) {
        throw PreconditionError("sample_attributes: RCS and Doppler maps differ in grid");
    }
    if (rcs_map.channel != Channel::Rcs || doppler_map.channel != Channel::Doppler) {
        throw PreconditionError("sample_attributes: expected an RCS map and a Doppler map");
    }
    std::vector<Attributes> out;
    out.reserve(cells.size());
    for (const auto& c : cells) {
        if (!rcs_map.grid.contains(c)) {
            throw PreconditionError("sample_attributes: cell (" + std::to_string(c.row) + ", " +
                                    std::to_string(c.col) + ") is outside the grid");
        }
        out.push_back({denormalize_value(rcs_map.at(c), rcs_map.range),
                       denormalize_value(doppler_map.at(c), doppler_map.range)});
    }
    return out;
}

BevMap quantized(const BevMap& map) {
    BevMap out = map;
    for (auto& v : out.values) v = dequantize_level(quantize_level(v));
    return out;
}

EncodedMaps encode(const RadarPointCloud& cloud, const GridSpec& grid,
                   const GaussianKernel& kernel) {
    EncodedMaps maps;
    maps.occupancy = rasterize(cloud, grid);
    maps.density = density_map(maps.occupancy, kernel);
    if (maps.occupancy.count() > 0) {
        const auto labels = nearest_detection_labels(cloud, grid);
        maps.rcs = BevMap(grid, Channel::Rcs, ranges::kRcs);
        maps.doppler = BevMap(grid, Channel::Doppler, ranges::kDoppler);
        for (std::size_t f = 0; f < labels.size(); ++f) {
            const auto& p = cloud.points[labels[f]];
            maps.rcs.values[f] = normalize_value(p.rcs, ranges::kRcs);
            maps.doppler.values[f] = normalize_value(p.doppler, ranges::kDoppler);
        }
    } else {
        maps.rcs.channel = Channel::Rcs;
        maps.rcs.range = ranges::kRcs;
        maps.rcs.grid = grid;
        maps.doppler.channel = Channel::Doppler;
        maps.doppler.range = ranges::kDoppler;
        maps.doppler.grid = grid;
    }
    return maps;
}

}  // namespace radarbev
