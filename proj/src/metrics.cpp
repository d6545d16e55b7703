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

#include "radarbev/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace radarbev {

void DaThresholds::validate() const {
    if (!(loc > 0.0) || !(rcs > 0.0) || !(doppler > 0.0)) {
        throw PreconditionError("DA thresholds must be positive");
    }
}

namespace {

using Vec4 = std::array<double, 4>;

template <std::size_t D>
double directed_chamfer(const std::vector<std::array<double, D>>& from,
                        const std::vector<std::array<double, D>>& to) {
    double total = 0.0;
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < D; ++k) d2 += (p[k] - q[k]) * (p[k] - q[k]);
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(from.size());
}

std::vector<std::array<double, 2>> xy(const RadarPointCloud& c) {
    std::vector<std::array<double, 2>> out;
    out.reserve(c.size());
    for (const auto& p : c.points) out.push_back({p.x, p.y});
    return out;
}

std::vector<Vec4> normalized4(const RadarPointCloud& c) {
    std::vector<Vec4> out;
    out.reserve(c.size());
    for (const auto& p : c.points) {
        out.push_back({normalize_value(p.x, ranges::kLocation),
                       normalize_value(p.y, ranges::kLocation),
                       normalize_value(p.rcs, ranges::kRcs),
                       normalize_value(p.doppler, ranges::kDoppler)});
    }
    return out;
}

// Fraction of `from` points with a `to` point strictly within delta.
double matched_fraction(const RadarPointCloud& from, const RadarPointCloud& to, double delta) {
    std::size_t hits = 0;
    for (const auto& p : from.points) {
        for (const auto& q : to.points) {
            if (std::hypot(p.x - q.x, p.y - q.y) < delta) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(from.size());
}

}  // namespace

std::optional<double> chamfer_loc(const RadarPointCloud& a, const RadarPointCloud& b) {
    if (a.empty() || b.empty()) return std::nullopt;
    const auto pa = xy(a);
    const auto pb = xy(b);
    return 0.5 * (directed_chamfer(pa, pb) + directed_chamfer(pb, pa));
}

std::optional<double> chamfer_full(const RadarPointCloud& a, const RadarPointCloud& b) {
    if (a.empty() || b.empty()) return std::nullopt;
    const auto pa = normalized4(a);
    const auto pb = normalized4(b);
    return 0.5 * (directed_chamfer(pa, pb) + directed_chamfer(pb, pa));
}

std::optional<double> iou_at(const RadarPointCloud& syn, const RadarPointCloud& gt,
                             double delta) {
    if (syn.empty() || gt.empty()) return std::nullopt;
    const double precision = matched_fraction(syn, gt, delta);
    const double recall = matched_fraction(gt, syn, delta);
    const double denom = precision + recall - precision * recall;
    if (denom <= 0.0) return 0.0;
    return precision * recall / denom;
}

double density_similarity(std::size_t n, std::size_t m) {
    if (n == 0 && m == 0) return 1.0;
    return static_cast<double>(std::min(n, m)) / static_cast<double>(std::max(n, m));
}

bool is_foreground(const BoundingBox& box, double min_visibility) {
    return box.visibility > min_visibility &&
           (box.cls == ObjectClass::Car || box.cls == ObjectClass::Truck ||
            box.cls == ObjectClass::Trailer);
}

std::optional<double> hit_rate(std::span<const BoundingBox> boxes, const RadarPointCloud& gt,
                               const RadarPointCloud& syn) {
    std::size_t occupied = 0;
    std::size_t hits = 0;
    auto holds_any = [](const BoundingBox& b, const RadarPointCloud& c) {
        return std::any_of(c.points.begin(), c.points.end(),
                           [&](const RadarPoint& p) { return b.contains(p.x, p.y); });
    };
    for (const auto& box : boxes) {
        if (!is_foreground(box) || !holds_any(box, gt)) continue;
        ++occupied;
        if (holds_any(box, syn)) ++hits;
    }
    if (occupied == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(occupied);
}

std::size_t max_bipartite_matching(const std::vector<std::vector<std::size_t>>& adjacency,
                                   std::size_t n_right) {
    constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    const std::size_t n_left = adjacency.size();
    std::vector<std::size_t> match_left(n_left, kFree);
    std::vector<std::size_t> match_right(n_right, kFree);
    std::vector<std::size_t> dist(n_left);

    auto bfs = [&]() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < n_left; ++u) {
            if (match_left[u] == kFree) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = kInf;
            }
        }
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : adjacency[u]) {
                const auto w = match_right[v];
                if (w == kFree) {
                    found = true;
                } else if (dist[w] == kInf) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    // Iterative DFS along the BFS layering.
    std::vector<std::size_t> next_edge(n_left);
    auto dfs = [&](std::size_t root) {
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            const auto u = stack.back();
            if (next_edge[u] == adjacency[u].size()) {
                dist[u] = kInf;
                stack.pop_back();
                continue;
            }
            const auto v = adjacency[u][next_edge[u]];
            const auto w = match_right[v];
            if (w == kFree) {
                // Augment along the stack.
                for (std::size_t k = stack.size(); k-- > 0;) {
                    const auto left = stack[k];
                    const auto right = adjacency[left][next_edge[left]];
                    match_right[right] = left;
                    match_left[left] = right;
                }
                return true;
            }
            // A dead-ended child has dist = kInf, so its parent moves past it.
            if (dist[w] == dist[u] + 1) {
                stack.push_back(w);
            } else {
                ++next_edge[u];
            }
        }
        return false;
    };

    std::size_t matching = 0;
    while (bfs()) {
        std::fill(next_edge.begin(), next_edge.end(), 0);
        for (std::size_t u = 0; u < n_left; ++u) {
            if (match_left[u] == kFree && dfs(u)) ++matching;
        }
    }
    return matching;
}

std::vector<std::vector<std::size_t>> da_edges(const RadarPointCloud& gt,
                                               const RadarPointCloud& syn,
                                               const DaThresholds& th) {
    std::vector<std::vector<std::size_t>> adj(gt.size());
    const double loc2 = th.loc * th.loc;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const auto& g = gt.points[i];
        for (std::size_t j = 0; j < syn.size(); ++j) {
            const auto& s = syn.points[j];
            const double dx = g.x - s.x;
            const double dy = g.y - s.y;
            if (dx * dx + dy * dy <= loc2 && std::abs(g.rcs - s.rcs) <= th.rcs &&
                std::abs(g.doppler - s.doppler) <= th.doppler) {
                adj[i].push_back(j);
            }
        }
    }
    return adj;
}

DaResult da_match(const RadarPointCloud& gt, const RadarPointCloud& syn,
                  const DaThresholds& th) {
    th.validate();
    DaResult r;
    r.tp = max_bipartite_matching(da_edges(gt, syn, th), syn.size());
    r.fn = gt.size() - r.tp;
    r.fp = syn.size() - r.tp;
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    r.precision = ratio(r.tp, r.tp + r.fp);
    r.recall = ratio(r.tp, r.tp + r.fn);
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

namespace {

double squared_distance(const Sample& a, const Sample& b) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
    return d2;
}

}  // namespace

double mmd(std::span<const Sample> x, std::span<const Sample> y, const MmdConfig& cfg) {
    if (x.empty() || y.empty()) throw PreconditionError("mmd: both sample sets must be non-empty");
    if (cfg.num_kernels < 1) throw PreconditionError("mmd: need at least one kernel");
    const std::size_t dim = x.front().size();
    for (auto set : {x, y}) {
        for (const auto& s : set) {
            if (s.size() != dim) throw PreconditionError("mmd: inconsistent sample dimensions");
        }
    }

    // Mean squared distance over distinct pairs of the pooled set.
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) pair_sum += squared_distance(x[i], x[j]);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t j = i + 1; j < y.size(); ++j) pair_sum += squared_distance(y[i], y[j]);
    }
    for (const auto& a : x) {
        for (const auto& b : y) pair_sum += squared_distance(a, b);
    }
    const double n = static_cast<double>(x.size() + y.size());
    const double h_base = pair_sum / (0.5 * n * (n - 1.0));
    if (!(h_base > 0.0)) return 0.0;

    std::vector<double> inv_h(static_cast<std::size_t>(cfg.num_kernels));
    for (int l = 1; l <= cfg.num_kernels; ++l) {
        inv_h[static_cast<std::size_t>(l - 1)] = 1.0 / (h_base * std::exp2(l - 3));
    }
    auto kernel = [&](const Sample& a, const Sample& b) {
        const double d2 = squared_distance(a, b);
        double k = 0.0;
        for (double ih : inv_h) k += std::exp(-d2 * ih);
        return k;
    };
    auto mean_kernel = [&](std::span<const Sample> a, std::span<const Sample> b) {
        double s = 0.0;
        for (const auto& p : a) {
            for (const auto& q : b) s += kernel(p, q);
        }
        return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    };
    return mean_kernel(x, x) + mean_kernel(y, y) - 2.0 * mean_kernel(x, y);
}

std::vector<Sample> location_samples(const RadarPointCloud& cloud) {
    std::vector<Sample> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud.points) out.push_back({p.x, p.y});
    return out;
}

std::vector<Sample> rcs_samples(const RadarPointCloud& cloud) {
    std::vector<Sample> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud.points) out.push_back({p.rcs});
    return out;
}

std::vector<Sample> doppler_samples(const RadarPointCloud& cloud) {
    std::vector<Sample> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud.points) out.push_back({p.doppler});
    return out;
}

std::vector<BoxSlice> foreground_slice(const RadarPointCloud& cloud,
                                       std::span<const BoundingBox> boxes,
                                       double min_visibility) {
    std::vector<BoxSlice> out;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (!is_foreground(boxes[b], min_visibility)) continue;
        BoxSlice slice;
        slice.box_index = b;
        slice.points.frame_id = cloud.frame_id;
        for (const auto& p : cloud.points) {
            if (boxes[b].contains(p.x, p.y)) slice.points.points.push_back(p);
        }
        out.push_back(std::move(slice));
    }
    return out;
}

RadarPointCloud canonicalize(const RadarPointCloud& points, const BoundingBox& box) {
    RadarPointCloud out = points;
    for (auto& p : out.points) {
        const auto local = box.to_box_frame(p.x, p.y);
        p.x = local.x;
        p.y = local.y;
    }
    return out;
}

namespace {

std::optional<double> mmd_or_undefined(const std::vector<Sample>& a,
                                       const std::vector<Sample>& b, const MmdConfig& cfg) {
    if (a.empty() || b.empty()) return std::nullopt;
    return mmd(a, b, cfg);
}

void append(RadarPointCloud& dst, const RadarPointCloud& src) {
    dst.points.insert(dst.points.end(), src.points.begin(), src.points.end());
}

}  // namespace

FrameEvaluation evaluate_frame(const std::string& frame_id, const RadarPointCloud& gt,
                               const RadarPointCloud& syn, std::span<const BoundingBox> boxes,
                               const EvalConfig& config) {
    config.da.validate();
    FrameEvaluation ev;
    ev.frame_id = frame_id;

    const bool both = !gt.empty() && !syn.empty();
    const auto da = da_match(gt, syn, config.da);
    auto da_value = [&](double v) { return both ? std::optional<double>(v) : std::nullopt; };

    ev.entire = {
        {"cd_loc", chamfer_loc(syn, gt)},
        {"cd_full", chamfer_full(syn, gt)},
        {"iou_1m", iou_at(syn, gt, config.iou_delta)},
        {"da_precision", da_value(da.precision)},
        {"da_recall", da_value(da.recall)},
        {"da_f1", da_value(da.f1)},
        {"mmd_loc", mmd_or_undefined(location_samples(syn), location_samples(gt), config.mmd)},
        {"mmd_rcs", mmd_or_undefined(rcs_samples(syn), rcs_samples(gt), config.mmd)},
        {"mmd_doppler",
         mmd_or_undefined(doppler_samples(syn), doppler_samples(gt), config.mmd)},
    };

    const auto gt_slices = foreground_slice(gt, boxes, config.min_visibility);
    const auto syn_slices = foreground_slice(syn, boxes, config.min_visibility);
    for (std::size_t k = 0; k < gt_slices.size(); ++k) {
        const auto& box = boxes[gt_slices[k].box_index];
        const auto& g = gt_slices[k].points;
        const auto& s = syn_slices[k].points;
        BoxEvaluation be;
        be.box_index = gt_slices[k].box_index;
        be.cls = box.cls;
        be.gt_count = g.size();
        be.syn_count = s.size();
        be.cd_loc = chamfer_loc(s, g);
        be.cd_full = chamfer_full(s, g);
        be.density_similarity = density_similarity(s.size(), g.size());
        ev.boxes.push_back(be);

        if (!g.empty()) {
            ++ev.occupied_boxes;
            if (!s.empty()) ++ev.hit_boxes;
        }
        auto& pool = ev.class_points[box.cls];
        append(pool.gt, canonicalize(g, box));
        append(pool.syn, canonicalize(s, box));
    }
    ev.entire.emplace_back(
        "hit_rate", ev.occupied_boxes == 0
                        ? std::nullopt
                        : std::optional<double>(static_cast<double>(ev.hit_boxes) /
                                                static_cast<double>(ev.occupied_boxes)));
    return ev;
}

Stat summarize(std::span<const std::optional<double>> values) {
    Stat s;
    double sum = 0.0;
    for (const auto& v : values) {
        if (v && std::isfinite(*v)) {
            sum += *v;
            ++s.count;
        } else {
            ++s.undefined;
        }
    }
    if (s.count == 0) return s;
    s.mean = sum / static_cast<double>(s.count);
    double var = 0.0;
    for (const auto& v : values) {
        if (v && std::isfinite(*v)) var += (*v - s.mean) * (*v - s.mean);
    }
    s.std = std::sqrt(var / static_cast<double>(s.count));
    return s;
}

MetricsReport evaluate_dataset(std::vector<FrameEvaluation> frames, const EvalConfig& config) {
    std::stable_sort(frames.begin(), frames.end(),
                     [](const auto& a, const auto& b) { return a.frame_id < b.frame_id; });
    MetricsReport report;

    std::vector<std::string> names;
    if (!frames.empty()) {
        for (const auto& [name, value] : frames.front().entire) names.push_back(name);
    }
    for (const auto& f : frames) report.per_frame.push_back({f.frame_id, f.entire});
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k] == "hit_rate") continue;  // pooled in the foreground block
        std::vector<std::optional<double>> column;
        for (const auto& f : frames) column.push_back(f.entire[k].second);
        report.aggregate.emplace_back(names[k], summarize(column));
    }

    auto& fg = report.foreground;
    std::vector<std::optional<double>> cd_loc;
    std::vector<std::optional<double>> cd_full;
    std::vector<std::optional<double>> ds;
    std::map<ObjectClass, ClassPool> pools;
    for (const auto& f : frames) {
        for (const auto& b : f.boxes) {
            cd_loc.push_back(b.cd_loc);
            cd_full.push_back(b.cd_full);
            ds.push_back(b.density_similarity);
            fg.boxes.emplace_back(f.frame_id, b);
        }
        fg.occupied_boxes += f.occupied_boxes;
        fg.hit_boxes += f.hit_boxes;
        for (const auto& [cls, pool] : f.class_points) {
            append(pools[cls].gt, pool.gt);
            append(pools[cls].syn, pool.syn);
        }
    }
    fg.cd_loc = summarize(cd_loc);
    fg.cd_full = summarize(cd_full);
    fg.density_similarity = summarize(ds);
    if (fg.occupied_boxes > 0) {
        fg.hit_rate = static_cast<double>(fg.hit_boxes) / static_cast<double>(fg.occupied_boxes);
    }
    for (auto cls : {ObjectClass::Car, ObjectClass::Truck, ObjectClass::Trailer}) {
        ClassMmd m;
        const auto it = pools.find(cls);
        if (it != pools.end()) {
            const auto& p = it->second;
            m.gt_points = p.gt.size();
            m.syn_points = p.syn.size();
            m.loc = mmd_or_undefined(location_samples(p.syn), location_samples(p.gt), config.mmd);
            m.rcs = mmd_or_undefined(rcs_samples(p.syn), rcs_samples(p.gt), config.mmd);
            m.doppler =
                mmd_or_undefined(doppler_samples(p.syn), doppler_samples(p.gt), config.mmd);
        }
        fg.class_mmd[cls] = m;
    }
    return report;
}

}  // namespace radarbev
