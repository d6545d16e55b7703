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

#include "radarbev/recover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "radarbev/bev_encode.hpp"
#include "radarbev/rng.hpp"

namespace radarbev {

void DeconvParams::validate() const {
    if (!(lambda > 0.0)) throw PreconditionError("deconv: lambda must be positive");
    if (fista_iters < 1 || irl1_iters < 1) {
        throw PreconditionError("deconv: iteration counts must be at least 1");
    }
    if (!(extract_threshold > 0.0 && extract_threshold < 1.0)) {
        throw PreconditionError("deconv: threshold must lie in (0, 1)");
    }
    if (!(reweight_epsilon > 0.0)) throw PreconditionError("deconv: epsilon must be positive");
}

namespace {

void check_inputs(const BevMap& density, std::span<const double> weights) {
    density.grid.validate();
    if (density.values.size() != density.grid.cell_count()) {
        throw PreconditionError("density map size does not match its grid");
    }
    if (!weights.empty() && weights.size() != density.values.size()) {
        throw PreconditionError("weight array size does not match the grid");
    }
}

// Residual of the data term; zero where a saturated target is exceeded.
inline double fit_residual(double blurred, double target, DataFit fit) {
    const double r = blurred - target;
    if (fit == DataFit::Saturating && target >= 1.0 && r > 0.0) return 0.0;
    return r;
}

// Objective given a precomputed forward blur of the source.
double objective_from_blur(std::span<const double> source, std::span<const double> blurred,
                           std::span<const double> target, double lambda,
                           std::span<const double> weights, DataFit fit) {
    double data = 0.0;
    double reg = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const double r = fit_residual(blurred[i], target[i], fit);
        data += r * r;
        reg += (weights.empty() ? 1.0 : weights[i]) * std::abs(source[i]);
    }
    return 0.5 * data + lambda * reg;
}

}  // namespace

double objective(const SparseMap& source, const BevMap& density, const GaussianKernel& kernel,
                 double lambda, std::span<const double> weights, DataFit fit) {
    if (!(source.grid == density.grid)) throw PreconditionError("objective: grid mismatch");
    check_inputs(density, weights);
    if (source.values.size() != density.values.size()) {
        throw PreconditionError("objective: source size does not match its grid");
    }
    const auto blurred = convolve(source.values, density.grid.size, kernel);
    return objective_from_blur(source.values, blurred, density.values, lambda, weights, fit);
}

double lipschitz_bound(const GaussianKernel& kernel) { return kernel.mass() * kernel.mass(); }

FistaResult fista_nonneg_lasso(const BevMap& density, const GaussianKernel& kernel,
                               double lambda, std::span<const double> weights, int iters,
                               const SparseMap* warm_start, DataFit fit) {
    if (iters < 1) throw PreconditionError("fista: iters must be at least 1");
    check_inputs(density, weights);
    const auto& grid = density.grid;
    const std::size_t n = grid.cell_count();
    const double step = 1.0 / lipschitz_bound(kernel);

    std::vector<double> x(n, 0.0);
    if (warm_start) {
        if (!(warm_start->grid == grid) || warm_start->values.size() != n) {
            throw PreconditionError("fista: warm start grid mismatch");
        }
        x = warm_start->values;
    }
    std::vector<double> kx = convolve(x, grid.size, kernel);

    // Per-cell shrinkage lambda * w_i / L.
    std::vector<double> shrink(n, lambda * step);
    if (!weights.empty()) {
        for (std::size_t i = 0; i < n; ++i) shrink[i] = lambda * weights[i] * step;
    }

    FistaResult result;
    result.solution = {grid, x};
    result.objective = objective_from_blur(x, kx, density.values, lambda, weights, fit);

    // The blur is linear, so K*y follows from K*x without another convolution.
    std::vector<double> y = x;
    std::vector<double> ky = kx;
    std::vector<double> residual(n);
    std::vector<double> grad(n);
    std::vector<double> x_next(n);
    std::vector<double> kx_next(n);
    double t = 1.0;

    for (int it = 1; it <= iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = fit_residual(ky[i], density.values[i], fit);
        }
        convolve(residual, grad, grid.size, kernel);
        for (std::size_t i = 0; i < n; ++i) {
            x_next[i] = std::max(y[i] - step * grad[i] - shrink[i], 0.0);
        }
        convolve(x_next, kx_next, grid.size, kernel);

        const double f =
            objective_from_blur(x_next, kx_next, density.values, lambda, weights, fit);
        if (f < result.objective) {
            result.objective = f;
            result.solution.values = x_next;
            result.best_iteration = it;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x_next[i] + beta * (x_next[i] - x[i]);
            ky[i] = kx_next[i] + beta * (kx_next[i] - kx[i]);
        }
        x.swap(x_next);
        kx.swap(kx_next);
        t = t_next;
    }
    return result;
}

SparseMap ista_nonneg_lasso(const BevMap& density, const GaussianKernel& kernel, double lambda,
                            std::span<const double> weights, int iters, DataFit fit) {
    if (iters < 1) throw PreconditionError("ista: iters must be at least 1");
    check_inputs(density, weights);
    const auto& grid = density.grid;
    const std::size_t n = grid.cell_count();
    const double step = 1.0 / lipschitz_bound(kernel);

    std::vector<double> x(n, 0.0);
    std::vector<double> residual(n);
    std::vector<double> grad(n);
    for (int it = 0; it < iters; ++it) {
        const auto kx = convolve(x, grid.size, kernel);
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = fit_residual(kx[i], density.values[i], fit);
        }
        convolve(residual, grad, grid.size, kernel);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weights.empty() ? 1.0 : weights[i];
            x[i] = std::max(x[i] - step * grad[i] - step * lambda * w, 0.0);
        }
    }
    return {grid, std::move(x)};
}

Irl1Result irl1_deconvolve(const BevMap& density, const GaussianKernel& kernel,
                           const DeconvParams& params) {
    params.validate();
    check_inputs(density, {});
    const std::size_t n = density.grid.cell_count();

    Irl1Result out;
    out.zero_objective = objective({density.grid, std::vector<double>(n, 0.0)}, density, kernel,
                                   params.lambda, {}, params.fit);

    std::vector<double> weights(n, 1.0);
    SparseMap current{density.grid, std::vector<double>(n, 0.0)};
    for (int round = 0; round < params.irl1_iters; ++round) {
        auto step = fista_nonneg_lasso(density, kernel, params.lambda, weights,
                                       params.fista_iters, &current, params.fit);
        current = std::move(step.solution);
        out.round_objectives.push_back(
            objective(current, density, kernel, params.lambda, {}, params.fit));
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = 1.0 / (std::abs(current.values[i]) + params.reweight_epsilon);
        }
    }

    // The zero source scores the same under both data terms, and the
    // result must not lose to it under either.
    const double linear = objective(current, density, kernel, params.lambda);
    if (out.round_objectives.back() > out.zero_objective || linear > out.zero_objective) {
        current.values.assign(n, 0.0);
        out.fell_back_to_zero = true;
    }
    out.solution = std::move(current);
    return out;
}

std::vector<CellIndex> threshold_cells(const SparseMap& source, double threshold) {
    std::vector<CellIndex> cells;
    for (std::size_t i = 0; i < source.values.size(); ++i) {
        if (source.values[i] > threshold) cells.push_back(source.grid.unflat(i));
    }
    return cells;
}

RadarPointCloud cells_to_points(std::span<const CellIndex> cells, const GridSpec& grid) {
    RadarPointCloud cloud;
    cloud.points.reserve(cells.size());
    for (const auto& c : cells) {
        const auto center = cell_center(c, grid);
        cloud.points.push_back({center.x, center.y, 0.0, 0.0});
    }
    return cloud;
}

RadarPointCloud extract_points(const SparseMap& source, double threshold,
                               const BevMap& rcs_map, const BevMap& doppler_map) {
    if (!(source.grid == rcs_map.grid) || !(source.grid == doppler_map.grid)) {
        throw PreconditionError("extract_points: maps do not share the source grid");
    }
    const auto cells = threshold_cells(source, threshold);
    const auto attrs = sample_attributes(cells, rcs_map, doppler_map);
    RadarPointCloud cloud = cells_to_points(cells, source.grid);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        cloud.points[k].rcs = attrs[k].rcs;
        cloud.points[k].doppler = attrs[k].doppler;
    }
    return cloud;
}

std::vector<CellIndex> recover_random(const BevMap& density, std::size_t n, std::uint64_t seed) {
    check_inputs(density, {});
    if (n == 0) return {};

    // Weighted sampling without replacement (Efraimidis-Spirakis): each
    // positive cell draws key log(u) / w and the n largest keys win.
    Rng rng(seed);
    std::vector<std::pair<double, std::size_t>> keys;
    for (std::size_t i = 0; i < density.values.size(); ++i) {
        const double w = density.values[i];
        if (w > 0.0) keys.emplace_back(std::log(rng.uniform_open_low()) / w, i);
    }
    if (n > keys.size()) {
        throw PreconditionError("recover_random: requested " + std::to_string(n) +
                                " cells but the map has only " + std::to_string(keys.size()) +
                                " nonzero cells");
    }
    auto by_key = [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    };
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(n), keys.end(),
                      by_key);
    std::vector<CellIndex> cells;
    cells.reserve(n);
    for (std::size_t k = 0; k < n; ++k) cells.push_back(density.grid.unflat(keys[k].second));
    std::sort(cells.begin(), cells.end());
    return cells;
}

std::vector<CellIndex> recover_peak(const BevMap& density, double threshold) {
    check_inputs(density, {});
    const int size = density.grid.size;
    std::vector<CellIndex> peaks;
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const double v = density.at({r, c});
            if (!(v > threshold)) continue;
            bool is_peak = true;
            for (int dr = -1; dr <= 1 && is_peak; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const CellIndex nb{r + dr, c + dc};
                    if (!density.grid.contains(nb)) continue;
                    if (!(v > density.at(nb))) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak) peaks.push_back({r, c});
        }
    }
    return peaks;
}

std::vector<CellIndex> recover_peak_random(const BevMap& density, std::size_t n,
                                           double threshold, std::uint64_t seed) {
    auto peaks = recover_peak(density, threshold);
    std::stable_sort(peaks.begin(), peaks.end(), [&](CellIndex a, CellIndex b) {
        return density.at(a) > density.at(b);
    });
    if (n <= peaks.size()) {
        peaks.resize(n);
        return peaks;
    }
    BevMap rest = density;
    for (const auto& p : peaks) rest.at(p) = 0.0;
    auto fill = recover_random(rest, n - peaks.size(), seed);
    peaks.insert(peaks.end(), fill.begin(), fill.end());
    return peaks;
}

std::size_t estimate_point_count(const BevMap& density, const GaussianKernel& kernel) {
    const double mass = std::accumulate(density.values.begin(), density.values.end(), 0.0);
    const double count = std::round(mass / kernel.mass());
    return count > 0.0 ? static_cast<std::size_t>(count) : 0;
}

std::string_view to_string(RecoveryMethod m) {
    switch (m) {
        case RecoveryMethod::Deconv: return "deconv";
        case RecoveryMethod::Random: return "random";
        case RecoveryMethod::Peak: return "peak";
        case RecoveryMethod::PeakRandom: return "peak_random";
    }
    return "deconv";
}

RecoveryMethod method_from_string(std::string_view s) {
    for (auto m : {RecoveryMethod::Deconv, RecoveryMethod::Random, RecoveryMethod::Peak,
                   RecoveryMethod::PeakRandom}) {
        if (to_string(m) == s) return m;
    }
    if (s == "peak+random") return RecoveryMethod::PeakRandom;
    throw ParseError("unknown recovery method '" + std::string(s) + "'");
}

RecoveryOutput recover_cells(const BevMap& density, const GaussianKernel& kernel,
                             RecoveryMethod method, const DeconvParams& params,
                             std::uint64_t seed) {
    RecoveryOutput out;
    const auto support = static_cast<std::size_t>(
        std::count_if(density.values.begin(), density.values.end(),
                      [](double v) { return v > 0.0; }));
    switch (method) {
        case RecoveryMethod::Deconv: {
            auto result = irl1_deconvolve(density, kernel, params);
            out.cells = threshold_cells(result.solution, params.extract_threshold);
            out.deconv = std::move(result);
            break;
        }
        case RecoveryMethod::Random:
            out.cells = recover_random(
                density, std::min(estimate_point_count(density, kernel), support), seed);
            break;
        case RecoveryMethod::Peak:
            out.cells = recover_peak(density, params.extract_threshold);
            break;
        case RecoveryMethod::PeakRandom:
            out.cells = recover_peak_random(
                density, std::min(estimate_point_count(density, kernel), support),
                params.extract_threshold, seed);
            break;
    }
    return out;
}

}  // namespace radarbev
