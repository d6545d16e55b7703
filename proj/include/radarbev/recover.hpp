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

/// Data term of the deconvolution objective.
///   Linear:     0.5 * ||K * P - M||^2
///   Saturating: same, except that a cell where M has reached 1 only
///               penalizes K * P falling short of it. Density maps are
///               clipped at 1, so a saturated cell is a lower bound on the
///               blur, not a measurement of it. Identical to Linear on any
///               map with no saturated cell.
enum class DataFit { Linear, Saturating };

struct DeconvParams {
    double lambda = 0.0018;
    int fista_iters = 300;
    int irl1_iters = 5;
    double extract_threshold = 0.1;
    double reweight_epsilon = 0.01;
    DataFit fit = DataFit::Saturating;

    void validate() const;
};

/// Non-negative source estimate on the map grid.
struct SparseMap {
    GridSpec grid;
    std::vector<double> values;

    double at(CellIndex c) const { return values[grid.flat(c)]; }
};

/// data(K * P, M) + lambda * sum_i w_i |P_i|; unit weights when `weights`
/// is empty. Throws PreconditionError on a grid or size mismatch.
double objective(const SparseMap& source, const BevMap& density, const GaussianKernel& kernel,
                 double lambda, std::span<const double> weights = {},
                 DataFit fit = DataFit::Linear);

/// Lipschitz bound of the data-term gradient: ||K||^2 <= (sum K)^2.
double lipschitz_bound(const GaussianKernel& kernel);

struct FistaResult {
    SparseMap solution;
    /// Weighted objective of the returned iterate.
    double objective = 0.0;
    /// Iteration (1-based) that produced the returned iterate; 0 if the
    /// starting point was never improved on.
    int best_iteration = 0;
};

/// Accelerated proximal gradient for the weighted non-negative LASSO with a
/// fixed step 1 / lipschitz_bound. Returns the lowest-objective iterate seen,
/// so the result never scores worse than `warm_start` (zero if absent).
FistaResult fista_nonneg_lasso(const BevMap& density, const GaussianKernel& kernel,
                               double lambda, std::span<const double> weights, int iters,
                               const SparseMap* warm_start = nullptr,
                               DataFit fit = DataFit::Linear);

/// Plain (unaccelerated) proximal gradient with the same step and prox; the
/// reference the accelerated solver is checked against.
SparseMap ista_nonneg_lasso(const BevMap& density, const GaussianKernel& kernel,
                            double lambda, std::span<const double> weights, int iters,
                            DataFit fit = DataFit::Linear);

struct Irl1Result {
    SparseMap solution;
    /// Unweighted objective (under params.fit) after each reweighting round.
    std::vector<double> round_objectives;
    /// Unweighted objective of the all-zero source.
    double zero_objective = 0.0;
    /// True when the last round scored worse than zero and was replaced by it.
    bool fell_back_to_zero = false;
};

Irl1Result irl1_deconvolve(const BevMap& density, const GaussianKernel& kernel,
                           const DeconvParams& params);

/// Cells with value > threshold, in (row, col) order.
std::vector<CellIndex> threshold_cells(const SparseMap& source, double threshold);

/// One point per super-threshold cell, placed at the cell center, with
/// attributes read from the maps.
RadarPointCloud extract_points(const SparseMap& source, double threshold,
                               const BevMap& rcs_map, const BevMap& doppler_map);

/// Cell centers with zero attributes; for callers that only need geometry.
RadarPointCloud cells_to_points(std::span<const CellIndex> cells, const GridSpec& grid);

/// n distinct cells drawn without replacement with probability proportional
/// to the map value. Throws PreconditionError if n exceeds the nonzero support.
std::vector<CellIndex> recover_random(const BevMap& density, std::size_t n, std::uint64_t seed);

/// Strict 3x3 local maxima above threshold, in (row, col) order.
std::vector<CellIndex> recover_peak(const BevMap& density, double threshold);

/// Up to n peaks by descending value, then a probability-weighted fill from
/// the map with peak cells zeroed.
std::vector<CellIndex> recover_peak_random(const BevMap& density, std::size_t n,
                                           double threshold, std::uint64_t seed);

/// round(sum M / sum K), the number of isolated unit-peak blobs whose mass
/// matches the map.
std::size_t estimate_point_count(const BevMap& density, const GaussianKernel& kernel);

enum class RecoveryMethod { Deconv, Random, Peak, PeakRandom };

std::string_view to_string(RecoveryMethod m);
RecoveryMethod method_from_string(std::string_view s);

struct RecoveryOutput {
    std::vector<CellIndex> cells;
    std::optional<Irl1Result> deconv;
};

/// Runs one method end-to-end on a density map and returns the chosen cells.
/// The sampling baselines draw estimate_point_count() cells.
RecoveryOutput recover_cells(const BevMap& density, const GaussianKernel& kernel,
                             RecoveryMethod method, const DeconvParams& params,
                             std::uint64_t seed);

}  // namespace radarbev
