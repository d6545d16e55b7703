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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radarbev/io.hpp"

namespace radarbev::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kParseError = 2,
    kPreconditionError = 3,
    kSolverError = 4,
};

/// Runs `body`, reporting any exception on stderr and mapping it to an exit code.
int guarded(const std::function<void()>& body);

struct EncodeOptions {
    fs::path input;
    fs::path out_dir = ".";
    /// Output file prefix; the input stem when empty.
    std::string stem;
    GridSpec grid;
    double sigma = 2.0;
};

struct EncodedPaths {
    fs::path density, rcs, doppler;
};

/// Writes `<stem>_density.png`, `<stem>_rcs.png`, `<stem>_doppler.png` with sidecars.
EncodedPaths encoded_paths(const fs::path& out_dir, const std::string& stem);
EncodedPaths cmd_encode(const EncodeOptions& opts);

struct RecoverOptions {
    fs::path density;
    /// Attribute maps; looked up next to a `*_density.png` input when unset.
    std::optional<fs::path> rcs;
    std::optional<fs::path> doppler;
    fs::path output;
    std::optional<fs::path> diagnostics;
    RecoveryMethod method = RecoveryMethod::Deconv;
    DeconvParams params;
    double sigma = 2.0;
    std::uint64_t seed = 0;
    /// Record wall time in the diagnostics; off gives byte-stable output.
    bool timing = true;
};

void cmd_recover(const RecoverOptions& opts);

/// Recovers a cloud from density and attribute maps. Attributes are zero when
/// the attribute maps are absent.
RadarPointCloud recover_cloud(const BevMap& density, const BevMap* rcs, const BevMap* doppler,
                              RecoveryMethod method, const DeconvParams& params, double sigma,
                              std::uint64_t seed, RecoveryOutput* output = nullptr);

struct EvalOptions {
    fs::path manifest;
    fs::path output;
    std::optional<fs::path> csv;
    EvalConfig config;
    /// Used for frames whose prediction is given as maps.
    RecoveryMethod method = RecoveryMethod::Deconv;
    DeconvParams params;
    double sigma = 2.0;
    std::uint64_t seed = 0;
    int jobs = 1;
};

MetricsReport cmd_eval(const EvalOptions& opts);

struct SynthOptions {
    SceneConfig scene;
    int count = 1;
    /// Exact cloud size per scene, topped up with clutter; unset keeps n_clutter.
    std::optional<int> total_points;
    /// Applied to each ground-truth cloud to make the prediction.
    PerturbConfig perturb;
    fs::path out_dir = ".";
};

/// Scene i uses seed scene.seed + i and perturbation seed perturb.seed + i.
/// Writes `<id>_gt.csv`, `<id>_syn.csv`, `<id>_boxes.json`, `manifest.json`
/// and `scene_config.json`.
std::vector<io::ManifestEntry> cmd_synth(const SynthOptions& opts);

struct SweepOptions {
    std::vector<double> sigmas{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<RecoveryMethod> methods{RecoveryMethod::Deconv, RecoveryMethod::Random,
                                        RecoveryMethod::Peak, RecoveryMethod::PeakRandom};
    int n_scenes = 20;
    std::uint64_t seed = 0;
    SceneConfig scene;
    DeconvParams params;
    fs::path output;
    int jobs = 1;
};

struct SweepRow {
    double sigma = 0.0;
    RecoveryMethod method = RecoveryMethod::Deconv;
    /// Over scenes where the recovered cloud is non-empty.
    double mean_cd_loc = 0.0;
    /// Mean |recovered count - true count|.
    double mean_count_error = 0.0;
    int scenes = 0;
    int undefined = 0;
};

/// Scenes use seeds seed, seed + 1, ...; rows are ordered sigma-major.
std::vector<SweepRow> run_sweep(const SweepOptions& opts);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> cmd_sweep(const SweepOptions& opts);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Each index runs once.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace radarbev::cli
