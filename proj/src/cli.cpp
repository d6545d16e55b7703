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

#include "radarbev/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "radarbev/bev_encode.hpp"

namespace radarbev::cli {

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << '\n';
        return kPreconditionError;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolverError;
    } catch (const io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    }
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

EncodedPaths encoded_paths(const fs::path& out_dir, const std::string& stem) {
    return {out_dir / (stem + "_density.png"), out_dir / (stem + "_rcs.png"),
            out_dir / (stem + "_doppler.png")};
}

EncodedPaths cmd_encode(const EncodeOptions& opts) {
    opts.grid.validate();
    const GaussianKernel kernel(opts.sigma);
    const auto cloud = io::read_cloud(opts.input);
    auto maps = encode(cloud, opts.grid, kernel);
    // With nothing on the grid the attribute maps have no content; store them
    // at the bottom of their range so the file set stays complete.
    if (maps.rcs.values.empty()) maps.rcs = BevMap(opts.grid, Channel::Rcs, ranges::kRcs, 0.0);
    if (maps.doppler.values.empty()) {
        maps.doppler = BevMap(opts.grid, Channel::Doppler, ranges::kDoppler, 0.0);
    }
    const auto paths =
        encoded_paths(opts.out_dir, opts.stem.empty() ? opts.input.stem().string() : opts.stem);
    io::write_map(paths.density, maps.density);
    io::write_map(paths.rcs, maps.rcs);
    io::write_map(paths.doppler, maps.doppler);
    return paths;
}

RadarPointCloud recover_cloud(const BevMap& density, const BevMap* rcs, const BevMap* doppler,
                              RecoveryMethod method, const DeconvParams& params, double sigma,
                              std::uint64_t seed, RecoveryOutput* output) {
    if (density.channel != Channel::Density) {
        throw PreconditionError("recover: input map is not a density map");
    }
    const GaussianKernel kernel(sigma);
    auto result = recover_cells(density, kernel, method, params, seed);
    auto cloud = cells_to_points(result.cells, density.grid);
    if (rcs && doppler) {
        const auto attrs = sample_attributes(result.cells, *rcs, *doppler);
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            cloud.points[i].rcs = attrs[i].rcs;
            cloud.points[i].doppler = attrs[i].doppler;
        }
    }
    if (output) *output = std::move(result);
    return cloud;
}

namespace {

std::optional<fs::path> sibling_map(const fs::path& density, const std::string& channel) {
    const std::string stem = density.stem().string();
    const std::string suffix = "_density";
    if (stem.size() < suffix.size() || stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) != 0) {
        return std::nullopt;
    }
    const fs::path candidate =
        density.parent_path() /
        (stem.substr(0, stem.size() - suffix.size()) + "_" + channel + density.extension().string());
    if (!fs::exists(candidate)) return std::nullopt;
    return candidate;
}

}  // namespace

void cmd_recover(const RecoverOptions& opts) {
    opts.params.validate();
    const auto density = io::read_map(opts.density);
    const auto rcs_path = opts.rcs ? opts.rcs : sibling_map(opts.density, "rcs");
    const auto doppler_path = opts.doppler ? opts.doppler : sibling_map(opts.density, "doppler");
    std::optional<BevMap> rcs, doppler;
    if (rcs_path && doppler_path) {
        rcs = io::read_map(*rcs_path);
        doppler = io::read_map(*doppler_path);
    } else if (rcs_path || doppler_path) {
        throw PreconditionError("recover: give both attribute maps or neither");
    } else {
        std::cerr << "note: no attribute maps found; RCS and Doppler are written as 0\n";
    }

    const auto start = std::chrono::steady_clock::now();
    RecoveryOutput output;
    auto cloud = recover_cloud(density, rcs ? &*rcs : nullptr, doppler ? &*doppler : nullptr,
                               opts.method, opts.params, opts.sigma, opts.seed, &output);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    io::write_cloud(opts.output, cloud);
    const auto diagnostics = io::diagnostics_to_json(
        opts.method, opts.params, GaussianKernel(opts.sigma), output,
        opts.timing ? seconds : std::numeric_limits<double>::quiet_NaN());
    if (opts.diagnostics) {
        io::write_file_atomic(*opts.diagnostics, diagnostics);
    } else {
        std::cerr << diagnostics;
    }
    if (output.deconv && output.deconv->fell_back_to_zero) {
        std::cerr << "warning: deconvolution did not improve on the empty source\n";
    }
}

MetricsReport cmd_eval(const EvalOptions& opts) {
    opts.config.da.validate();
    const auto entries =
        io::manifest_from_json(io::read_file(opts.manifest), opts.manifest.parent_path());
    std::vector<FrameEvaluation> frames(entries.size());
    parallel_for(entries.size(), opts.jobs, [&](std::size_t i) {
        const auto& e = entries[i];
        const auto gt = io::read_cloud(e.gt_cloud);
        RadarPointCloud syn;
        if (e.syn_cloud) {
            syn = io::read_cloud(*e.syn_cloud);
        } else {
            const auto density = io::read_map(*e.syn_density);
            const auto rcs = io::read_map(*e.syn_rcs);
            const auto doppler = io::read_map(*e.syn_doppler);
            syn = recover_cloud(density, &rcs, &doppler, opts.method, opts.params, opts.sigma,
                                opts.seed, nullptr);
        }
        const auto boxes = e.boxes ? io::read_boxes(*e.boxes) : std::vector<BoundingBox>{};
        frames[i] = evaluate_frame(e.frame_id, gt, syn, boxes, opts.config);
    });
    auto report = evaluate_dataset(std::move(frames), opts.config);
    io::write_file_atomic(opts.output, io::report_to_json(report, opts.config));
    if (opts.csv) io::write_file_atomic(*opts.csv, io::report_to_csv(report));
    return report;
}

std::vector<io::ManifestEntry> cmd_synth(const SynthOptions& opts) {
    if (opts.count < 1) throw PreconditionError("synth: count must be at least 1");
    opts.scene.validate();
    std::vector<io::ManifestEntry> entries;
    for (int i = 0; i < opts.count; ++i) {
        SceneConfig cfg = opts.scene;
        cfg.seed = opts.scene.seed + static_cast<std::uint64_t>(i);
        const auto scene = opts.total_points ? generate_scene_with_points(cfg, *opts.total_points)
                                             : generate_scene(cfg);
        PerturbConfig perturb = opts.perturb;
        perturb.seed = opts.perturb.seed + static_cast<std::uint64_t>(i);
        perturb.extent = cfg.grid.extent;
        const auto syn = perturb_scene(scene.cloud, perturb);

        io::ManifestEntry e;
        e.frame_id = scene.cloud.frame_id;
        e.gt_cloud = e.frame_id + "_gt.csv";
        e.syn_cloud = e.frame_id + "_syn.csv";
        e.boxes = e.frame_id + "_boxes.json";
        io::write_cloud(opts.out_dir / e.gt_cloud, scene.cloud);
        io::write_cloud(opts.out_dir / *e.syn_cloud, syn);
        io::write_boxes(opts.out_dir / *e.boxes, scene.boxes);
        entries.push_back(std::move(e));
    }
    io::write_file_atomic(opts.out_dir / "manifest.json", io::manifest_to_json(entries));
    io::write_file_atomic(opts.out_dir / "scene_config.json", io::scene_config_to_json(opts.scene));
    return entries;
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts) {
    if (opts.n_scenes < 1) throw PreconditionError("sweep: need at least one scene");
    if (opts.sigmas.empty() || opts.methods.empty()) {
        throw PreconditionError("sweep: empty sigma or method list");
    }
    opts.params.validate();
    opts.scene.validate();
    const std::size_t n_sigma = opts.sigmas.size();
    const std::size_t n_method = opts.methods.size();
    std::vector<GaussianKernel> kernels;
    for (double s : opts.sigmas) kernels.emplace_back(s);

    struct Cell {
        std::optional<double> cd_loc;
        double count_error = 0.0;
    };
    // results[scene][sigma][method]
    std::vector<std::vector<std::vector<Cell>>> results(
        static_cast<std::size_t>(opts.n_scenes),
        std::vector<std::vector<Cell>>(n_sigma, std::vector<Cell>(n_method)));

    parallel_for(results.size(), opts.jobs, [&](std::size_t s) {
        SceneConfig cfg = opts.scene;
        cfg.seed = opts.seed + s;
        const auto scene = generate_scene(cfg);
        const auto occupancy = rasterize(scene.cloud, cfg.grid);
        for (std::size_t si = 0; si < n_sigma; ++si) {
            const auto density = density_map(occupancy, kernels[si]);
            for (std::size_t mi = 0; mi < n_method; ++mi) {
                const auto out =
                    recover_cells(density, kernels[si], opts.methods[mi], opts.params, cfg.seed);
                const auto cloud = cells_to_points(out.cells, cfg.grid);
                auto& cell = results[s][si][mi];
                cell.cd_loc = chamfer_loc(cloud, scene.cloud);
                cell.count_error = std::abs(static_cast<double>(out.cells.size()) -
                                            static_cast<double>(scene.cloud.size()));
            }
        }
    });

    std::vector<SweepRow> rows;
    for (std::size_t si = 0; si < n_sigma; ++si) {
        for (std::size_t mi = 0; mi < n_method; ++mi) {
            SweepRow row{opts.sigmas[si], opts.methods[mi], 0.0, 0.0, opts.n_scenes, 0};
            std::vector<std::optional<double>> cds;
            for (const auto& scene : results) {
                cds.push_back(scene[si][mi].cd_loc);
                row.mean_count_error += scene[si][mi].count_error;
            }
            const auto stat = summarize(cds);
            row.mean_cd_loc = stat.count ? stat.mean : std::numeric_limits<double>::quiet_NaN();
            row.undefined = static_cast<int>(stat.undefined);
            row.mean_count_error /= static_cast<double>(opts.n_scenes);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "sigma,method,mean_cd_loc,mean_count_error\n";
    for (const auto& r : rows) {
        out += io::format_number(r.sigma) + ',' + std::string(to_string(r.method)) + ',' +
               (std::isnan(r.mean_cd_loc) ? std::string() : io::format_number(r.mean_cd_loc)) +
               ',' + io::format_number(r.mean_count_error) + '\n';
    }
    return out;
}

std::vector<SweepRow> cmd_sweep(const SweepOptions& opts) {
    auto rows = run_sweep(opts);
    io::write_file_atomic(opts.output, sweep_to_csv(rows));
    for (const auto& r : rows) {
        if (r.undefined > 0) {
            std::cerr << "note: sigma " << r.sigma << ' ' << to_string(r.method) << ": "
                      << r.undefined << " scene(s) recovered no points\n";
        }
    }
    return rows;
}

}  // namespace radarbev::cli
