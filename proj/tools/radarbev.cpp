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

// radarbev: encode, recover, eval, synth and sweep subcommands.

#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "radarbev/cli.hpp"

namespace {

using namespace radarbev;
using nlohmann::json;

// Reads `--config` files written as JSON objects. Nested objects address
// subcommands: {"recover": {"lambda": 0.002}}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config file: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, "", items);
        return items;
    }

private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(const json& j, std::vector<std::string> parents, const std::string& name,
                        std::vector<CLI::ConfigItem>& out) {
        if (j.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (const auto& [key, value] : j.items()) flatten(value, parents, key, out);
            return;
        }
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = name;
        if (j.is_array()) {
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        } else {
            item.inputs.push_back(scalar(j));
        }
        out.push_back(std::move(item));
    }
};

const std::map<std::string, RecoveryMethod> kMethods{
    {"deconv", RecoveryMethod::Deconv},
    {"random", RecoveryMethod::Random},
    {"peak", RecoveryMethod::Peak},
    {"peak_random", RecoveryMethod::PeakRandom},
    {"peak+random", RecoveryMethod::PeakRandom},
};

const std::map<std::string, DataFit> kFits{
    {"saturating", DataFit::Saturating},
    {"linear", DataFit::Linear},
};

void add_deconv_flags(CLI::App* app, DeconvParams& p) {
    app->add_option("--lambda", p.lambda, "L1 weight")->capture_default_str();
    app->add_option("--fista-iters", p.fista_iters, "FISTA iterations per round")
        ->capture_default_str();
    app->add_option("--irl1-iters", p.irl1_iters, "reweighting rounds")->capture_default_str();
    app->add_option("--threshold", p.extract_threshold, "extraction threshold")
        ->capture_default_str();
    app->add_option("--epsilon", p.reweight_epsilon, "reweighting epsilon")->capture_default_str();
    app->add_option("--fit", p.fit, "data term: saturating or linear")
        ->transform(CLI::CheckedTransformer(kFits, CLI::ignore_case).description(""))
        ->type_name("FIT");
}

void add_grid_flags(CLI::App* app, GridSpec& grid, CLI::Option** extent = nullptr,
                    CLI::Option** size = nullptr) {
    auto* e = app->add_option("--extent", grid.extent, "half-width of the square grid (m)")
                  ->capture_default_str();
    auto* s = app->add_option("--size", grid.size, "cells per side")->capture_default_str();
    if (extent) *extent = e;
    if (size) *size = s;
}

SceneConfig load_scene_config(const std::string& path) {
    return path.empty() ? SceneConfig{} : io::scene_config_from_json(io::read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radar point cloud <-> BEV map toolkit"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with option values; command-line flags win");

    // encode
    cli::EncodeOptions enc;
    auto* encode = app.add_subcommand("encode", "point cloud to density, RCS and Doppler maps");
    encode->add_option("input", enc.input, "cloud file (.csv or .jsonl)")->required();
    encode->add_option("-o,--out-dir", enc.out_dir, "output directory")->capture_default_str();
    encode->add_option("--stem", enc.stem, "output file prefix (default: input stem)");
    encode->add_option("--sigma", enc.sigma, "kernel std in cells")->capture_default_str();
    add_grid_flags(encode, enc.grid);

    // recover
    cli::RecoverOptions rec;
    std::string rec_rcs, rec_doppler, rec_diag;
    bool no_timing = false;
    auto* recover = app.add_subcommand("recover", "density map to point cloud");
    recover->add_option("density", rec.density, "density map PNG")->required();
    recover->add_option("--rcs", rec_rcs, "RCS map PNG");
    recover->add_option("--doppler", rec_doppler, "Doppler map PNG");
    recover->add_option("-o,--output", rec.output, "output cloud (.csv or .jsonl)")->required();
    recover->add_option("--diagnostics", rec_diag, "diagnostics JSON (default: stderr)");
    recover
        ->add_option<RecoveryMethod, int>("--method", rec.method,
                                          "deconv, random, peak or peak_random")
        ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case).description(""))
        ->type_name("METHOD");
    recover->add_option("--sigma", rec.sigma, "kernel std in cells")->capture_default_str();
    recover->add_option("--seed", rec.seed, "seed for the sampling baselines")
        ->capture_default_str();
    recover->add_flag("--no-timing", no_timing, "omit wall time from the diagnostics");
    add_deconv_flags(recover, rec.params);

    // eval
    cli::EvalOptions ev;
    std::string ev_csv;
    auto* eval = app.add_subcommand("eval", "metrics over a manifest of frames");
    eval->add_option("manifest", ev.manifest, "manifest JSON")->required();
    eval->add_option("-o,--output", ev.output, "report JSON")->required();
    eval->add_option("--csv", ev_csv, "per-frame CSV");
    eval->add_option("--delta-loc", ev.config.da.loc, "DA location threshold (m)")
        ->capture_default_str();
    eval->add_option("--delta-rcs", ev.config.da.rcs, "DA RCS threshold (dBsm)")
        ->capture_default_str();
    eval->add_option("--delta-doppler", ev.config.da.doppler, "DA Doppler threshold (m/s)")
        ->capture_default_str();
    eval->add_option("--iou-delta", ev.config.iou_delta, "IoU match radius (m)")
        ->capture_default_str();
    eval->add_option("--mmd-kernels", ev.config.mmd.num_kernels, "Gaussians in the MMD kernel")
        ->capture_default_str();
    eval->add_option("--min-visibility", ev.config.min_visibility, "foreground visibility floor")
        ->capture_default_str();
    eval->add_option<RecoveryMethod, int>("--method", ev.method, "recovery for map predictions")
        ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case).description(""))
        ->type_name("METHOD");
    eval->add_option("--sigma", ev.sigma, "kernel std for map predictions")->capture_default_str();
    eval->add_option("--seed", ev.seed, "seed for the sampling baselines")->capture_default_str();
    eval->add_option("--jobs", ev.jobs, "frames evaluated in parallel")->capture_default_str();
    add_deconv_flags(eval, ev.params);

    // synth
    cli::SynthOptions syn;
    std::string syn_scene;
    std::uint64_t syn_seed = 0;
    int total_points = 0;
    GridSpec syn_grid;
    CLI::Option *syn_extent = nullptr, *syn_size = nullptr;
    auto* synth = app.add_subcommand("synth", "seeded synthetic scenes and predictions");
    synth->add_option("--scene-config", syn_scene, "SceneConfig JSON");
    synth->add_option("--count", syn.count, "number of scenes")->capture_default_str();
    auto* syn_seed_opt = synth->add_option("--seed", syn_seed, "first scene seed");
    auto* total_opt =
        synth->add_option("--total-points", total_points, "exact points per scene");
    synth->add_option("-o,--out-dir", syn.out_dir, "output directory")->capture_default_str();
    synth->add_option("--perturb-seed", syn.perturb.seed, "first perturbation seed");
    synth->add_option("--jitter-loc", syn.perturb.jitter_loc, "location jitter std (m)");
    synth->add_option("--jitter-rcs", syn.perturb.jitter_rcs, "RCS jitter std (dBsm)");
    synth->add_option("--jitter-doppler", syn.perturb.jitter_doppler, "Doppler jitter std (m/s)");
    synth->add_option("--drop-rate", syn.perturb.drop_rate, "probability of dropping a point");
    synth->add_option("--spawn-rate", syn.perturb.spawn_rate, "probability of a spurious point");
    add_grid_flags(synth, syn_grid, &syn_extent, &syn_size);

    // sweep
    cli::SweepOptions sw;
    std::string sw_scene;
    GridSpec sw_grid;
    CLI::Option *sw_extent = nullptr, *sw_size = nullptr;
    auto* sweep = app.add_subcommand("sweep", "recovery quality over sigma and method");
    sweep->add_option("--sigmas", sw.sigmas, "kernel stds in cells")->delimiter(',');
    sweep->add_option("--methods", sw.methods, "recovery methods")
        ->delimiter(',')
        ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case).description(""))
        ->type_name("METHOD");
    sweep->add_option("--scenes", sw.n_scenes, "scenes per sigma")->capture_default_str();
    sweep->add_option("--seed", sw.seed, "first scene seed")->capture_default_str();
    sweep->add_option("--scene-config", sw_scene, "SceneConfig JSON");
    sweep->add_option("-o,--output", sw.output, "output CSV")->required();
    sweep->add_option("--jobs", sw.jobs, "scenes processed in parallel")->capture_default_str();
    add_deconv_flags(sweep, sw.params);
    add_grid_flags(sweep, sw_grid, &sw_extent, &sw_size);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kParseError;
    }

    if (*encode) return cli::guarded([&] { cli::cmd_encode(enc); });
    if (*recover) {
        return cli::guarded([&] {
            if (!rec_rcs.empty()) rec.rcs = rec_rcs;
            if (!rec_doppler.empty()) rec.doppler = rec_doppler;
            if (!rec_diag.empty()) rec.diagnostics = rec_diag;
            rec.timing = !no_timing;
            cli::cmd_recover(rec);
        });
    }
    if (*eval) {
        return cli::guarded([&] {
            if (!ev_csv.empty()) ev.csv = ev_csv;
            cli::cmd_eval(ev);
        });
    }
    if (*synth) {
        return cli::guarded([&] {
            syn.scene = load_scene_config(syn_scene);
            if (syn_seed_opt->count()) syn.scene.seed = syn_seed;
            if (syn_extent->count()) syn.scene.grid.extent = syn_grid.extent;
            if (syn_size->count()) syn.scene.grid.size = syn_grid.size;
            if (total_opt->count()) syn.total_points = total_points;
            cli::cmd_synth(syn);
        });
    }
    if (*sweep) {
        return cli::guarded([&] {
            sw.scene = load_scene_config(sw_scene);
            if (sw_extent->count()) sw.scene.grid.extent = sw_grid.extent;
            if (sw_size->count()) sw.scene.grid.size = sw_grid.size;
            cli::cmd_sweep(sw);
        });
    }
    return cli::kOk;
}
