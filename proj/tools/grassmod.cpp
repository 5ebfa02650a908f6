// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The grassmod Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: Monte Carlo experiments, codebook packing and
// analysis-only bound evaluation.

#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "grassmod/experiment.hpp"
#include "grassmod/io.hpp"

namespace {

using namespace grassmod;

int run_command(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<int> trials,
                std::optional<std::string> out, bool svg) {
    ExperimentConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (trials) config.trials = *trials;
    if (out) config.output_dir = *out;
    if (svg) config.emit_svg = true;
    const std::vector<ResultRow> rows = run_experiment(config);
    std::cout << format_csv(rows);
    std::cerr << "wrote " << csv_path(config) << '\n';
    return 0;
}

int pack_command(int L, int T, int Nt, int restarts, int iterations, std::uint64_t seed, const std::string& out) {
    Rng rng(seed);
    const PackingResult result = pack_codebook_detailed(PackingOptions{L, T, Nt, restarts, iterations}, rng);
    save_codebook(result.book, out);
    std::printf("d_min=%.10g d_min^2=%.10g bound(d_min^2)=%.10g\n", result.book.d_min(),
                result.book.d_min() * result.book.d_min(), min_distance_bound(L, T, Nt));
    return 0;
}

int bounds_command(const std::string& config_path) {
    const ExperimentConfig config = load_config(config_path);
    for (const BoundsRow& r : evaluate_bounds(config)) {
        nlohmann::json j{{"sweep_axis", config.sweep.axis},
                         {"sweep_value", r.sweep_value},
                         {"lambda_bar", r.lambda_bar},
                         {"d_min", r.d_min},
                         {"a", r.a},
                         {"eta_D", config.analysis.eta_D},
                         {"convention", config.analysis.convention == NoiseConvention::circular ? "circular" : "unit_per_component"},
                         {"kmeans_bound", r.kmeans.value},
                         {"kmeans_asymptote", r.kmeans.asymptote},
                         {"kmeans_asymptote_clamped", r.kmeans.clamped},
                         {"connectivity_bound", r.connectivity.value},
                         {"connectivity_exact", r.connectivity.exact},
                         {"connectivity_clamped", r.connectivity.clamped},
                         {"outside_assumption_regime", r.connectivity.outside_regime}};
        if (r.dfs) j["dfs_bound"] = r.dfs->value;
        std::cout << j.dump() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind detection of Grassmann constellations: experiments, packing and bounds"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a Monte Carlo experiment and write its CSV");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out;
    bool svg = false;
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--trials", trials, "override the trial count")->check(CLI::PositiveNumber);
    run->add_option("--out", out, "override the output directory");
    run->add_flag("--svg", svg, "also write an SVG plot");

    auto* pack = app.add_subcommand("pack", "pack a codebook and write it as JSON");
    int L = 8, T = 4, Nt = 2, restarts = 8, iterations = 2000;
    std::uint64_t pack_seed = 1;
    std::string pack_out;
    pack->add_option("--L", L, "constellation size (power of two)")->capture_default_str();
    pack->add_option("--T", T, "symbol duration")->capture_default_str();
    pack->add_option("--Nt", Nt, "transmit antennas")->capture_default_str();
    pack->add_option("--restarts", restarts, "independent packing runs")->capture_default_str();
    pack->add_option("--iterations", iterations, "repulsion steps per run")->capture_default_str();
    pack->add_option("--seed", pack_seed, "random seed")->capture_default_str();
    pack->add_option("--out", pack_out, "output codebook path")->required();

    auto* bounds = app.add_subcommand("bounds", "evaluate the analytical bounds over a config's grid");
    std::string bounds_config;
    bounds->add_option("--config", bounds_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return run_command(config_path, seed, trials, out, svg);
        if (*pack) return pack_command(L, T, Nt, restarts, iterations, pack_seed, pack_out);
        if (*bounds) return bounds_command(bounds_config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
