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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grassmod/analysis.hpp"
#include "grassmod/channel.hpp"

namespace grassmod {

enum class ExperimentKind {
    convergence,
    snr_sweep,
    size_sweep,
    dataset_sweep,
    threshold_sweep,
    distribution_check,
    bits_end_to_end,
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

/// Axis values override one field of the per-point parameters:
/// snr_db, L, N, gamma0, or r (distribution_check only).
struct SweepSpec {
    std::string axis = "snr_db";
    std::vector<double> values;
};

struct AnalysisOverrides {
    double gamma0 = 0.3;               // DFS threshold, also fed to the bounds
    std::optional<double> a;           // disk constant; chosen by bisection when empty
    double eta_D = 0.5;
    double epsilon = 0.1;
    double delta = 0.1;
    NoiseConvention convention = NoiseConvention::circular;
    bool use_packing_bound = false;    // feed sqrt(min_distance_bound) instead of the codebook d_min
    int lambda_samples = 20000;
};

struct PackingSpec {
    int restarts = 8;
    int iterations = 2000;
    int candidates = 8;  // codebooks packed for reference selection (bits_end_to_end)
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::snr_sweep;
    SystemParams params;  // rho from "snr_db" in JSON
    SweepSpec sweep;
    int trials = 200;
    std::uint64_t seed = 1;
    std::string output_dir = "results";
    bool emit_svg = false;
    std::vector<std::string> detectors;  // empty: per-experiment default
    AnalysisOverrides analysis;
    PackingSpec packing;
    int kmeans_restarts = 1;
    unsigned threads = 0;  // 0: hardware concurrency

    /// Throws DomainError on an empty or unsorted grid, trials < 1, or an
    /// unknown detector or axis.
    void validate() const;
    std::vector<std::string> effective_detectors() const;
};

struct ResultRow {
    double sweep_value = 0.0;
    std::string detector;
    double success_prob = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double symbol_error_rate = 0.0;
    double mean_iterations = 0.0;
    std::optional<double> bound_value;
    int trials = 0;
    std::uint64_t seed = 0;
};

/// Wilson score interval at 95% for k successes in n trials.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n);

inline constexpr const char* kCsvHeader =
    "sweep_value,detector,success_prob,ci_lo,ci_hi,symbol_error_rate,mean_iterations,bound_value,trials,seed";

std::string format_csv(const std::vector<ResultRow>& rows);

/// Path of the CSV a config writes: output_dir/<experiment>.csv.
std::string csv_path(const ExperimentConfig& config);

/// Runs every grid point and trial, writes the CSV (and SVG when requested)
/// and returns the rows. Trial streams are Rng::derive(seed, {grid, trial}),
/// so results do not depend on the thread count. Throws IoError before any
/// simulation when the output directory is unwritable.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// The packed codebook an experiment uses for (L, T, Nt).
Codebook experiment_codebook(const ExperimentConfig& config, int L);

/// Analysis parameters at one operating point, with lambda_bar estimated for
/// (Nt, Nr) and a chosen by bisection unless overridden.
AnalysisParams analysis_params_for(const ExperimentConfig& config, const SystemParams& point, double gamma0);

struct BoundsRow {
    double sweep_value = 0.0;
    double lambda_bar = 0.0;
    double d_min = 0.0;
    double a = 0.0;
    SeparabilityBound kmeans;
    std::optional<SeparabilityBound> dfs;
    ConnectivityBound connectivity;
};

/// Analysis-only evaluation of the configured grid.
std::vector<BoundsRow> evaluate_bounds(const ExperimentConfig& config);

}  // namespace grassmod
