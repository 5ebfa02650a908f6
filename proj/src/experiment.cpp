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

#include "grassmod/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "grassmod/detect.hpp"
#include "grassmod/parallel.hpp"
#include "grassmod/plot.hpp"

namespace grassmod {

namespace {

// Stream keys. Trial streams use (grid, trial[, detector]); the remaining
// streams are tagged so they never collide with them.
constexpr std::uint64_t kPackKey = 0x7061636bULL;
constexpr std::uint64_t kLambdaKey = 0x6c616d62ULL;
constexpr std::uint64_t kSampleKey = 0x64697374ULL;

const std::vector<std::string> kClusterDetectors{"kmeans", "dfs", "em", "ml_genie"};
const std::vector<std::string> kDistributionDetectors{"empirical", "surrogate"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string expected_axis(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::size_sweep: return "L";
        case ExperimentKind::dataset_sweep: return "N";
        case ExperimentKind::threshold_sweep: return "gamma0";
        case ExperimentKind::distribution_check: return "r";
        default: return "snr_db";
    }
}

struct Point {
    SystemParams params;
    double gamma0;
    double radius;  // distribution_check only
};

Point point_at(const ExperimentConfig& c, double v) {
    Point p{c.params, c.analysis.gamma0, 0.0};
    if (c.sweep.axis == "snr_db") p.params.rho = db_to_linear(v);
    if (c.sweep.axis == "L") p.params.L = static_cast<int>(std::lround(v));
    if (c.sweep.axis == "N") p.params.N = static_cast<int>(std::lround(v));
    if (c.sweep.axis == "gamma0") p.gamma0 = v;
    if (c.sweep.axis == "r") p.radius = v;
    return p;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Outcome {
    bool success = false;
    double error_rate = 1.0;
    double iterations = 0.0;
};

ClusterAssignment genie_assignment(const SymbolBlock& block, const Codebook& book) {
    ClusterAssignment a;
    a.labels = ml_symbol_detect(block, book);
    a.codewords = book.codewords();
    a.iterations = 1;
    a.converged = true;
    return a;
}

Outcome to_outcome(const DetectionReport& r, int iterations) {
    return Outcome{r.success, r.symbol_error_rate, static_cast<double>(iterations)};
}

std::vector<Outcome> cluster_trial(const ExperimentConfig& c, const Point& pt, const Codebook& book,
                                   const std::vector<std::string>& detectors, std::uint64_t g, std::uint64_t t) {
    Rng rng = Rng::derive(c.seed, {g, t});
    SymbolBlock block = transmit_block(book, pt.params, IndexSource::uniform(), rng);
    project_block(block, pt.params.Nt);

    std::optional<std::vector<GrassmannPoint>> shared_init;
    if (c.experiment == ExperimentKind::convergence) {
        Rng init_rng = Rng::derive(c.seed, {g, t, 0});
        shared_init = seed_codewords(block, pt.params.L, Metric::geodesic, init_rng);
    }

    std::vector<Outcome> out;
    for (std::size_t d = 0; d < detectors.size(); ++d) {
        Rng drng = Rng::derive(c.seed, {g, t, d + 1});
        const std::string& name = detectors[d];
        if (name == "kmeans") {
            KMeansOptions opt;
            opt.restarts = c.kmeans_restarts;
            opt.initial_codewords = shared_init;
            const ClusterAssignment a = kmeans_fit(block, pt.params.L, drng, opt);
            out.push_back(to_outcome(evaluate(a, block, book), a.iterations));
        } else if (name == "em") {
            EmOptions opt;
            opt.init = shared_init;
            const ClusterAssignment a = em_fit(block, pt.params.L, pt.params, opt, drng);
            out.push_back(to_outcome(evaluate(a, block, book), a.iterations));
        } else if (name == "dfs") {
            const ClusterAssignment a = dfs_fit(block, pt.gamma0);
            out.push_back(to_outcome(evaluate(a, block, book), a.iterations));
        } else {
            const ClusterAssignment a = genie_assignment(block, book);
            out.push_back(to_outcome(evaluate(a, block, book), a.iterations));
        }
    }
    return out;
}

Outcome bits_trial(const Point& pt, const Codebook& book, const BitMapping& mapping, std::uint64_t seed,
                   std::uint64_t g, std::uint64_t t) {
    Rng rng = Rng::derive(seed, {g, t});
    const auto bits_per = static_cast<std::size_t>(mapping.bits_per_symbol());
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(pt.params.N) * bits_per);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    SymbolBlock block = transmit_block(book, pt.params, IndexSource::fixed(mapping.encode(bits)), rng);
    project_block(block, pt.params.Nt);
    Rng drng = Rng::derive(seed, {g, t, 1});
    const ClusterAssignment a = kmeans_fit(block, static_cast<int>(book.size()), drng);
    std::size_t errors = bits.size();
    try {
        const std::vector<std::uint8_t> decoded = decode_bits(a, mapping.reference());
        errors = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) errors += decoded[i] != bits[i];
    } catch (const DomainError&) {
        // Order not recoverable from the estimated codewords: every bit counts as lost.
    }
    return Outcome{errors == 0, static_cast<double>(errors) / static_cast<double>(bits.size()),
                   static_cast<double>(a.iterations)};
}

Codebook bits_codebook(const ExperimentConfig& c, int L) {
    const GrassmannPoint reference = fourier_reference(c.params.T, c.params.Nt);
    std::vector<Codebook> candidates;
    for (int k = 0; k < std::max(1, c.packing.candidates); ++k) {
        PackingOptions opt{L, c.params.T, c.params.Nt, c.packing.restarts, c.packing.iterations};
        Rng rng = Rng::derive(c.seed, {kPackKey, static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(c.params.T),
                                       static_cast<std::uint64_t>(c.params.Nt), static_cast<std::uint64_t>(k) + 1});
        candidates.push_back(orient_codebook_for_reference(pack_codebook(opt, rng), reference, rng));
    }
    return select_codebook_for_reference(candidates, reference);
}

double lambda_bar_for(const ExperimentConfig& c, const SystemParams& p) {
    Rng rng = Rng::derive(c.seed, {kLambdaKey, static_cast<std::uint64_t>(p.Nt), static_cast<std::uint64_t>(p.Nr)});
    return estimate_lambda_bar(p, std::max(100, c.analysis.lambda_samples), rng);
}

double bound_d_min(const ExperimentConfig& c, const Codebook& book, int L) {
    return c.analysis.use_packing_bound ? std::sqrt(min_distance_bound(L, c.params.T, c.params.Nt)) : book.d_min();
}

std::optional<double> dfs_bound(double d_min, const AnalysisParams& ap) {
    if (ap.gamma0 >= d_min || ap.disk_radius() < ap.gamma0 / 2.0) return 0.0;
    const double sep = dfs_separability_bound(d_min, ap).value;
    const double con = connectivity_bound(ap).exact;
    return std::max(0.0, sep + con - 1.0);
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    static const std::map<std::string, ExperimentKind> kinds{
        {"convergence", ExperimentKind::convergence},
        {"snr_sweep", ExperimentKind::snr_sweep},
        {"size_sweep", ExperimentKind::size_sweep},
        {"dataset_sweep", ExperimentKind::dataset_sweep},
        {"threshold_sweep", ExperimentKind::threshold_sweep},
        {"distribution_check", ExperimentKind::distribution_check},
        {"bits_end_to_end", ExperimentKind::bits_end_to_end},
    };
    const auto it = kinds.find(name);
    if (it == kinds.end()) throw DomainError("unknown experiment: " + name);
    return it->second;
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::convergence: return "convergence";
        case ExperimentKind::snr_sweep: return "snr_sweep";
        case ExperimentKind::size_sweep: return "size_sweep";
        case ExperimentKind::dataset_sweep: return "dataset_sweep";
        case ExperimentKind::threshold_sweep: return "threshold_sweep";
        case ExperimentKind::distribution_check: return "distribution_check";
        case ExperimentKind::bits_end_to_end: return "bits_end_to_end";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw DomainError("config: trials must be at least 1");
    if (sweep.values.empty()) throw DomainError("config: sweep grid is empty");
    if (!std::is_sorted(sweep.values.begin(), sweep.values.end())) throw DomainError("config: sweep grid not sorted");
    const std::string axis = expected_axis(experiment);
    if (sweep.axis != axis) {
        throw DomainError("config: " + to_string(experiment) + " sweeps axis '" + axis + "', got '" + sweep.axis + "'");
    }
    const auto& allowed = experiment == ExperimentKind::distribution_check ? kDistributionDetectors : kClusterDetectors;
    for (const std::string& d : effective_detectors()) {
        if (!contains(allowed, d)) throw DomainError("config: detector '" + d + "' not available here");
    }
    if (experiment == ExperimentKind::bits_end_to_end && effective_detectors() != std::vector<std::string>{"kmeans"}) {
        throw DomainError("config: bits_end_to_end runs the kmeans detector only");
    }
    for (double v : sweep.values) {
        const Point p = point_at(*this, v);
        p.params.validate();
        if (!(p.gamma0 > 0.0)) throw DomainError("config: gamma0 must be positive");
    }
    if (kmeans_restarts < 1) throw DomainError("config: kmeans_restarts must be at least 1");
}

std::vector<std::string> ExperimentConfig::effective_detectors() const {
    if (!detectors.empty()) return detectors;
    switch (experiment) {
        case ExperimentKind::convergence: return {"kmeans", "em"};
        case ExperimentKind::threshold_sweep: return {"dfs"};
        case ExperimentKind::distribution_check: return kDistributionDetectors;
        case ExperimentKind::bits_end_to_end: return {"kmeans"};
        default: return {"kmeans", "dfs", "ml_genie"};
    }
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = (p + z * z / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        out << fmt(r.sweep_value) << ',' << r.detector << ',' << fmt(r.success_prob) << ',' << fmt(r.ci_lo) << ','
            << fmt(r.ci_hi) << ',' << fmt(r.symbol_error_rate) << ',' << fmt(r.mean_iterations) << ','
            << (r.bound_value ? fmt(*r.bound_value) : "") << ',' << r.trials << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string csv_path(const ExperimentConfig& config) {
    return (std::filesystem::path(config.output_dir) / (to_string(config.experiment) + ".csv")).string();
}

Codebook experiment_codebook(const ExperimentConfig& config, int L) {
    PackingOptions opt{L, config.params.T, config.params.Nt, config.packing.restarts, config.packing.iterations};
    Rng rng = Rng::derive(config.seed, {kPackKey, static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(config.params.T),
                                        static_cast<std::uint64_t>(config.params.Nt)});
    return pack_codebook(opt, rng);
}

AnalysisParams analysis_params_for(const ExperimentConfig& config, const SystemParams& point, double gamma0) {
    AnalysisParams ap;
    ap.rho = point.rho;
    ap.T = point.T;
    ap.Nt = point.Nt;
    ap.lambda_bar = lambda_bar_for(config, point);
    ap.L = point.L;
    ap.N = point.N;
    ap.gamma0 = gamma0;
    ap.eta_D = config.analysis.eta_D;
    ap.epsilon = config.analysis.epsilon;
    ap.delta = config.analysis.delta;
    ap.convention = config.analysis.convention;
    ap.a = config.analysis.a ? *config.analysis.a : choose_disk_constant(ap);
    return ap;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const std::string path = csv_path(config);
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    std::ofstream csv(path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write " + path);

    const std::vector<std::string> detectors = config.effective_detectors();
    const std::size_t grid = config.sweep.values.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<Point> points;
    for (double v : config.sweep.values) points.push_back(point_at(config, v));

    // Shared read-only state, built serially before the trial pool starts.
    std::map<int, Codebook> books;
    for (const Point& p : points) {
        if (books.count(p.params.L)) continue;
        books.emplace(p.params.L, config.experiment == ExperimentKind::bits_end_to_end
                                      ? bits_codebook(config, p.params.L)
                                      : experiment_codebook(config, p.params.L));
    }

    std::vector<ResultRow> rows;
    if (config.experiment == ExperimentKind::distribution_check) {
        const SystemParams& sp = config.params;
        const double lambda_bar = lambda_bar_for(config, sp);
        std::vector<double> empirical(trials), surrogate(trials);
        parallel_for(trials, config.threads, [&](std::size_t t) {
            Rng rng = Rng::derive(config.seed, {kSampleKey, t});
            const GrassmannPoint x = random_uniform_point(sp.T, sp.Nt, rng);
            empirical[t] = procrustes_distance(project_symbol(transmit_symbol(x, sp, rng).y, sp.Nt), x);
            surrogate[t] = procrustes_distance(approx_received(x, sp, lambda_bar, rng), x);
        });
        AnalysisParams ap = analysis_params_for(config, sp, config.analysis.gamma0);
        for (const Point& pt : points) {
            for (const std::string& d : detectors) {
                const auto& s = d == "empirical" ? empirical : surrogate;
                const auto k = static_cast<std::size_t>(
                    std::count_if(s.begin(), s.end(), [&](double v) { return v >= pt.radius; }));
                const auto [lo, hi] = wilson_interval(k, trials);
                rows.push_back(ResultRow{pt.radius, d, static_cast<double>(k) / static_cast<double>(trials), lo, hi, 0.0,
                                         0.0, distance_tail(pt.radius, ap), config.trials, config.seed});
            }
        }
    } else {
        std::vector<std::vector<Outcome>> outcomes(grid * trials);
        std::vector<std::optional<BitMapping>> mappings(grid);
        if (config.experiment == ExperimentKind::bits_end_to_end) {
            for (std::size_t g = 0; g < grid; ++g) {
                const Codebook& book = books.at(points[g].params.L);
                mappings[g] = build_bit_mapping(book, fourier_reference(config.params.T, config.params.Nt));
            }
        }
        parallel_for(grid * trials, config.threads, [&](std::size_t idx) {
            const std::size_t g = idx / trials;
            const std::size_t t = idx % trials;
            const Point& pt = points[g];
            const Codebook& book = books.at(pt.params.L);
            if (config.experiment == ExperimentKind::bits_end_to_end) {
                outcomes[idx] = {bits_trial(pt, book, *mappings[g], config.seed, g, t)};
            } else {
                outcomes[idx] = cluster_trial(config, pt, book, detectors, g, t);
            }
        });

        for (std::size_t g = 0; g < grid; ++g) {
            const Point& pt = points[g];
            const Codebook& book = books.at(pt.params.L);
            const AnalysisParams ap = analysis_params_for(config, pt.params, pt.gamma0);
            const double d_min = bound_d_min(config, book, pt.params.L);
            for (std::size_t d = 0; d < detectors.size(); ++d) {
                std::size_t successes = 0;
                double err = 0.0;
                double iters = 0.0;
                for (std::size_t t = 0; t < trials; ++t) {
                    const Outcome& o = outcomes[g * trials + t][d];
                    successes += o.success ? 1 : 0;
                    err += o.error_rate;
                    iters += o.iterations;
                }
                std::optional<double> bound;
                if (config.experiment != ExperimentKind::bits_end_to_end) {
                    if (detectors[d] == "kmeans") bound = kmeans_separability_bound(d_min, ap).value;
                    if (detectors[d] == "dfs") bound = dfs_bound(d_min, ap);
                }
                const auto [lo, hi] = wilson_interval(successes, trials);
                const double n = static_cast<double>(trials);
                rows.push_back(ResultRow{config.sweep.values[g], detectors[d], static_cast<double>(successes) / n, lo, hi,
                                         err / n, iters / n, bound, config.trials, config.seed});
            }
        }
    }

    csv << format_csv(rows);
    csv.close();
    if (!csv) throw IoError("write failed: " + path);
    if (config.emit_svg) {
        const std::string svg_path =
            (std::filesystem::path(config.output_dir) / (to_string(config.experiment) + ".svg")).string();
        std::ofstream svg(svg_path, std::ios::binary | std::ios::trunc);
        if (!svg) throw IoError("cannot write " + svg_path);
        svg << emit_plot(rows, PlotSpec{to_string(config.experiment), config.sweep.axis,
                                        config.experiment == ExperimentKind::distribution_check ? "Pr(d_p >= r)"
                                                                                                : "success probability"});
    }
    return rows;
}

std::vector<BoundsRow> evaluate_bounds(const ExperimentConfig& config) {
    config.validate();
    std::vector<BoundsRow> out;
    std::map<int, Codebook> books;
    for (double v : config.sweep.values) {
        const Point pt = point_at(config, v);
        auto it = books.find(pt.params.L);
        if (it == books.end()) it = books.emplace(pt.params.L, experiment_codebook(config, pt.params.L)).first;
        const AnalysisParams ap = analysis_params_for(config, pt.params, pt.gamma0);
        BoundsRow row;
        row.sweep_value = v;
        row.lambda_bar = ap.lambda_bar;
        row.a = ap.a;
        row.d_min = bound_d_min(config, it->second, pt.params.L);
        row.kmeans = kmeans_separability_bound(row.d_min, ap);
        if (ap.gamma0 < row.d_min) row.dfs = dfs_separability_bound(row.d_min, ap);
        if (ap.disk_radius() >= ap.gamma0 / 2.0) row.connectivity = connectivity_bound(ap);
        out.push_back(row);
    }
    return out;
}

}  // namespace grassmod
