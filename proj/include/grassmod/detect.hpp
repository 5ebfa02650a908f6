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
#include <span>
#include <vector>

#include "grassmod/channel.hpp"

namespace grassmod {

/// Output of a clustering detector. `soft` is N x L responsibilities for EM
/// and empty otherwise. codewords.size() is the size estimate L-hat, which
/// may be 1 for DFS, so this is not a Codebook.
struct ClusterAssignment {
    Eigen::MatrixXd soft;
    std::vector<std::size_t> labels;
    std::vector<GrassmannPoint> codewords;
    int iterations = 0;
    std::vector<double> objective_trace;
    int reseeds = 0;  // empty clusters re-seeded during the fit
    bool converged = false;

    std::size_t size_estimate() const { return codewords.size(); }
};

/// log p(y | x) for Y = X H + sqrt(Nt/(rho T)) W with H, W i.i.d. CN(0,1):
/// each column of y is CN(0, x x^H + (Nt/(rho T)) I).
double log_likelihood(const CMatrix& y, const GrassmannPoint& x, const SystemParams& params);

/// Per-symbol argmax of tr{y^H x x^H y} over a known codebook; lowest index
/// wins ties.
std::vector<std::size_t> ml_symbol_detect(const SymbolBlock& block, std::span<const GrassmannPoint> codewords);
std::vector<std::size_t> ml_symbol_detect(const SymbolBlock& block, const Codebook& book);

/// Per-symbol argmin of the metric distance to `codewords`; lowest index wins
/// ties. Needs block.projections.
std::vector<std::size_t> hard_assign(const SymbolBlock& block, std::span<const GrassmannPoint> codewords,
                                     Metric metric = Metric::geodesic);

/// L distinct projections by greedy k-means++ (first uniformly). Falls
/// back to uniform among unchosen symbols once all remaining weight is zero.
std::vector<GrassmannPoint> seed_codewords(const SymbolBlock& block, int L, Metric metric, Rng& rng);

/// L distinct projections drawn uniformly without replacement.
std::vector<GrassmannPoint> sample_codewords(const SymbolBlock& block, int L, Rng& rng);

struct EmOptions {
    int max_iter = 200;
    /// Stop when the observed-data log-likelihood improves by less than tol.
    double tol = 1e-6;
    /// Starting codebook; k-means++-style seeding from the data when empty.
    std::optional<std::vector<GrassmannPoint>> init;
    bool estimate_priors = false;
};

/// EM for the Gaussian mixture of received symbols. E-step in the log domain
/// with per-row max subtraction; M-step per codeword is the dominant Nt-dim
/// eigenspace of sum_i r_il Y_i Y_i^H. objective_trace holds the observed-data
/// log-likelihood after each E-step.
ClusterAssignment em_fit(const SymbolBlock& block, int L, const SystemParams& params, const EmOptions& options,
                         Rng& rng);

enum class KMeansInit { plus_plus, uniform };

struct KMeansOptions {
    int max_iter = 50;
    int restarts = 1;
    KMeansInit init = KMeansInit::plus_plus;
    Metric metric = Metric::geodesic;
    /// Starting codebook for the first restart.
    std::optional<std::vector<GrassmannPoint>> initial_codewords;
    KarcherOptions karcher;
};

/// Grassmann K-means: alternate nearest-codeword assignment and per-cluster
/// Karcher means (warm-started at the current codeword) until the labels stop
/// changing. objective_trace holds sum_i d^2(Y_i, mu_label(i)) after each
/// update step. With restarts > 1 the fit with the smallest final objective
/// is kept.
ClusterAssignment kmeans_fit(const SymbolBlock& block, int L, Rng& rng, const KMeansOptions& options = {});

/// Symmetric 0/1 adjacency d_p(Y_i, Y_j) <= gamma0 between projections.
std::vector<std::vector<std::uint8_t>> adjacency_matrix(std::span<const GrassmannPoint> points, double gamma0);

/// Connected components of the Procrustes gamma0-graph by iterative DFS from
/// the lowest unlabeled symbol; codewords are per-component Karcher means.
ClusterAssignment dfs_fit(const SymbolBlock& block, double gamma0, const KarcherOptions& karcher = {});

struct DetectionReport {
    bool success = false;
    double symbol_error_rate = 1.0;
    std::size_t size_estimate = 0;
    /// matching[k] = true codeword index of estimated codeword k, if matched.
    std::vector<std::optional<std::size_t>> matching;
    std::size_t matched = 0;
};

/// Greedy minimum-distance matching of estimated to true codewords, pairs
/// accepted only when d_p <= match_tol. A symbol is correct when its label is
/// matched to its true index.
DetectionReport evaluate(const ClusterAssignment& assignment, const SymbolBlock& block, const Codebook& book_true,
                         double match_tol);

/// evaluate with match_tol = d_min / 2.
DetectionReport evaluate(const ClusterAssignment& assignment, const SymbolBlock& block, const Codebook& book_true);

/// Bits carried by each symbol's label rank among the estimated codewords
/// sorted by distance to `reference`. Throws SizeError / TieError.
std::vector<std::uint8_t> decode_bits(const ClusterAssignment& assignment, const GrassmannPoint& reference,
                                      double min_gap = kDecodeMinGap);

}  // namespace grassmod
