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

#include "grassmod/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace grassmod {

namespace {

void require_projections(const SymbolBlock& block) {
    if (block.projections.size() != block.received.size() || block.projections.empty()) {
        throw DomainError("detector: block projections missing (call project_block)");
    }
}

std::size_t argmax_lowest(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > v[best]) best = k;
    }
    return best;
}

double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

GrassmannPoint karcher_or_last(std::span<const GrassmannPoint> points, const KarcherOptions& options) {
    try {
        return karcher_mean(points, options).mean;
    } catch (const KarcherConvergenceError& e) {
        return e.last_iterate();
    }
}

}  // namespace

double log_likelihood(const CMatrix& y, const GrassmannPoint& x, const SystemParams& params) {
    const CMatrix& g = x.generator();
    if (y.rows() != g.rows() || g.cols() != params.Nt || y.rows() != params.T || y.cols() != params.Nr) {
        throw DomainError("log_likelihood: shape mismatch");
    }
    const double s2 = static_cast<double>(params.Nt) / (params.rho * static_cast<double>(params.T));
    const double kappa = 1.0 / (1.0 + s2);
    const double quad = (y.squaredNorm() - kappa * (g.adjoint() * y).squaredNorm()) / s2;
    const auto T = static_cast<double>(params.T);
    const auto Nt = static_cast<double>(params.Nt);
    const auto Nr = static_cast<double>(params.Nr);
    return -quad - T * Nr * std::log(std::numbers::pi * s2) - Nt * Nr * std::log1p(1.0 / s2);
}

std::vector<std::size_t> ml_symbol_detect(const SymbolBlock& block, std::span<const GrassmannPoint> codewords) {
    if (codewords.empty()) throw DomainError("ml_symbol_detect: empty codebook");
    std::vector<std::size_t> labels;
    labels.reserve(block.size());
    std::vector<double> stat(codewords.size());
    for (const CMatrix& y : block.received) {
        for (std::size_t l = 0; l < codewords.size(); ++l) stat[l] = (codewords[l].generator().adjoint() * y).squaredNorm();
        labels.push_back(argmax_lowest(stat));
    }
    return labels;
}

std::vector<std::size_t> ml_symbol_detect(const SymbolBlock& block, const Codebook& book) {
    return ml_symbol_detect(block, std::span<const GrassmannPoint>(book.codewords()));
}

std::vector<std::size_t> hard_assign(const SymbolBlock& block, std::span<const GrassmannPoint> codewords,
                                     Metric metric) {
    require_projections(block);
    if (codewords.empty()) throw DomainError("hard_assign: empty codebook");
    std::vector<std::size_t> labels;
    labels.reserve(block.size());
    for (const GrassmannPoint& p : block.projections) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < codewords.size(); ++l) {
            const double d = distance(metric, p, codewords[l]);
            if (d < best_d) {
                best_d = d;
                best = l;
            }
        }
        labels.push_back(best);
    }
    return labels;
}

std::vector<GrassmannPoint> seed_codewords(const SymbolBlock& block, int L, Metric metric, Rng& rng) {
    require_projections(block);
    const std::size_t n = block.size();
    if (L < 1 || static_cast<std::size_t>(L) > n) throw DomainError("seed_codewords: requires 1 <= L <= N");
    // Greedy variant: each step draws 2 + floor(ln L) D^2-weighted candidates
    // and keeps the one leaving the smallest potential sum_i min d^2.
    const int tries = 2 + static_cast<int>(std::floor(std::log(static_cast<double>(L))));
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::vector<double> trial(n), best_d2(n);
    std::vector<GrassmannPoint> out;
    auto draw = [&]() -> std::size_t {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || d2[i] <= 0.0) continue;
                acc += d2[i];
                pick = i;
                if (acc > u) break;
            }
            return pick;
        }
        std::size_t r = rng.uniform_index(n - out.size());
        std::size_t pick = 0;
        for (; chosen[pick] || r-- > 0; ++pick) {
        }
        return pick;
    };
    for (int k = 0; k < L; ++k) {
        std::size_t pick = n;
        if (k == 0) {
            pick = rng.uniform_index(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double d = distance(metric, block.projections[i], block.projections[pick]);
                best_d2[i] = d * d;
            }
        } else {
            double best_potential = std::numeric_limits<double>::infinity();
            for (int t = 0; t < tries; ++t) {
                const std::size_t c = draw();
                double potential = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = distance(metric, block.projections[i], block.projections[c]);
                    trial[i] = std::min(d2[i], d * d);
                    potential += trial[i];
                }
                if (potential < best_potential) {
                    best_potential = potential;
                    pick = c;
                    best_d2.swap(trial);
                }
            }
        }
        chosen[pick] = true;
        out.push_back(block.projections[pick]);
        d2 = best_d2;
        d2[pick] = 0.0;
    }
    return out;
}

std::vector<GrassmannPoint> sample_codewords(const SymbolBlock& block, int L, Rng& rng) {
    require_projections(block);
    const std::size_t n = block.size();
    if (L < 1 || static_cast<std::size_t>(L) > n) throw DomainError("sample_codewords: requires 1 <= L <= N");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<GrassmannPoint> out;
    for (std::size_t k = 0; k < static_cast<std::size_t>(L); ++k) {
        std::swap(idx[k], idx[k + rng.uniform_index(n - k)]);
        out.push_back(block.projections[idx[k]]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// EM

ClusterAssignment em_fit(const SymbolBlock& block, int L, const SystemParams& params, const EmOptions& options,
                         Rng& rng) {
    const std::size_t n = block.size();
    if (L < 1 || static_cast<std::size_t>(L) > n) throw DomainError("em_fit: requires 1 <= L <= N");
    if (options.max_iter < 1 || !(options.tol >= 0.0)) throw DomainError("em_fit: invalid options");
    const auto nl = static_cast<std::size_t>(L);

    ClusterAssignment out;
    if (options.init) {
        out.codewords = *options.init;
        if (out.codewords.size() != nl) throw DomainError("em_fit: init size differs from L");
    } else {
        out.codewords = seed_codewords(block, L, Metric::geodesic, rng);
    }

    const double s2 = static_cast<double>(params.Nt) / (params.rho * static_cast<double>(params.T));
    const double gain = 1.0 / (s2 * (1.0 + s2));
    const auto T = static_cast<double>(params.T);
    const auto Nt = static_cast<double>(params.Nt);
    const auto Nr = static_cast<double>(params.Nr);
    const double constant = -T * Nr * std::log(std::numbers::pi * s2) - Nt * Nr * std::log1p(1.0 / s2);

    std::vector<CMatrix> scatter(n);
    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CMatrix& y = block.received[i];
        if (y.rows() != params.T || y.cols() != params.Nr) throw DomainError("em_fit: symbol shape mismatch");
        scatter[i] = y * y.adjoint();
        base[i] = constant - y.squaredNorm() / s2;
    }

    std::vector<double> log_prior(nl, -std::log(static_cast<double>(L)));
    out.soft.resize(static_cast<Eigen::Index>(n), L);
    std::vector<double> row(nl);
    std::vector<double> explained(n);
    double previous = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        // E-step.
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < nl; ++l) {
                const CMatrix& g = out.codewords[l].generator();
                row[l] = log_prior[l] + gain * (g.adjoint() * scatter[i] * g).trace().real();
            }
            const double lse = log_sum_exp(row);
            for (std::size_t l = 0; l < nl; ++l) out.soft(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = std::exp(row[l] - lse);
            explained[i] = lse + base[i];
            ll += explained[i];
        }
        out.objective_trace.push_back(ll);
        out.iterations = iter;
        if (ll - previous < options.tol) {
            out.converged = true;
            break;
        }
        previous = ll;
        if (iter == options.max_iter) break;

        // M-step.
        for (std::size_t l = 0; l < nl; ++l) {
            const auto col = static_cast<Eigen::Index>(l);
            const double weight = out.soft.col(col).sum();
            if (weight < 1e-9) {
                const auto worst = static_cast<std::size_t>(
                    std::min_element(explained.begin(), explained.end()) - explained.begin());
                out.codewords[l] = block.projections.empty() ? project_symbol(block.received[worst], params.Nt)
                                                             : block.projections[worst];
                explained[worst] = std::numeric_limits<double>::infinity();
                ++out.reseeds;
                continue;
            }
            CMatrix s = CMatrix::Zero(params.T, params.T);
            for (std::size_t i = 0; i < n; ++i) s += out.soft(static_cast<Eigen::Index>(i), col) * scatter[i];
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(s);
            out.codewords[l] = GrassmannPoint::span_of(eig.eigenvectors().rightCols(params.Nt));
            if (options.estimate_priors) log_prior[l] = std::log(weight / static_cast<double>(n));
        }
    }

    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        out.soft.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
        out.labels[i] = static_cast<std::size_t>(best);
    }
    return out;
}

// ---------------------------------------------------------------------------
// K-means

namespace {

// Re-seeds every empty cluster at the symbol farthest from its codeword.
int reseed_empty(const SymbolBlock& block, std::vector<std::size_t>& labels, std::vector<GrassmannPoint>& codewords,
                 Metric metric) {
    int reseeds = 0;
    for (std::size_t l = 0; l < codewords.size(); ++l) {
        if (std::find(labels.begin(), labels.end(), l) != labels.end()) continue;
        std::vector<std::size_t> count(codewords.size(), 0);
        for (std::size_t lab : labels) ++count[lab];
        std::size_t far = block.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (count[labels[i]] < 2) continue;  // never empty another cluster
            const double d = distance(metric, block.projections[i], codewords[labels[i]]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == block.size()) continue;
        codewords[l] = block.projections[far];
        labels[far] = l;
        ++reseeds;
    }
    return reseeds;
}

double kmeans_objective(const SymbolBlock& block, const std::vector<std::size_t>& labels,
                        const std::vector<GrassmannPoint>& codewords, Metric metric) {
    double total = 0.0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        const double d = distance(metric, block.projections[i], codewords[labels[i]]);
        total += d * d;
    }
    return total;
}

ClusterAssignment kmeans_single(const SymbolBlock& block, std::vector<GrassmannPoint> codewords,
                                const KMeansOptions& options) {
    ClusterAssignment out;
    const std::size_t nl = codewords.size();
    std::vector<std::size_t> labels = hard_assign(block, codewords, options.metric);
    out.reseeds += reseed_empty(block, labels, codewords, options.metric);
    std::vector<GrassmannPoint> members;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        for (std::size_t l = 0; l < nl; ++l) {
            members.clear();
            for (std::size_t i = 0; i < block.size(); ++i) {
                if (labels[i] == l) members.push_back(block.projections[i]);
            }
            if (members.empty()) continue;
            KarcherOptions karcher = options.karcher;
            karcher.init = codewords[l];
            codewords[l] = karcher_or_last(members, karcher);
        }
        out.objective_trace.push_back(kmeans_objective(block, labels, codewords, options.metric));
        out.iterations = iter;
        std::vector<std::size_t> next = hard_assign(block, codewords, options.metric);
        out.reseeds += reseed_empty(block, next, codewords, options.metric);
        if (next == labels) {
            out.converged = true;
            break;
        }
        labels = std::move(next);
    }
    out.labels = std::move(labels);
    out.codewords = std::move(codewords);
    return out;
}

}  // namespace

ClusterAssignment kmeans_fit(const SymbolBlock& block, int L, Rng& rng, const KMeansOptions& options) {
    require_projections(block);
    if (L < 1 || static_cast<std::size_t>(L) > block.size()) throw DomainError("kmeans_fit: requires 1 <= L <= N");
    if (options.max_iter < 1 || options.restarts < 1) throw DomainError("kmeans_fit: invalid options");
    std::optional<ClusterAssignment> best;
    for (int r = 0; r < options.restarts; ++r) {
        std::vector<GrassmannPoint> init;
        if (r == 0 && options.initial_codewords) {
            init = *options.initial_codewords;
            if (init.size() != static_cast<std::size_t>(L)) throw DomainError("kmeans_fit: init size differs from L");
        } else if (options.init == KMeansInit::plus_plus) {
            init = seed_codewords(block, L, options.metric, rng);
        } else {
            init = sample_codewords(block, L, rng);
        }
        ClusterAssignment fit = kmeans_single(block, std::move(init), options);
        if (!best || fit.objective_trace.back() < best->objective_trace.back()) best = std::move(fit);
    }
    return std::move(*best);
}

// ---------------------------------------------------------------------------
// DFS

namespace {

// Flat N x N adjacency via the cross-Gram matrix: d_p^2 = Nt - ||a^H b||_F^2.
std::vector<std::uint8_t> adjacency_flat(std::span<const GrassmannPoint> points, double gamma0) {
    const std::size_t n = points.size();
    const Eigen::Index t = points.front().ambient_dim();
    const Eigen::Index k = points.front().subspace_dim();
    CMatrix stacked(t, static_cast<Eigen::Index>(n) * k);
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].ambient_dim() != t || points[i].subspace_dim() != k) {
            throw DomainError("adjacency: points differ in shape");
        }
        stacked.middleCols(static_cast<Eigen::Index>(i) * k, k) = points[i].generator();
    }
    CMatrix gram(stacked.cols(), stacked.cols());
    gram.noalias() = stacked.adjoint() * stacked;
    const double threshold = static_cast<double>(k) - gamma0 * gamma0;
    std::vector<std::uint8_t> adj(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        adj[i * n + i] = 1;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double overlap =
                gram.block(static_cast<Eigen::Index>(i) * k, static_cast<Eigen::Index>(j) * k, k, k).squaredNorm();
            if (overlap >= threshold) adj[i * n + j] = adj[j * n + i] = 1;
        }
    }
    return adj;
}

}  // namespace

std::vector<std::vector<std::uint8_t>> adjacency_matrix(std::span<const GrassmannPoint> points, double gamma0) {
    if (points.empty()) return {};
    const std::size_t n = points.size();
    const std::vector<std::uint8_t> flat = adjacency_flat(points, gamma0);
    std::vector<std::vector<std::uint8_t>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                      flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    return out;
}

ClusterAssignment dfs_fit(const SymbolBlock& block, double gamma0, const KarcherOptions& karcher) {
    require_projections(block);
    if (!(gamma0 > 0.0)) throw DomainError("dfs_fit: gamma0 must be positive");
    const std::size_t n = block.size();
    const std::vector<std::uint8_t> adj = adjacency_flat(block.projections, gamma0);

    constexpr std::size_t kUnlabeled = std::numeric_limits<std::size_t>::max();
    ClusterAssignment out;
    out.labels.assign(n, kUnlabeled);
    std::vector<std::size_t> stack;
    std::size_t components = 0;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (out.labels[seed] != kUnlabeled) continue;
        out.labels[seed] = components;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (adj[u * n + v] && out.labels[v] == kUnlabeled) {
                    out.labels[v] = components;
                    stack.push_back(v);
                }
            }
        }
        ++components;
    }

    std::vector<std::vector<GrassmannPoint>> members(components);
    for (std::size_t i = 0; i < n; ++i) members[out.labels[i]].push_back(block.projections[i]);
    for (const auto& m : members) out.codewords.push_back(karcher_or_last(m, karcher));
    out.iterations = 1;
    out.converged = true;
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

DetectionReport evaluate(const ClusterAssignment& assignment, const SymbolBlock& block, const Codebook& book_true,
                         double match_tol) {
    if (block.true_indices.size() != assignment.labels.size()) {
        throw DomainError("evaluate: labels and ground truth differ in length");
    }
    const std::size_t khat = assignment.codewords.size();
    const std::size_t ltrue = book_true.size();
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < khat; ++k) {
        for (std::size_t l = 0; l < ltrue; ++l) {
            const double d = procrustes_distance(assignment.codewords[k], book_true[l]);
            if (d <= match_tol) pairs.emplace_back(d, k, l);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    DetectionReport report;
    report.size_estimate = khat;
    report.matching.assign(khat, std::nullopt);
    std::vector<bool> taken(ltrue, false);
    for (const auto& [d, k, l] : pairs) {
        if (report.matching[k] || taken[l]) continue;
        report.matching[k] = l;
        taken[l] = true;
        ++report.matched;
    }

    std::size_t errors = 0;
    for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
        const std::size_t lab = assignment.labels[i];
        const bool ok = lab < khat && report.matching[lab] && *report.matching[lab] == block.true_indices[i];
        if (!ok) ++errors;
    }
    const std::size_t n = assignment.labels.size();
    report.symbol_error_rate = n == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(n);
    report.success = khat == ltrue && report.matched == ltrue && errors == 0;
    return report;
}

DetectionReport evaluate(const ClusterAssignment& assignment, const SymbolBlock& block, const Codebook& book_true) {
    return evaluate(assignment, block, book_true, book_true.d_min() / 2.0);
}

std::vector<std::uint8_t> decode_bits(const ClusterAssignment& assignment, const GrassmannPoint& reference,
                                      double min_gap) {
    const BitMapping mapping = build_bit_mapping(assignment.codewords, reference, min_gap);
    std::vector<std::uint8_t> bits;
    bits.reserve(assignment.labels.size() * static_cast<std::size_t>(mapping.bits_per_symbol()));
    for (std::size_t lab : assignment.labels) append_label_bits(mapping.label_for_codeword(lab), mapping.bits_per_symbol(), bits);
    return bits;
}

}  // namespace grassmod
