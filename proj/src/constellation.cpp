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

#include "grassmod/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "grassmod/parallel.hpp"

namespace grassmod {

Codebook::Codebook(std::vector<GrassmannPoint> codewords) : codewords_(std::move(codewords)) {
    if (codewords_.size() < 2) throw DomainError("Codebook: need at least two codewords");
    for (const GrassmannPoint& c : codewords_) {
        if (c.ambient_dim() != codewords_.front().ambient_dim() ||
            c.subspace_dim() != codewords_.front().subspace_dim()) {
            throw DomainError("Codebook: codewords differ in shape");
        }
    }
    d_min_ = min_pairwise_distance(codewords_);
    if (!(d_min_ > 0.0)) throw DomainError("Codebook: duplicate codewords (d_min = 0)");
}

double min_pairwise_distance(std::span<const GrassmannPoint> points, Metric metric) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::min(best, distance(metric, points[i], points[j]));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Packing

namespace {

GrassmannPoint step_away(const GrassmannPoint& from, const GrassmannPoint& other, double step, Rng& rng) {
    CMatrix direction = detail::log_map_unchecked(from, other);
    double n = direction.norm();
    if (n < 1e-14) {
        // Coincident pair: any tangent direction separates them.
        const CMatrix& g = from.generator();
        CMatrix z = sample_gaussian_matrix(g.rows(), g.cols(), 1.0, rng);
        direction = z - g * (g.adjoint() * z);
        n = direction.norm();
        direction = -direction;
    }
    return exp_map(from, TangentVector(from, direction * (-step / n)));
}

struct RestartOutcome {
    std::vector<GrassmannPoint> best;
    double best_d_min = 0.0;
};

RestartOutcome run_restart(const PackingOptions& o, Rng rng) {
    std::vector<GrassmannPoint> pts;
    pts.reserve(o.L);
    for (int i = 0; i < o.L; ++i) pts.push_back(random_uniform_point(o.T, o.Nt, rng));

    const std::size_t n = pts.size();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = procrustes_distance(pts[i], pts[j]);
    }
    auto refresh_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) dist(i, j) = dist(j, i) = procrustes_distance(pts[i], pts[j]);
        }
    };

    RestartOutcome out{pts, dist.minCoeff()};
    const double decay = std::pow(o.final_step / o.initial_step, 1.0 / std::max(1, o.iterations));
    double step = o.initial_step;
    for (int it = 0; it < o.iterations; ++it) {
        Eigen::Index ci = 0, cj = 0;
        dist.minCoeff(&ci, &cj);
        const auto i = static_cast<std::size_t>(std::min(ci, cj));
        const auto j = static_cast<std::size_t>(std::max(ci, cj));
        GrassmannPoint moved_i = step_away(pts[i], pts[j], step, rng);
        GrassmannPoint moved_j = step_away(pts[j], pts[i], step, rng);
        pts[i] = std::move(moved_i);
        pts[j] = std::move(moved_j);
        refresh_row(i);
        refresh_row(j);
        const double d = dist.minCoeff();
        if (d > out.best_d_min) {
            out.best_d_min = d;
            out.best = pts;
        }
        step *= decay;
    }
    return out;
}

}  // namespace

PackingResult pack_codebook_detailed(const PackingOptions& o, Rng& rng) {
    if (o.L < 2) throw DomainError("pack_codebook: L must be at least 2");
    if (o.Nt < 1 || o.T <= o.Nt) throw DomainError("pack_codebook: requires T > Nt >= 1");
    if (log2_exact(static_cast<std::size_t>(o.L)) < 0) throw DomainError("pack_codebook: L must be a power of two");
    if (o.restarts < 1 || o.iterations < 0) throw DomainError("pack_codebook: invalid restart/iteration counts");

    const std::uint64_t base = rng.next_u64();
    std::vector<RestartOutcome> outcomes(o.restarts);
    parallel_for(outcomes.size(), o.threads,
                 [&](std::size_t r) { outcomes[r] = run_restart(o, Rng::derive(base, {r})); });

    std::size_t best = 0;
    std::vector<double> per_restart;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        per_restart.push_back(outcomes[r].best_d_min);
        if (outcomes[r].best_d_min > outcomes[best].best_d_min) best = r;
    }
    return PackingResult{Codebook(std::move(outcomes[best].best)), std::move(per_restart)};
}

Codebook pack_codebook(const PackingOptions& options, Rng& rng) {
    return pack_codebook_detailed(options, rng).book;
}

double min_distance_bound(int L, Eigen::Index T, Eigen::Index Nt) {
    if (L < 2 || Nt < 1 || T <= Nt) throw DomainError("min_distance_bound: requires L >= 2, T > Nt >= 1");
    const double exponent = 1.0 / static_cast<double>(T * Nt);
    return 4.0 * static_cast<double>(Nt) * std::pow(1.0 / L, exponent);
}

GrassmannPoint fourier_reference(Eigen::Index T, Eigen::Index Nt) {
    if (Nt < 1 || T <= Nt) throw DomainError("fourier_reference: requires T > Nt >= 1");
    CMatrix f(T, Nt);
    const double scale = 1.0 / std::sqrt(static_cast<double>(T));
    for (Eigen::Index j = 0; j < T; ++j) {
        for (Eigen::Index k = 0; k < Nt; ++k) {
            // Reduce j*k mod T first so the phase is exact for small T.
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((j * k) % T) / static_cast<double>(T);
            f(j, k) = std::polar(scale, phase);
        }
    }
    return GrassmannPoint(std::move(f));
}

// ---------------------------------------------------------------------------
// Bit mapping

int log2_exact(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) return -1;
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    return bits;
}

void append_label_bits(std::uint32_t label, int bits, std::vector<std::uint8_t>& out) {
    for (int b = bits - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
}

std::vector<RankedDistance> rank_by_reference(std::span<const GrassmannPoint> points,
                                              const GrassmannPoint& reference) {
    std::vector<RankedDistance> ranked;
    ranked.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) ranked.push_back({procrustes_distance(points[i], reference), i});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedDistance& a, const RankedDistance& b) { return a.distance < b.distance; });
    return ranked;
}

double min_adjacent_gap(std::span<const GrassmannPoint> points, const GrassmannPoint& reference) {
    const auto ranked = rank_by_reference(points, reference);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < ranked.size(); ++k) gap = std::min(gap, ranked[k].distance - ranked[k - 1].distance);
    return gap;
}

BitMapping::BitMapping(GrassmannPoint reference, std::vector<std::size_t> order, std::vector<double> sorted_distances)
    : reference_(std::move(reference)),
      order_(std::move(order)),
      rank_(order_.size()),
      sorted_distances_(std::move(sorted_distances)),
      bits_per_symbol_(log2_exact(order_.size())) {
    if (bits_per_symbol_ < 0) throw SizeError("BitMapping: size must be a power of two");
    std::vector<bool> seen(order_.size(), false);
    for (std::size_t r = 0; r < order_.size(); ++r) {
        if (order_[r] >= order_.size() || seen[order_[r]]) throw DomainError("BitMapping: order is not a permutation");
        seen[order_[r]] = true;
        rank_[order_[r]] = static_cast<std::uint32_t>(r);
    }
}

std::vector<std::size_t> BitMapping::encode(std::span<const std::uint8_t> bits) const {
    const auto b = static_cast<std::size_t>(bits_per_symbol_);
    if (b == 0 || bits.size() % b != 0) throw DomainError("BitMapping::encode: bit count not a multiple of symbol size");
    std::vector<std::size_t> out;
    out.reserve(bits.size() / b);
    for (std::size_t s = 0; s < bits.size(); s += b) {
        std::uint32_t label = 0;
        for (std::size_t k = 0; k < b; ++k) label = (label << 1) | (bits[s + k] & 1u);
        out.push_back(codeword_for_label(label));
    }
    return out;
}

std::vector<std::uint8_t> BitMapping::decode(std::span<const std::size_t> codeword_indices) const {
    std::vector<std::uint8_t> out;
    out.reserve(codeword_indices.size() * static_cast<std::size_t>(bits_per_symbol_));
    for (std::size_t idx : codeword_indices) append_label_bits(label_for_codeword(idx), bits_per_symbol_, out);
    return out;
}

BitMapping build_bit_mapping(std::span<const GrassmannPoint> codewords, const GrassmannPoint& reference,
                             double min_gap) {
    if (log2_exact(codewords.size()) < 0) throw SizeError("build_bit_mapping: constellation size not a power of two");
    const auto ranked = rank_by_reference(codewords, reference);
    std::vector<std::size_t> order;
    std::vector<double> sorted;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        if (k > 0 && ranked[k].distance - ranked[k - 1].distance < min_gap) {
            throw TieError("build_bit_mapping: distances to reference closer than min_gap");
        }
        order.push_back(ranked[k].index);
        sorted.push_back(ranked[k].distance);
    }
    return BitMapping(reference, std::move(order), std::move(sorted));
}

BitMapping build_bit_mapping(const Codebook& book, const GrassmannPoint& reference, double min_gap) {
    return build_bit_mapping(std::span<const GrassmannPoint>(book.codewords()), reference, min_gap);
}

Codebook select_codebook_for_reference(std::span<const Codebook> candidates, const GrassmannPoint& reference) {
    if (candidates.empty()) throw DomainError("select_codebook_for_reference: no candidates");
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double gap = min_adjacent_gap(candidates[i].codewords(), reference);
        if (gap > best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return candidates[best];
}

Codebook orient_codebook_for_reference(const Codebook& book, const GrassmannPoint& reference, Rng& rng,
                                       const OrientOptions& options) {
    if (options.starts < 1 || options.iterations < 0 || !(options.step > 0.0)) {
        throw DomainError("orient_codebook_for_reference: invalid options");
    }
    const Eigen::Index t = book[0].ambient_dim();
    if (reference.ambient_dim() != t || reference.subspace_dim() != book[0].subspace_dim()) {
        throw DomainError("orient_codebook_for_reference: reference shape mismatch");
    }
    auto rotated = [&](const CMatrix& u) {
        std::vector<GrassmannPoint> out;
        out.reserve(book.size());
        for (const GrassmannPoint& c : book.codewords()) out.emplace_back(orthonormalize(u * c.generator()));
        return out;
    };
    CMatrix best_u = CMatrix::Identity(t, t);
    double best_gap = min_adjacent_gap(book.codewords(), reference);
    for (int s = 0; s < options.starts; ++s) {
        CMatrix u = orthonormalize(sample_gaussian_matrix(t, t, 1.0, rng));
        double gap = min_adjacent_gap(rotated(u), reference);
        double step = options.step;
        for (int it = 0; it < options.iterations; ++it) {
            const CMatrix v = orthonormalize(CMatrix::Identity(t, t) + step * sample_gaussian_matrix(t, t, 1.0, rng)) * u;
            const double g = min_adjacent_gap(rotated(v), reference);
            if (g > gap) {
                gap = g;
                u = v;
            } else if (it % 100 == 99) {
                step *= 0.7;
            }
        }
        if (gap > best_gap) {
            best_gap = gap;
            best_u = u;
        }
    }
    return Codebook(rotated(best_u));
}

GrassmannPoint select_reference_for_codebook(const Codebook& book, std::span<const GrassmannPoint> references) {
    if (references.empty()) throw DomainError("select_reference_for_codebook: no candidates");
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < references.size(); ++i) {
        const double gap = min_adjacent_gap(book.codewords(), references[i]);
        if (gap > best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return references[best];
}

}  // namespace grassmod
