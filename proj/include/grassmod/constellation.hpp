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
#include <span>
#include <vector>

#include "grassmod/manifold.hpp"

namespace grassmod {

/// An ordered Grassmann codebook. d_min (minimum pairwise Procrustes
/// distance) is always recomputed from the codewords.
class Codebook {
public:
    /// Requires at least two codewords of a common shape with d_min > 0.
    explicit Codebook(std::vector<GrassmannPoint> codewords);

    std::size_t size() const { return codewords_.size(); }
    const std::vector<GrassmannPoint>& codewords() const { return codewords_; }
    const GrassmannPoint& operator[](std::size_t i) const { return codewords_[i]; }
    double d_min() const { return d_min_; }
    Eigen::Index ambient_dim() const { return codewords_.front().ambient_dim(); }
    Eigen::Index subspace_dim() const { return codewords_.front().subspace_dim(); }

private:
    std::vector<GrassmannPoint> codewords_;
    double d_min_;
};

double min_pairwise_distance(std::span<const GrassmannPoint> points, Metric metric = Metric::procrustes);

struct PackingOptions {
    int L = 8;
    Eigen::Index T = 4;
    Eigen::Index Nt = 2;
    int restarts = 8;
    int iterations = 2000;
    double initial_step = 0.1;
    double final_step = 1e-4;
    unsigned threads = 1;
};

struct PackingResult {
    Codebook book;
    std::vector<double> restart_d_min;  // best d_min reached by each restart
};

/// Max-min repulsion packing: each iteration moves the currently closest
/// pair apart along the geodesic joining them, with a geometrically
/// shrinking step. Best of `restarts` independent runs by d_min.
PackingResult pack_codebook_detailed(const PackingOptions& options, Rng& rng);
Codebook pack_codebook(const PackingOptions& options, Rng& rng);

/// Packing bound on d_min^2: 4 Nt (1/L)^(1/(T Nt)).
double min_distance_bound(int L, Eigen::Index T, Eigen::Index Nt);

/// First Nt columns of the T-point unitary DFT matrix.
GrassmannPoint fourier_reference(Eigen::Index T, Eigen::Index Nt);

struct RankedDistance {
    double distance;
    std::size_t index;
};

/// Procrustes distances to `reference`, ascending; ties keep input order.
std::vector<RankedDistance> rank_by_reference(std::span<const GrassmannPoint> points,
                                              const GrassmannPoint& reference);

/// Smallest gap between consecutive sorted distances to `reference`.
double min_adjacent_gap(std::span<const GrassmannPoint> points, const GrassmannPoint& reference);

inline constexpr double kDefaultMinGap = 0.05;
/// Decoding tolerates estimates within half the design gap of the truth, so
/// only gaps below this count as ties among estimated codewords.
inline constexpr double kDecodeMinGap = kDefaultMinGap / 2.0;

/// Bit labels embedded in a codebook: the codeword of rank k (by distance
/// to the reference) carries the bits_per_symbol-bit binary encoding of k.
class BitMapping {
public:
    BitMapping(GrassmannPoint reference, std::vector<std::size_t> order, std::vector<double> sorted_distances);

    const GrassmannPoint& reference() const { return reference_; }
    /// order()[rank] = codeword index.
    const std::vector<std::size_t>& order() const { return order_; }
    const std::vector<double>& sorted_distances() const { return sorted_distances_; }
    int bits_per_symbol() const { return bits_per_symbol_; }

    std::size_t codeword_for_label(std::uint32_t label) const { return order_.at(label); }
    std::uint32_t label_for_codeword(std::size_t index) const { return rank_.at(index); }

    /// Packs a bit sequence (length a multiple of bits_per_symbol, MSB first)
    /// into codeword indices.
    std::vector<std::size_t> encode(std::span<const std::uint8_t> bits) const;
    std::vector<std::uint8_t> decode(std::span<const std::size_t> codeword_indices) const;

private:
    GrassmannPoint reference_;
    std::vector<std::size_t> order_;
    std::vector<std::uint32_t> rank_;
    std::vector<double> sorted_distances_;
    int bits_per_symbol_;
};

/// Throws SizeError if L is not a power of two and TieError if two sorted
/// distances are closer than min_gap.
BitMapping build_bit_mapping(std::span<const GrassmannPoint> codewords, const GrassmannPoint& reference,
                             double min_gap = kDefaultMinGap);
BitMapping build_bit_mapping(const Codebook& book, const GrassmannPoint& reference,
                             double min_gap = kDefaultMinGap);

/// Fixed reference, choose the codebook with the largest min_adjacent_gap.
Codebook select_codebook_for_reference(std::span<const Codebook> candidates, const GrassmannPoint& reference);

/// Fixed codebook, choose the reference with the largest min_adjacent_gap.
GrassmannPoint select_reference_for_codebook(const Codebook& book, std::span<const GrassmannPoint> references);

/// Left-multiplies every codeword by one T x T unitary chosen to maximize
/// min_adjacent_gap to the reference. d_min is unchanged. Random starts, each
/// refined by accepting near-identity unitary steps that widen the gap.
struct OrientOptions {
    int starts = 32;
    int iterations = 1500;
    double step = 0.3;
};
Codebook orient_codebook_for_reference(const Codebook& book, const GrassmannPoint& reference, Rng& rng,
                                       const OrientOptions& options = {});

int log2_exact(std::size_t n);  // -1 when n is not a power of two

void append_label_bits(std::uint32_t label, int bits, std::vector<std::uint8_t>& out);

}  // namespace grassmod
