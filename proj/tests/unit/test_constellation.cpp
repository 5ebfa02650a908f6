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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "grassmod/channel.hpp"
#include "grassmod/constellation.hpp"

namespace grassmod {
namespace {

// Point of G(4,2) at principal angles (t1, t2) from span(e1, e2), so that
// d_p^2 = sin^2 t1 + sin^2 t2.
GrassmannPoint at_angles(double t1, double t2) {
    CMatrix g = CMatrix::Zero(4, 2);
    g(0, 0) = std::cos(t1);
    g(2, 0) = std::sin(t1);
    g(1, 1) = std::cos(t2);
    g(3, 1) = std::sin(t2);
    return GrassmannPoint(g);
}

// Point at Procrustes distance d (0 <= d <= sqrt 2) from span(e1, e2).
GrassmannPoint at_distance(double d, double split = 0.0) {
    const double d2 = d * d;
    const double first = std::min(1.0, d2 - std::min(split, d2));
    return at_angles(std::asin(std::sqrt(first)), std::asin(std::sqrt(std::max(0.0, d2 - first))));
}

GrassmannPoint origin() { return GrassmannPoint(CMatrix::Identity(4, 2)); }

Codebook packed(int L, std::uint64_t seed, int restarts = 4) {
    PackingOptions o;
    o.L = L;
    o.restarts = restarts;
    Rng rng(seed);
    return pack_codebook(o, rng);
}

TEST(Codebook, RecomputesMinimumDistance) {
    Rng rng(1);
    std::vector<GrassmannPoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(random_uniform_point(4, 2, rng));
    double brute = 10.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i != j) brute = std::min(brute, procrustes_distance(pts[i], pts[j]));
        }
    }
    EXPECT_DOUBLE_EQ(Codebook(pts).d_min(), brute);
}

TEST(Codebook, RejectsDuplicatesMixedShapesAndSingletons) {
    EXPECT_THROW(Codebook({origin(), origin()}), DomainError);
    EXPECT_THROW(Codebook({origin()}), DomainError);
    EXPECT_THROW(Codebook({origin(), GrassmannPoint(CMatrix::Identity(5, 2))}), DomainError);
}

TEST(Codebook, MinimumDistanceInvariantToRepresentative) {
    const Codebook book = packed(8, 2, 1);
    Rng rng(3);
    std::vector<GrassmannPoint> rotated;
    for (const GrassmannPoint& c : book.codewords()) {
        const CMatrix q = orthonormalize(sample_gaussian_matrix(2, 2, 1.0, rng));
        rotated.emplace_back(c.generator() * q);
    }
    EXPECT_NEAR(Codebook(rotated).d_min(), book.d_min(), 1e-12);
}

TEST(Packing, RejectsInvalidShapes) {
    Rng rng(4);
    PackingOptions o;
    o.L = 2;
    o.T = 2;
    o.Nt = 2;
    EXPECT_THROW(pack_codebook(o, rng), DomainError);
    o.T = 4;
    o.L = 6;
    EXPECT_THROW(pack_codebook(o, rng), DomainError);
}

TEST(Packing, TwoCodewordsApproachOrthogonality) {
    const Codebook book = packed(2, 5);
    EXPECT_GE(book.d_min(), 1.0);
    EXPECT_LE(book.d_min(), 2.0);
    EXPECT_NEAR(book.d_min(), std::sqrt(2.0), 1e-3);  // orthogonal planes in C^4
}

// The simplex (Rankin) bound caps d_p^2 of any L-point code in G(T, Nt) at
// Nt (T - Nt) / T * L / (L - 1).
double simplex_bound(int L, double T, double Nt) { return Nt * (T - Nt) / T * L / (L - 1.0); }

TEST(Packing, DefaultConfigurationNearSimplexBound) {
    const Codebook book = packed(8, 6, 8);
    const double d2 = book.d_min() * book.d_min();
    EXPECT_LE(d2, simplex_bound(8, 4, 2) + 1e-9);
    EXPECT_GE(d2, 0.95 * simplex_bound(8, 4, 2));
}

// Squared chordal distances never exceed Nt, while the packing bound
// 4 Nt L^(-1/(T Nt)) at the default configuration is 6.169; 0.8 of it (4.94)
// is therefore out of reach for every codebook.
TEST(Packing, PackingBoundExceedsChordalDiameter) {
    EXPECT_GT(0.8 * min_distance_bound(8, 4, 2), 2.0);
    const Codebook book = packed(8, 6, 2);
    EXPECT_LE(book.d_min() * book.d_min(), 2.0);
}

TEST(Packing, LargerConstellationsPackTighter) {
    const double d4 = packed(4, 7).d_min();
    const double d8 = packed(8, 7).d_min();
    const double d16 = packed(16, 7).d_min();
    EXPECT_GT(d4, d8);
    EXPECT_GT(d8, d16);
    EXPECT_LE(d16 * d16, simplex_bound(16, 4, 2) + 1e-9);
}

TEST(Packing, ReportsBestRestart) {
    PackingOptions o;
    o.restarts = 5;
    o.iterations = 300;
    Rng rng(8);
    const PackingResult r = pack_codebook_detailed(o, rng);
    ASSERT_EQ(r.restart_d_min.size(), 5u);
    EXPECT_DOUBLE_EQ(r.book.d_min(), *std::max_element(r.restart_d_min.begin(), r.restart_d_min.end()));
}

TEST(Packing, DeterministicAcrossThreadCounts) {
    PackingOptions o;
    o.restarts = 4;
    o.iterations = 200;
    Rng a(9), b(9);
    const Codebook serial = pack_codebook(o, a);
    o.threads = 4;
    const Codebook parallel = pack_codebook(o, b);
    for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(serial[i].generator(), parallel[i].generator());
}

TEST(MinDistanceBound, FormulaValues) {
    EXPECT_NEAR(min_distance_bound(8, 4, 2), 8.0 * std::pow(8.0, -1.0 / 8.0), 1e-12);
    EXPECT_NEAR(min_distance_bound(8, 4, 2), 6.169, 1e-3);
    EXPECT_NEAR(min_distance_bound(2, 4, 2), 8.0 * std::pow(2.0, -1.0 / 8.0), 1e-12);
    for (int L = 2; L < 64; ++L) EXPECT_GT(min_distance_bound(L, 4, 2), min_distance_bound(L + 1, 4, 2));
    EXPECT_THROW(min_distance_bound(1, 4, 2), DomainError);
    EXPECT_THROW(min_distance_bound(8, 2, 2), DomainError);
}

TEST(FourierReference, FirstColumnsOfUnitaryDft) {
    const GrassmannPoint f2 = fourier_reference(2, 1);
    EXPECT_NEAR(std::abs(f2.generator()(0, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f2.generator()(1, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    const GrassmannPoint f4 = fourier_reference(4, 2);
    EXPECT_NEAR(std::abs(f4.generator()(1, 1) - cdouble(0.0, -0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f4.generator()(2, 1) - cdouble(-0.5, 0.0)), 0.0, 1e-15);
    EXPECT_EQ(fourier_reference(4, 2).generator(), fourier_reference(4, 2).generator());
    EXPECT_THROW(fourier_reference(2, 2), DomainError);
}

TEST(BitMapping, TwoCodewordsOrderedByDistance) {
    const std::vector<GrassmannPoint> book{at_distance(1.1), at_distance(0.3)};
    const BitMapping m = build_bit_mapping(book, origin());
    EXPECT_EQ(m.bits_per_symbol(), 1);
    EXPECT_EQ(m.codeword_for_label(0), 1u);
    EXPECT_EQ(m.codeword_for_label(1), 0u);
    EXPECT_NEAR(m.sorted_distances()[0], 0.3, 1e-12);
    EXPECT_NEAR(m.sorted_distances()[1], 1.1, 1e-12);
}

TEST(BitMapping, GapBelowThresholdIsTie) {
    const std::vector<GrassmannPoint> book{at_distance(0.5), at_distance(0.5 + kDefaultMinGap / 2.0)};
    EXPECT_THROW(build_bit_mapping(book, origin()), TieError);
}

TEST(BitMapping, NonPowerOfTwoIsSizeError) {
    const std::vector<GrassmannPoint> book{at_distance(0.3), at_distance(0.6), at_distance(0.9)};
    EXPECT_THROW(build_bit_mapping(book, origin()), SizeError);
}

// A valid L = 8 mapping: eight codewords at well-spread distances.
std::vector<GrassmannPoint> spread_book() {
    std::vector<GrassmannPoint> book;
    for (int k = 0; k < 8; ++k) book.push_back(at_distance(0.1 + 0.15 * ((5 * k) % 8), 0.3 * k / 8.0));
    return book;
}

TEST(BitMapping, LabelRoundtripForEveryCodeword) {
    const BitMapping m = build_bit_mapping(spread_book(), origin());
    ASSERT_EQ(m.bits_per_symbol(), 3);
    for (std::size_t idx = 0; idx < 8; ++idx) {
        std::vector<std::uint8_t> bits;
        append_label_bits(m.label_for_codeword(idx), 3, bits);
        EXPECT_EQ(m.encode(bits), std::vector<std::size_t>{idx});
    }
}

TEST(BitMapping, BitSequencesRoundtrip) {
    const BitMapping m = build_bit_mapping(spread_book(), origin());
    for (std::uint32_t label = 0; label < 8; ++label) {
        std::vector<std::uint8_t> bits;
        append_label_bits(label, 3, bits);
        EXPECT_EQ(m.decode(m.encode(bits)), bits);
    }
    EXPECT_THROW(m.encode(std::vector<std::uint8_t>{1, 0}), DomainError);
}

TEST(BitMapping, OrderIsSortedByDistance) {
    const std::vector<GrassmannPoint> book = spread_book();
    const BitMapping m = build_bit_mapping(book, origin());
    for (std::size_t r = 1; r < 8; ++r) {
        EXPECT_LT(procrustes_distance(book[m.order()[r - 1]], origin()), procrustes_distance(book[m.order()[r]], origin()));
    }
}

// Each codeword mu replaced by the received span of mu H: the order is a
// property of the subspaces, which the channel leaves unchanged.
TEST(BitMapping, OrderInvariantUnderChannelRotation) {
    const std::vector<GrassmannPoint> book = spread_book();
    const GrassmannPoint ref = origin();
    const std::vector<std::size_t> order = build_bit_mapping(book, ref).order();
    Rng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<GrassmannPoint> rotated;
        for (const GrassmannPoint& c : book) {
            rotated.push_back(project_symbol(c.generator() * sample_gaussian_matrix(2, 4, 1.0, rng), 2));
        }
        EXPECT_EQ(build_bit_mapping(rotated, ref).order(), order);
    }
}

TEST(Selection, SingleCandidate) {
    const Codebook only({at_distance(0.3), at_distance(0.9)});
    const std::vector<Codebook> candidates{only};
    EXPECT_EQ(select_codebook_for_reference(candidates, origin())[0].generator(), only[0].generator());
    EXPECT_THROW(select_codebook_for_reference(std::vector<Codebook>{}, origin()), DomainError);
}

TEST(Selection, PicksLargerGap) {
    const Codebook narrow({at_distance(0.3), at_distance(0.35)});
    const Codebook wide({at_distance(0.3), at_distance(0.5)});
    EXPECT_NEAR(min_adjacent_gap(narrow.codewords(), origin()), 0.05, 1e-12);
    EXPECT_NEAR(min_adjacent_gap(wide.codewords(), origin()), 0.20, 1e-12);
    const std::vector<Codebook> candidates{narrow, wide};
    const Codebook chosen = select_codebook_for_reference(candidates, origin());
    EXPECT_NEAR(min_adjacent_gap(chosen.codewords(), origin()), 0.20, 1e-12);
}

TEST(Selection, MatchesExhaustiveSearch) {
    Rng rng(11);
    std::vector<Codebook> candidates;
    for (int i = 0; i < 10; ++i) {
        std::vector<GrassmannPoint> pts;
        for (int k = 0; k < 8; ++k) pts.push_back(random_uniform_point(4, 2, rng));
        candidates.emplace_back(std::move(pts));
    }
    const GrassmannPoint ref = fourier_reference(4, 2);
    double best = -1.0;
    for (const Codebook& c : candidates) {
        // Oracle: all pairwise distance differences, not the sorted-adjacent shortcut.
        double gap = 10.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                gap = std::min(gap, std::abs(procrustes_distance(c[i], ref) - procrustes_distance(c[j], ref)));
            }
        }
        best = std::max(best, gap);
    }
    EXPECT_NEAR(min_adjacent_gap(select_codebook_for_reference(candidates, ref).codewords(), ref), best, 1e-12);
}

TEST(Selection, ReferenceSearchIsSymmetric) {
    const Codebook book({at_distance(0.3), at_distance(0.35)});
    const std::vector<GrassmannPoint> refs{origin(), at_distance(1.0)};
    const GrassmannPoint chosen = select_reference_for_codebook(book, refs);
    double best = 0.0;
    for (const GrassmannPoint& r : refs) best = std::max(best, min_adjacent_gap(book.codewords(), r));
    EXPECT_NEAR(min_adjacent_gap(book.codewords(), chosen), best, 1e-12);
}

TEST(Log2Exact, PowersOfTwoOnly) {
    EXPECT_EQ(log2_exact(1), 0);
    EXPECT_EQ(log2_exact(8), 3);
    EXPECT_EQ(log2_exact(16), 4);
    EXPECT_EQ(log2_exact(12), -1);
    EXPECT_EQ(log2_exact(0), -1);
}

TEST(Orient, PreservesDistancesAndWidensGap) {
    const GrassmannPoint ref = fourier_reference(4, 2);
    for (std::uint64_t seed : {1, 2, 3}) {
        const Codebook book = packed(8, seed);
        Rng rng(seed);
        const Codebook turned = orient_codebook_for_reference(book, ref, rng);
        EXPECT_NEAR(turned.d_min(), book.d_min(), 1e-10);
        for (std::size_t i = 0; i < book.size(); ++i) {
            for (std::size_t j = i + 1; j < book.size(); ++j) {
                EXPECT_NEAR(procrustes_distance(turned[i], turned[j]), procrustes_distance(book[i], book[j]), 1e-10);
            }
        }
        EXPECT_GE(min_adjacent_gap(turned.codewords(), ref), min_adjacent_gap(book.codewords(), ref));
        EXPECT_GE(min_adjacent_gap(turned.codewords(), ref), kDefaultMinGap) << "seed " << seed;
        EXPECT_NO_THROW(build_bit_mapping(turned, ref));
    }
}

TEST(Orient, RejectsBadInput) {
    const Codebook book = packed(4, 4, 1);
    Rng rng(5);
    OrientOptions o;
    o.starts = 0;
    EXPECT_THROW(orient_codebook_for_reference(book, fourier_reference(4, 2), rng, o), DomainError);
    EXPECT_THROW(orient_codebook_for_reference(book, fourier_reference(5, 2), rng), DomainError);
}

}  // namespace
}  // namespace grassmod
