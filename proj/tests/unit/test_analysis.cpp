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

#include <cmath>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "grassmod/analysis.hpp"
#include "grassmod/channel.hpp"
#include "grassmod/error.hpp"

namespace grassmod {
namespace {

AnalysisParams defaults(double db = 20.0) {
    AnalysisParams p;
    p.rho = std::pow(10.0, db / 10.0);
    p.lambda_bar = 1.3;
    return p;
}

TEST(AnalysisParams, DerivedQuantities) {
    AnalysisParams p = defaults();
    EXPECT_EQ(p.D(), 8);
    p.T = 7;
    p.Nt = 3;
    EXPECT_EQ(p.D(), 24);
    EXPECT_EQ(defaults().c(), 1.0);
    p.convention = NoiseConvention::unit_per_component;
    EXPECT_EQ(p.c(), 2.0);
    EXPECT_NEAR(defaults().disk_radius(), 0.1, 1e-15);
}

TEST(AnalysisParams, Validation) {
    EXPECT_NO_THROW(defaults().validate());
    AnalysisParams p = defaults();
    p.eta_D = 1.5;
    EXPECT_THROW(p.validate(), DomainError);
    p = defaults();
    p.T = 2;
    EXPECT_THROW(p.validate(), DomainError);
    p = defaults();
    p.rho = 0.0;
    EXPECT_THROW(p.validate(), DomainError);
    p = defaults();
    p.epsilon = 1.0;
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(DistanceTail, UnityAtOrigin) { EXPECT_EQ(distance_tail(0.0, defaults()), 1.0); }

TEST(DistanceTail, ExponentialCaseForOneDimension) {
    AnalysisParams p = defaults();
    p.Nt = 1;
    p.T = 2;
    p.lambda_bar = 1.0;
    p.convention = NoiseConvention::unit_per_component;
    // rho T lambda^2 r^2 / 2 = 1.
    const double r = std::sqrt(2.0 / (p.rho * 2.0));
    EXPECT_NEAR(distance_tail(r, p), 0.367879441171442, 1e-12);
    p.convention = NoiseConvention::circular;
    EXPECT_NEAR(distance_tail(r, p), std::exp(-2.0), 1e-12);
}

TEST(DistanceTail, MatchesBoostUpperGamma) {
    for (NoiseConvention conv : {NoiseConvention::circular, NoiseConvention::unit_per_component}) {
        AnalysisParams p = defaults(15.0);
        p.convention = conv;
        for (double r = 0.0; r < 0.6; r += 0.013) {
            const double x = p.rho * 4.0 * p.lambda_bar * p.lambda_bar * r * r / (p.c() * 2.0);
            const double q = boost::math::gamma_q(4.0, x);
            EXPECT_NEAR(distance_tail(r, p), q, 1e-13 + 1e-10 * q);
        }
    }
    EXPECT_THROW(distance_tail(-0.1, defaults()), DomainError);
}

TEST(DistanceTail, DecreasesInRadiusAndSnr) {
    double previous = 1.0;
    for (double r = 0.01; r < 0.5; r += 0.01) {
        const double v = distance_tail(r, defaults());
        EXPECT_LE(v, previous);
        previous = v;
    }
    previous = 1.0;
    for (double db = 0.0; db <= 30.0; db += 2.0) {
        const double v = distance_tail(0.1, defaults(db));
        EXPECT_LE(v, previous);
        previous = v;
    }
}

// d/dr of the CDF against the Gamma(D/2, 1) density through x(r).
TEST(DistanceTail, FiniteDifferenceDensityAtMode) {
    const AnalysisParams p = defaults(20.0);
    const double k = p.rho * 4.0 * p.lambda_bar * p.lambda_bar / (p.c() * 2.0);  // x = k r^2
    // Density of r is g(k r^2) 2 k r, maximal where (D - 1) = 2 k r^2.
    const double mode = std::sqrt((p.D() - 1.0) / (2.0 * k));
    const double h = 1e-6;
    const double fd = (distance_tail(mode - h, p) - distance_tail(mode + h, p)) / (2.0 * h);
    const boost::math::gamma_distribution<double> g(p.D() / 2.0, 1.0);
    const double oracle = boost::math::pdf(g, k * mode * mode) * 2.0 * k * mode;
    EXPECT_NEAR(fd / oracle, 1.0, 0.01);
}

TEST(DistanceTail, MatchesSurrogateExceedance) {
    const SystemParams sp = SystemParams::from_db(2, 4, 4, 20.0, 8, 400);
    AnalysisParams p = defaults(20.0);
    p.lambda_bar = 1.7;
    Rng rng(1);
    const GrassmannPoint x = random_uniform_point(4, 2, rng);
    std::vector<double> d;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) d.push_back(procrustes_distance(approx_received(x, sp, p.lambda_bar, rng), x));
    for (int k = 1; k <= 10; ++k) {
        const double r = 0.012 * k;
        double exceed = 0.0;
        for (double v : d) exceed += v >= r;
        EXPECT_NEAR(exceed / draws, distance_tail(r, p), 0.03) << "r=" << r;
    }
}

TEST(KMeansBound, ReachesOneAtInfiniteSnr) {
    AnalysisParams p = defaults();
    p.rho = 1e12;
    EXPECT_NEAR(kmeans_separability_bound(1.0, p).value, 1.0, 1e-9);
    EXPECT_THROW(kmeans_separability_bound(0.0, p), DomainError);
}

TEST(KMeansBound, PowerOfBoostLowerGamma) {
    for (double db : {10.0, 15.0, 20.0, 25.0}) {
        const AnalysisParams p = defaults(db);
        const double x = p.rho * 4.0 * p.lambda_bar * p.lambda_bar * 0.25 / 2.0;  // d_min = 1
        const double base = boost::math::gamma_p(4.0, x);
        const SeparabilityBound b = kmeans_separability_bound(1.0, p);
        EXPECT_NEAR(b.base, base, 1e-12);
        EXPECT_NEAR(b.value, std::pow(base, p.N), 1e-10);
        EXPECT_GE(b.value, 0.0);
        EXPECT_LE(b.value, 1.0);
    }
}

TEST(KMeansBound, DoublingNSquaresTheBound) {
    AnalysisParams p = defaults(17.0);
    const double one = kmeans_separability_bound(1.0, p).value;
    p.N *= 2.0;
    EXPECT_NEAR(kmeans_separability_bound(1.0, p).value, one * one, 1e-12);
}

TEST(KMeansBound, AsymptoteAgreesWhereBoundIsHigh) {
    int checked = 0;
    for (double db = 10.0; db <= 40.0; db += 0.5) {
        const SeparabilityBound b = kmeans_separability_bound(1.0, defaults(db));
        if (b.value < 0.99) continue;
        EXPECT_NEAR(b.value, b.asymptote, 1e-3) << db << " dB";
        ++checked;
    }
    EXPECT_GE(checked, 10);
}

TEST(KMeansBound, AsymptoteIsClampedAndFlaggedAtLowSnr) {
    const SeparabilityBound b = kmeans_separability_bound(1.0, defaults(0.0));
    EXPECT_TRUE(b.clamped);
    EXPECT_EQ(b.asymptote, 0.0);
}

TEST(DfsBound, ZeroThresholdEqualsKMeans) {
    AnalysisParams p = defaults(18.0);
    p.gamma0 = 0.0;
    EXPECT_EQ(dfs_separability_bound(1.0, p).value, kmeans_separability_bound(1.0, p).value);
}

TEST(DfsBound, DecreasesInThresholdAndStaysBelowKMeans) {
    AnalysisParams p = defaults(22.0);
    const double km = kmeans_separability_bound(1.0, p).value;
    double previous = km;
    for (double g = 0.02; g < 1.0; g += 0.02) {
        p.gamma0 = g;
        const double v = dfs_separability_bound(1.0, p).value;
        EXPECT_LE(v, previous);
        EXPECT_LE(v, km);
        previous = v;
    }
}

TEST(DfsBound, ThresholdAtMinimumDistanceIsVoid) {
    AnalysisParams p = defaults();
    p.gamma0 = 1.0;
    EXPECT_THROW(dfs_separability_bound(1.0, p), DomainError);
    p.gamma0 = -0.1;
    EXPECT_THROW(dfs_separability_bound(1.0, p), DomainError);
}

double ring_oracle(double r, const AnalysisParams& p) {
    const double D = p.D();
    const double lo = r - p.gamma0 / 2.0;
    const double volume = std::pow(p.gamma0 / 4.0, D) / (std::pow(r, D) - std::pow(lo, D));
    const double mass = boost::math::gamma_q(D / 2.0, p.x_of(lo)) - boost::math::gamma_q(D / 2.0, p.x_of(r));
    return volume * mass / p.eta_D;
}

TEST(RingBin, MatchesDirectFormula) {
    AnalysisParams p = defaults(20.0);
    p.gamma0 = 0.02;
    for (double r = 0.01; r < 0.3; r += 0.0071) {
        const double oracle = ring_oracle(r, p);
        EXPECT_NEAR(ring_bin_probability(r, p), oracle, 1e-12 + 1e-8 * oracle) << r;
    }
    EXPECT_THROW(ring_bin_probability(0.009, p), DomainError);
}

TEST(RingBin, ProbabilityRangeAndMonotoneDecrease) {
    AnalysisParams p = defaults(30.0);
    p.gamma0 = 0.002;
    const double lo = p.gamma0 / 2.0;
    const double hi = 5.0 * p.a / std::sqrt(p.rho);
    double previous = 2.0;
    for (int k = 0; k < 1000; ++k) {
        const double r = lo + (hi - lo) * k / 999.0;
        const double v = ring_bin_probability(r, p);
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
        ASSERT_LE(v, previous) << "r=" << r;
        previous = v;
    }
}

// The asymptote is first order in gamma0 / r; the neglected term grows with
// the tail argument x at the disk boundary, so agreement needs x gamma0 / r small.
TEST(RingBin, MinimumMatchesAsymptoteDeepInRegime) {
    AnalysisParams p = defaults(20.0);  // a = 1, x about 3.4
    for (double frac : {1.0 / 50.0, 1.0 / 200.0, 1.0 / 1000.0}) {
        p.gamma0 = 2.0 * frac * p.disk_radius();
        EXPECT_NEAR(p_min_exact(p) / p_min_asymptotic(p), 1.0, 0.1) << frac;
    }
    p.a = choose_disk_constant(p);  // x about 15
    double previous = 1e300;
    for (double frac : {1.0 / 20.0, 1.0 / 100.0, 1.0 / 1000.0, 1.0 / 10000.0}) {
        p.gamma0 = 2.0 * frac * p.disk_radius();
        const double gap = std::abs(p_min_exact(p) / p_min_asymptotic(p) - 1.0);
        EXPECT_LT(gap, previous);
        previous = gap;
    }
    EXPECT_LE(previous, 0.01);
}

TEST(Connectivity, BinCountAndConstant) {
    AnalysisParams p = defaults(20.0);
    p.gamma0 = 0.005;
    EXPECT_NEAR(bin_count(p) / (0.5 * std::pow(4.0 * 0.1 / 0.005, 8)), 1.0, 1e-12);
    const double k = 4.0 * p.lambda_bar * p.lambda_bar / 2.0;
    const double c0 = 2.0 * std::pow(2.0, -15.0) / (8.0 * std::tgamma(4.0)) * std::pow(k, 4.0) * std::exp(-k);
    EXPECT_NEAR(connectivity_constant(p) / c0, 1.0, 1e-12);
}

TEST(Connectivity, GrowsToOneInN) {
    AnalysisParams p = defaults(20.0);
    p.gamma0 = 0.004;
    double previous = -1.0;
    for (double n = 1e3; n <= 1e24; n *= 10.0) {
        p.N = n;
        const ConnectivityBound b = connectivity_bound(p);
        EXPECT_GE(b.value, previous);
        EXPECT_GE(b.value, 0.0);
        EXPECT_LE(b.value, 1.0);
        previous = b.value;
    }
    EXPECT_NEAR(previous, 1.0, 1e-9);
}

TEST(Connectivity, ExactFormAtLeastAsymptoticWhereBothHigh) {
    AnalysisParams p = defaults(20.0);
    p.a = choose_disk_constant(p);
    int checked = 0;
    for (double frac : {1.0 / 20.0, 1.0 / 40.0}) {
        p.gamma0 = 2.0 * frac * p.disk_radius();
        for (double n = 1e4; n <= 1e40; n *= 3.0) {
            p.N = n;
            const ConnectivityBound b = connectivity_bound(p);
            if (b.value < 0.9 || b.exact < 0.9) continue;
            EXPECT_GE(b.exact, b.value - 1e-2);
            ++checked;
        }
    }
    EXPECT_GE(checked, 5);
}

TEST(Connectivity, RegimeFlag) {
    AnalysisParams p = defaults(20.0);
    p.gamma0 = 0.005;
    EXPECT_FALSE(connectivity_bound(p).outside_regime);
    p.gamma0 = 0.05;
    const ConnectivityBound b = connectivity_bound(p);
    EXPECT_TRUE(b.outside_regime);
    EXPECT_GE(b.value, 0.0);
    EXPECT_LE(b.exact, 1.0);
}

TEST(DiskConstant, MatchesInverseGammaOracle) {
    for (double db : {10.0, 20.0, 30.0}) {
        AnalysisParams p = defaults(db);
        const double a = choose_disk_constant(p);
        const double x = boost::math::gamma_q_inv(4.0, p.epsilon / p.N);
        const double oracle = std::sqrt(x * p.c() * 2.0 / (4.0 * p.lambda_bar * p.lambda_bar));
        EXPECT_NEAR(a / oracle, 1.0, 1e-9);
        p.a = a;
        EXPECT_NEAR(distance_tail(p.disk_radius(), p) / (p.epsilon / p.N), 1.0, 1e-6);
    }
}

TEST(ExponentialFit, RecoversSyntheticConstants) {
    std::vector<double> x, y;
    for (double v = 0.5; v <= 5.0; v += 0.5) {
        x.push_back(v);
        y.push_back(1.0 - 0.7 * std::exp(-1.3 * v));
    }
    x.push_back(9.0);
    y.push_back(1.0);  // saturated points carry no information
    const ExponentialFit f = fit_exponential_decay(x, y);
    EXPECT_NEAR(f.a0, 0.7, 1e-10);
    EXPECT_NEAR(f.b0, 1.3, 1e-10);
}

TEST(ExponentialFit, Errors) {
    const std::vector<double> x{1.0, 2.0}, y{0.5, 1.0}, same{1.0, 1.0}, half{0.5, 0.6};
    EXPECT_THROW(fit_exponential_decay(x, y), DomainError);
    EXPECT_THROW(fit_exponential_decay(same, half), DomainError);
    EXPECT_THROW(fit_exponential_decay(x, std::vector<double>{0.5}), DomainError);
}

}  // namespace
}  // namespace grassmod
