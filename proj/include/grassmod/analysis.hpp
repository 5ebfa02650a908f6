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

#include <span>

#include <Eigen/Core>

namespace grassmod {

/// How the complex noise variance enters the distance law. With W i.i.d.
/// CN(0,1) (E|w|^2 = 1), d_p^2 of the isotropic surrogate is
/// (Nt/(rho T lambda^2)) chi^2_D / 2, so the tail argument is
/// rho T lambda^2 r^2 / (c Nt) with c = 1 (circular). c = 2
/// (unit_per_component) gives each real component unit variance, so the
/// complex entries carry variance 2.
enum class NoiseConvention { circular, unit_per_component };

struct AnalysisParams {
    double rho = 100.0;
    Eigen::Index T = 4;
    Eigen::Index Nt = 2;
    double lambda_bar = 1.0;
    int L = 8;
    double N = 400.0;  // real so that connectivity asymptotics can be probed at huge N
    double gamma0 = 0.1;
    double a = 1.0;
    double eta_D = 0.5;
    double epsilon = 0.1;
    double delta = 0.1;
    NoiseConvention convention = NoiseConvention::circular;

    /// 2 Nt (T - Nt); never user-supplied.
    int D() const { return static_cast<int>(2 * Nt * (T - Nt)); }
    double c() const { return convention == NoiseConvention::circular ? 1.0 : 2.0; }
    /// Gamma argument of the distance tail at radius r.
    double x_of(double r) const;
    /// Disk radius a / sqrt(rho).
    double disk_radius() const;

    void validate() const;
};

/// Pr(d_p(Y~, X) >= r) = Q(D/2, x_of(r)) (regularized upper incomplete gamma).
double distance_tail(double r, const AnalysisParams& p);

struct SeparabilityBound {
    double value = 0.0;       // [P(D/2, x_of(d/2))]^N, clamped to [0, 1]
    double base = 0.0;        // P(D/2, x_of(d/2))
    double asymptote = 0.0;   // 1 - N e^{-x} G_m, clamped to [0, 1]
    bool clamped = false;     // the asymptote left [0, 1]
};

/// Lower bound on the probability that every symbol lies within d_min/2 of
/// its codeword.
SeparabilityBound kmeans_separability_bound(double d_min, const AnalysisParams& p);

/// As above with d_min replaced by d_min - gamma0. Throws DomainError unless
/// 0 <= gamma0 < d_min.
SeparabilityBound dfs_separability_bound(double d_min, const AnalysisParams& p);

/// Probability that a symbol falls in one particular gamma0/4 bin of the ring
/// of width gamma0/2 and outer radius r. Throws DomainError for r < gamma0/2.
double ring_bin_probability(double r, const AnalysisParams& p);

/// ring_bin_probability at the disk boundary a / sqrt(rho).
double p_min_exact(const AnalysisParams& p);

/// Small-gamma0 asymptote of p_min: c0 gamma0^D rho^(D/2).
double p_min_asymptotic(const AnalysisParams& p);

/// eta^-1 2^(-2D+1) / (D Gamma(D/2)) (T lambda^2/(c Nt))^(D/2) e^{-a^2 T lambda^2/(c Nt)}.
double connectivity_constant(const AnalysisParams& p);

/// Number of gamma0/4 bins packed in the disk: eta (4a / (gamma0 sqrt(rho)))^D.
double bin_count(const AnalysisParams& p);

struct ConnectivityBound {
    double value = 0.0;          // 1 - M exp(-c0 gamma0^D rho^(D/2) N / L), clamped
    double exact = 0.0;          // 1 - M (1 - p_min / L)^N, clamped
    double bins = 0.0;           // M
    double p_min = 0.0;          // exact
    bool clamped = false;        // either form left [0, 1]
    bool outside_regime = false; // gamma0 > disk_radius / 10
};

ConnectivityBound connectivity_bound(const AnalysisParams& p);

/// Smallest a with distance_tail(a / sqrt(rho)) <= epsilon / N, by bisection.
double choose_disk_constant(const AnalysisParams& p);

/// Least-squares fit of y = 1 - a0 exp(-b0 x) on points with y < 1. The
/// constants are fitted, not derived.
struct ExponentialFit {
    double a0 = 0.0;
    double b0 = 0.0;
};
ExponentialFit fit_exponential_decay(std::span<const double> x, std::span<const double> y);

}  // namespace grassmod
