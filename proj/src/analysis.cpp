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

#include "grassmod/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "grassmod/error.hpp"
#include "grassmod/numerics.hpp"

namespace grassmod {

namespace {

double clamp_unit(double v, bool& clamped) {
    if (v < 0.0 || v > 1.0) clamped = true;
    return std::clamp(v, 0.0, 1.0);
}

// Q(s, x_lo) - Q(s, x_hi) for x_lo <= x_hi, taking the difference on the side
// where both terms are small.
double gamma_mass(double s, double x_lo, double x_hi) {
    if (x_lo >= s) return gamma_q(s, x_lo) - gamma_q(s, x_hi);
    return gamma_p(s, x_hi) - gamma_p(s, x_lo);
}

SeparabilityBound separability(double distance, const AnalysisParams& p) {
    const double s = p.D() / 2.0;
    const double x = p.x_of(distance / 2.0);
    SeparabilityBound out;
    out.base = gamma_p(s, x);
    // log1p keeps base^N accurate when base is within rounding of 1.
    const double tail = gamma_q(s, x);
    out.value = std::clamp(std::exp(p.N * std::log1p(-tail)), 0.0, 1.0);
    double g = 0.0;
    double term = 1.0;
    for (int m = 0; m < p.D() / 2; ++m) {
        if (m > 0) term *= x / m;
        g += term;
    }
    out.asymptote = clamp_unit(1.0 - p.N * std::exp(-x) * g, out.clamped);
    return out;
}

}  // namespace

double AnalysisParams::x_of(double r) const {
    return rho * static_cast<double>(T) * lambda_bar * lambda_bar * r * r / (c() * static_cast<double>(Nt));
}

double AnalysisParams::disk_radius() const { return a / std::sqrt(rho); }

void AnalysisParams::validate() const {
    if (Nt < 1 || T <= Nt) throw DomainError("AnalysisParams: requires T > Nt >= 1");
    if (!(rho > 0.0) || !(lambda_bar > 0.0) || !(a > 0.0) || !(gamma0 > 0.0)) {
        throw DomainError("AnalysisParams: rho, lambda_bar, a, gamma0 must be positive");
    }
    if (!(eta_D > 0.0 && eta_D <= 1.0)) throw DomainError("AnalysisParams: eta_D must lie in (0, 1]");
    if (L < 1 || !(N >= 1.0)) throw DomainError("AnalysisParams: L and N must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw DomainError("AnalysisParams: epsilon and delta must lie in (0, 1)");
    }
}

double distance_tail(double r, const AnalysisParams& p) {
    if (!(r >= 0.0)) throw DomainError("distance_tail: r must be non-negative");
    return gamma_q(p.D() / 2.0, p.x_of(r));
}

SeparabilityBound kmeans_separability_bound(double d_min, const AnalysisParams& p) {
    if (!(d_min > 0.0)) throw DomainError("kmeans_separability_bound: d_min must be positive");
    return separability(d_min, p);
}

SeparabilityBound dfs_separability_bound(double d_min, const AnalysisParams& p) {
    if (!(d_min > 0.0)) throw DomainError("dfs_separability_bound: d_min must be positive");
    if (!(p.gamma0 >= 0.0) || p.gamma0 >= d_min) {
        throw DomainError("dfs_separability_bound: requires 0 <= gamma0 < d_min");
    }
    return separability(d_min - p.gamma0, p);
}

double ring_bin_probability(double r, const AnalysisParams& p) {
    const double half = p.gamma0 / 2.0;
    if (!(r >= half)) throw DomainError("ring_bin_probability: requires r >= gamma0 / 2");
    const int D = p.D();
    // (gamma0/4)^D / (r^D - (r - gamma0/2)^D), written in ratios to avoid
    // overflow and cancellation.
    const double shell = -std::expm1(D * std::log1p(-half / r));
    const double volume_ratio = std::exp(D * std::log(p.gamma0 / (4.0 * r))) / shell;
    const double mass = gamma_mass(D / 2.0, p.x_of(r - half), p.x_of(r));
    return volume_ratio * mass / p.eta_D;
}

double p_min_exact(const AnalysisParams& p) { return ring_bin_probability(p.disk_radius(), p); }

double connectivity_constant(const AnalysisParams& p) {
    const int D = p.D();
    const double k = static_cast<double>(p.T) * p.lambda_bar * p.lambda_bar / (p.c() * static_cast<double>(p.Nt));
    const double log_c0 = -std::log(p.eta_D) + (1.0 - 2.0 * D) * std::log(2.0) - std::log(static_cast<double>(D)) -
                          std::lgamma(D / 2.0) + (D / 2.0) * std::log(k) - p.a * p.a * k;
    return std::exp(log_c0);
}

double p_min_asymptotic(const AnalysisParams& p) {
    const double D = p.D();
    return connectivity_constant(p) * std::pow(p.gamma0, D) * std::pow(p.rho, D / 2.0);
}

double bin_count(const AnalysisParams& p) {
    return p.eta_D * std::pow(4.0 * p.disk_radius() / p.gamma0, p.D());
}

ConnectivityBound connectivity_bound(const AnalysisParams& p) {
    p.validate();
    ConnectivityBound out;
    out.outside_regime = p.gamma0 > p.disk_radius() / 10.0;
    out.bins = bin_count(p);
    out.p_min = p_min_exact(p);
    const double per_cluster = p.N / static_cast<double>(p.L);
    out.value = clamp_unit(1.0 - out.bins * std::exp(-p_min_asymptotic(p) * per_cluster), out.clamped);
    const double log_miss = p.N * std::log1p(-out.p_min / static_cast<double>(p.L));
    out.exact = clamp_unit(1.0 - out.bins * std::exp(log_miss), out.clamped);
    return out;
}

double choose_disk_constant(const AnalysisParams& p) {
    if (!(p.epsilon > 0.0) || !(p.N >= 1.0)) throw DomainError("choose_disk_constant: invalid epsilon or N");
    const double target = p.epsilon / p.N;
    AnalysisParams q = p;
    auto tail_at = [&](double a) {
        q.a = a;
        return distance_tail(q.disk_radius(), q);
    };
    double lo = 0.0;
    double hi = 1.0;
    while (tail_at(hi) > target) {
        hi *= 2.0;
        if (hi > 1e12) throw DomainError("choose_disk_constant: no finite solution");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail_at(mid) > target ? lo : hi) = mid;
    }
    return hi;
}

ExponentialFit fit_exponential_decay(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("fit_exponential_decay: size mismatch");
    std::vector<double> xs;
    std::vector<double> ls;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] < 1.0) {
            xs.push_back(x[i]);
            ls.push_back(std::log(1.0 - y[i]));
        }
    }
    if (xs.size() < 2) throw DomainError("fit_exponential_decay: need two points below 1");
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sl = 0.0, sxx = 0.0, sxl = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sl += ls[i];
        sxx += xs[i] * xs[i];
        sxl += xs[i] * ls[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("fit_exponential_decay: degenerate abscissae");
    const double slope = (n * sxl - sx * sl) / denom;
    const double intercept = (sl - slope * sx) / n;
    return ExponentialFit{std::exp(intercept), -slope};
}

}  // namespace grassmod
