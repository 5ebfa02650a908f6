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

#include "grassmod/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "grassmod/error.hpp"

namespace grassmod {

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const cdouble z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

SvdResult svd(const CMatrix& m) {
    if (m.rows() < 1 || m.cols() < 1) throw DomainError("svd: empty matrix");
    if (!all_finite(m)) throw DomainError("svd: non-finite entry");
    Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SvdResult{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

CMatrix orthonormalize(const CMatrix& m) {
    if (m.rows() < m.cols()) throw DomainError("orthonormalize: matrix must be tall");
    SvdResult d = svd(m);
    const double smax = d.s(0);
    const double smin = d.s(d.s.size() - 1);
    if (!(smax > 0.0) || smin < 1e-12 * smax) {
        throw DegenerateInputError("orthonormalize: rank-deficient input");
    }
    return d.u;
}

// ---------------------------------------------------------------------------
// Incomplete gamma: power series below x = s + 1, Lentz continued fraction
// above it.

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 10000;

double series_p(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < kMaxTerms; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double continued_fraction_q(double s, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

void check_gamma_args(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0) || !std::isfinite(s)) {
        throw DomainError("incomplete gamma: requires s > 0, x >= 0");
    }
}

}  // namespace

double gamma_p(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 1.0) return series_p(s, x);
    return 1.0 - continued_fraction_q(s, x);
}

double gamma_q(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < s + 1.0) return 1.0 - series_p(s, x);
    return continued_fraction_q(s, x);
}

double gamma_lower(double s, double x) { return gamma_p(s, x) * std::tgamma(s); }
double gamma_upper(double s, double x) { return gamma_q(s, x) * std::tgamma(s); }

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return Rng(h);
}

double Rng::uniform() {
    // 53 random mantissa bits.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_index: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % n;
}

double Rng::normal() {
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return z;
    }
    const cdouble z = complex_normal(2.0);
    spare_normal_ = z.imag();
    return z.real();
}

cdouble Rng::complex_normal(double variance) {
    // Box-Muller; 1 - uniform() lies in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-variance * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

CMatrix sample_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng) {
    if (!(variance > 0.0)) throw DomainError("sample_gaussian_matrix: variance must be positive");
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal(variance);
    }
    return m;
}

}  // namespace grassmod
