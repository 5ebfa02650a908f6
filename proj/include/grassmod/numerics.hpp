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

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>

#include <Eigen/Dense>

namespace grassmod {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

struct SvdResult {
    CMatrix u;  // rows x k, orthonormal columns
    RVector s;  // k = min(rows, cols), descending, non-negative
    CMatrix v;  // cols x k, orthonormal columns
};

/// Thin SVD. Throws DomainError on empty or non-finite input.
SvdResult svd(const CMatrix& m);

/// Orthonormal basis of the column space of a tall, full-column-rank matrix.
/// Throws DegenerateInputError when sigma_min < 1e-12 * sigma_max.
CMatrix orthonormalize(const CMatrix& m);

bool all_finite(const CMatrix& m);

// Incomplete gamma functions. Regularized forms stay accurate in the tails
// where the unregularized ones under/overflow; prefer them in bound formulas.
double gamma_p(double s, double x);      // lower, regularized
double gamma_q(double s, double x);      // upper, regularized
double gamma_lower(double s, double x);  // gamma(s, x)
double gamma_upper(double s, double x);  // Gamma(s, x)

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
/// the standard); uniform and normal variates are derived here rather than via
/// <random> distributions so the stream is identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream for a (seed, key...) tuple, e.g. (seed, grid, trial).
    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform integer in [0, n). Unbiased.
    std::uint64_t uniform_index(std::uint64_t n);
    double normal();
    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cdouble complex_normal(double variance = 1.0);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// i.i.d. CN(0, variance) entries (real and imaginary parts variance/2 each).
CMatrix sample_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace grassmod
