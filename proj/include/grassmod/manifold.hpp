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

#include <optional>
#include <span>
#include <vector>

#include "grassmod/error.hpp"
#include "grassmod/numerics.hpp"

namespace grassmod {

/// A point of the Grassmannian G(T, Nt): the column space of a T x Nt
/// generator with orthonormal columns. Any generator * Q, Q unitary, names
/// the same point.
class GrassmannPoint {
public:
    /// Validates generator^H generator = I to 1e-10 and T > Nt.
    explicit GrassmannPoint(CMatrix generator);

    /// Orthonormal basis of the column space of an arbitrary tall matrix.
    static GrassmannPoint span_of(const CMatrix& m);

    const CMatrix& generator() const { return generator_; }
    Eigen::Index ambient_dim() const { return generator_.rows(); }
    Eigen::Index subspace_dim() const { return generator_.cols(); }

private:
    CMatrix generator_;
};

/// Tangent vector at `base`; base^H delta = 0.
class TangentVector {
public:
    TangentVector(GrassmannPoint base, CMatrix delta);

    const GrassmannPoint& base() const { return base_; }
    const CMatrix& delta() const { return delta_; }
    double norm() const { return delta_.norm(); }

private:
    GrassmannPoint base_;
    CMatrix delta_;
};

/// Point reached at time t along the geodesic leaving `base` with velocity
/// tangent.delta(). t = 0 gives base.
GrassmannPoint exp_map(const GrassmannPoint& base, const TangentVector& tangent, double t = 1.0);

/// Velocity at a of the geodesic reaching b at t = 1. Throws CutLocusError
/// when the smallest singular value of a^H b is below 1e-10.
TangentVector log_map(const GrassmannPoint& a, const GrassmannPoint& b);

/// Principal angles between span(a) and span(b), ascending, in [0, pi/2].
RVector principal_angles(const GrassmannPoint& a, const GrassmannPoint& b);

/// sqrt(sum of squared principal angles).
double geodesic_distance(const GrassmannPoint& a, const GrassmannPoint& b);

/// Chordal distance, d^2 = Nt - tr{a a^H b b^H}. Evaluated as ||(I - a a^H) b||_F
/// so that coincident subspaces give 0 to machine precision.
double procrustes_distance(const GrassmannPoint& a, const GrassmannPoint& b);

enum class Metric { geodesic, procrustes };

double distance(Metric metric, const GrassmannPoint& a, const GrassmannPoint& b);

struct KarcherOptions {
    double tau = 0.5;
    double tol = 1e-6;
    int max_iter = 100;
    /// Starting point; the first input point when empty.
    std::optional<GrassmannPoint> init;
};

struct KarcherResult {
    GrassmannPoint mean;
    int iterations = 0;
    double residual = 0.0;  // ||mean tangent|| at the returned point
    std::vector<double> objective_trace;  // (1/M) sum d_g^2 per iteration
};

class KarcherConvergenceError : public DomainError {
public:
    KarcherConvergenceError(GrassmannPoint last, double residual);
    const GrassmannPoint& last_iterate() const { return last_; }
    double residual() const { return residual_; }

private:
    GrassmannPoint last_;
    double residual_;
};

/// Sample Karcher mean by tangent-space gradient steps:
/// mu <- exp_mu(tau * mean_i log_mu(points_i)) until the mean tangent norm
/// drops to tol.
KarcherResult karcher_mean(std::span<const GrassmannPoint> points, const KarcherOptions& options = {});

/// As above, starting from a uniformly chosen input point.
KarcherResult karcher_mean(std::span<const GrassmannPoint> points, KarcherOptions options, Rng& rng);

/// span of a T x Nt i.i.d. CN(0,1) matrix (unitarily invariant distribution).
GrassmannPoint random_uniform_point(Eigen::Index T, Eigen::Index Nt, Rng& rng);

namespace detail {
/// Log map without the cut-locus check. At a principal angle of exactly pi/2
/// the returned direction is one of the equally short geodesics.
CMatrix log_map_unchecked(const GrassmannPoint& a, const GrassmannPoint& b);
}  // namespace detail

}  // namespace grassmod
