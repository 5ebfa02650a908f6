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

#include "grassmod/manifold.hpp"

#include <cmath>
#include <string>

namespace grassmod {

namespace {

constexpr double kOrthonormalTol = 1e-10;
constexpr double kTangentTol = 1e-8;
constexpr double kCutLocusTol = 1e-10;

// Principal-angle decomposition of (a, b): with a^H b = W diag(c) Z^H,
// perp = (I - a a^H) b Z has mutually orthogonal columns of norm sin(theta).
struct AngleDecomposition {
    CMatrix w;
    CMatrix perp;
    RVector cosines;
    RVector sines;
    RVector angles;
};

AngleDecomposition decompose(const GrassmannPoint& a, const GrassmannPoint& b) {
    const CMatrix& ga = a.generator();
    const CMatrix& gb = b.generator();
    if (ga.rows() != gb.rows() || ga.cols() != gb.cols()) {
        throw DomainError("Grassmann points have different dimensions");
    }
    const CMatrix cross = ga.adjoint() * gb;
    Eigen::JacobiSVD<CMatrix> solver(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    AngleDecomposition out;
    out.w = solver.matrixU();
    out.cosines = solver.singularValues();
    const CMatrix bz = gb * solver.matrixV();
    out.perp = bz - ga * (cross * solver.matrixV());
    const Eigen::Index k = out.cosines.size();
    out.sines.resize(k);
    out.angles.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        out.sines(j) = out.perp.col(j).norm();
        out.angles(j) = std::atan2(out.sines(j), std::min(out.cosines(j), 1.0));
    }
    return out;
}

CMatrix log_from(const AngleDecomposition& d) {
    RVector scale(d.angles.size());
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        scale(j) = d.sines(j) > 0.0 ? d.angles(j) / d.sines(j) : 1.0;
    }
    return d.perp * scale.cast<cdouble>().asDiagonal() * d.w.adjoint();
}

}  // namespace

GrassmannPoint::GrassmannPoint(CMatrix generator) : generator_(std::move(generator)) {
    if (generator_.cols() < 1 || generator_.rows() <= generator_.cols()) {
        throw DomainError("GrassmannPoint: generator must be tall (T > Nt >= 1)");
    }
    if (!all_finite(generator_)) throw DomainError("GrassmannPoint: non-finite generator");
    const Eigen::Index k = generator_.cols();
    const double err = (generator_.adjoint() * generator_ - CMatrix::Identity(k, k)).norm();
    if (err > kOrthonormalTol) {
        throw DomainError("GrassmannPoint: generator columns not orthonormal (error " +
                          std::to_string(err) + ")");
    }
}

GrassmannPoint GrassmannPoint::span_of(const CMatrix& m) {
    if (m.cols() < 1 || m.rows() <= m.cols()) {
        throw DomainError("span_of: matrix must be tall (T > Nt >= 1)");
    }
    return GrassmannPoint(orthonormalize(m));
}

TangentVector::TangentVector(GrassmannPoint base, CMatrix delta)
    : base_(std::move(base)), delta_(std::move(delta)) {
    if (delta_.rows() != base_.ambient_dim() || delta_.cols() != base_.subspace_dim()) {
        throw DomainError("TangentVector: shape mismatch");
    }
    if (!all_finite(delta_)) throw DomainError("TangentVector: non-finite entry");
    const double err = (base_.generator().adjoint() * delta_).norm();
    if (err > kTangentTol * std::max(1.0, delta_.norm())) {
        throw DomainError("TangentVector: delta not orthogonal to base");
    }
}

GrassmannPoint exp_map(const GrassmannPoint& base, const TangentVector& tangent, double t) {
    if (procrustes_distance(base, tangent.base()) > kTangentTol) {
        throw DomainError("exp_map: tangent vector based at a different point");
    }
    const CMatrix& y0 = tangent.base().generator();
    CMatrix step = t * tangent.delta();
    if (step.norm() == 0.0) return tangent.base();
    // Drop the rounding-level component along the base so U stays orthogonal to y0.
    step -= y0 * (y0.adjoint() * step);
    const SvdResult d = svd(step);
    const RVector cosines = d.s.array().cos();
    const RVector sines = d.s.array().sin();
    CMatrix out = (y0 * d.v * cosines.cast<cdouble>().asDiagonal() +
                   d.u * sines.cast<cdouble>().asDiagonal()) *
                  d.v.adjoint();
    // One Newton-Schulz polar step: out (3I - out^H out) / 2. Keeps repeated
    // steps on the Stiefel manifold without changing the representative beyond
    // rounding.
    const Eigen::Index k = out.cols();
    out = out * (1.5 * CMatrix::Identity(k, k) - 0.5 * (out.adjoint() * out));
    return GrassmannPoint(std::move(out));
}

TangentVector log_map(const GrassmannPoint& a, const GrassmannPoint& b) {
    const AngleDecomposition d = decompose(a, b);
    if (d.cosines.minCoeff() < kCutLocusTol) {
        throw CutLocusError("log_map: a^H b is singular (principal angle pi/2)");
    }
    return TangentVector(a, log_from(d));
}

CMatrix detail::log_map_unchecked(const GrassmannPoint& a, const GrassmannPoint& b) {
    return log_from(decompose(a, b));
}

RVector principal_angles(const GrassmannPoint& a, const GrassmannPoint& b) {
    return decompose(a, b).angles;
}

double geodesic_distance(const GrassmannPoint& a, const GrassmannPoint& b) {
    return principal_angles(a, b).norm();
}

double procrustes_distance(const GrassmannPoint& a, const GrassmannPoint& b) {
    const CMatrix& ga = a.generator();
    const CMatrix& gb = b.generator();
    if (ga.rows() != gb.rows() || ga.cols() != gb.cols()) {
        throw DomainError("Grassmann points have different dimensions");
    }
    return (gb - ga * (ga.adjoint() * gb)).norm();
}

double distance(Metric metric, const GrassmannPoint& a, const GrassmannPoint& b) {
    return metric == Metric::geodesic ? geodesic_distance(a, b) : procrustes_distance(a, b);
}

KarcherConvergenceError::KarcherConvergenceError(GrassmannPoint last, double residual)
    : DomainError("karcher_mean: no convergence within max_iter (residual " +
                  std::to_string(residual) + ")"),
      last_(std::move(last)),
      residual_(residual) {}

KarcherResult karcher_mean(std::span<const GrassmannPoint> points, const KarcherOptions& options) {
    if (points.empty()) throw DomainError("karcher_mean: empty input");
    if (!(options.tau > 0.0) || !(options.tol > 0.0) || options.max_iter < 1) {
        throw DomainError("karcher_mean: invalid options");
    }
    KarcherResult result{options.init.value_or(points.front()), 0, 0.0, {}};
    const double inv_m = 1.0 / static_cast<double>(points.size());
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const CMatrix& mu = result.mean.generator();
        CMatrix mean_tangent = CMatrix::Zero(mu.rows(), mu.cols());
        double objective = 0.0;
        for (const GrassmannPoint& p : points) {
            const CMatrix t = detail::log_map_unchecked(result.mean, p);
            objective += t.squaredNorm();
            mean_tangent += t;
        }
        mean_tangent *= inv_m;
        result.objective_trace.push_back(objective * inv_m);
        result.iterations = iter;
        result.residual = mean_tangent.norm();
        if (result.residual <= options.tol) return result;
        if (iter == options.max_iter) break;
        result.mean = exp_map(result.mean, TangentVector(result.mean, std::move(mean_tangent)), options.tau);
    }
    throw KarcherConvergenceError(result.mean, result.residual);
}

KarcherResult karcher_mean(std::span<const GrassmannPoint> points, KarcherOptions options, Rng& rng) {
    if (points.empty()) throw DomainError("karcher_mean: empty input");
    options.init = points[rng.uniform_index(points.size())];
    return karcher_mean(points, options);
}

GrassmannPoint random_uniform_point(Eigen::Index T, Eigen::Index Nt, Rng& rng) {
    return GrassmannPoint::span_of(sample_gaussian_matrix(T, Nt, 1.0, rng));
}

}  // namespace grassmod
