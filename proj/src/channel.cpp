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

#include "grassmod/channel.hpp"

#include <cmath>

namespace grassmod {

SystemParams SystemParams::from_db(Eigen::Index Nt, Eigen::Index Nr, Eigen::Index T, double snr_db, int L, int N) {
    SystemParams p{Nt, Nr, T, db_to_linear(snr_db), L, N};
    p.validate();
    return p;
}

void SystemParams::validate() const {
    if (Nt < 1 || T <= Nt) throw DomainError("SystemParams: requires T > Nt >= 1");
    if (Nr < Nt) throw DomainError("SystemParams: requires Nr >= Nt");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("SystemParams: rho must be positive and finite");
    if (L < 2) throw DomainError("SystemParams: L must be at least 2");
    if (N < L) throw DomainError("SystemParams: N must be at least L");
}

double SystemParams::noise_scale() const {
    return std::sqrt(static_cast<double>(Nt) / (rho * static_cast<double>(T)));
}

ChannelUse transmit_symbol(const GrassmannPoint& x, const SystemParams& params, Rng& rng) {
    ChannelUse out;
    out.h = sample_gaussian_matrix(params.Nt, params.Nr, 1.0, rng);
    const CMatrix w = sample_gaussian_matrix(params.T, params.Nr, 1.0, rng);
    out.y = x.generator() * out.h + params.noise_scale() * w;
    return out;
}

SymbolBlock transmit_block(const Codebook& book, const SystemParams& params, const IndexSource& source, Rng& rng) {
    if (book.ambient_dim() != params.T || book.subspace_dim() != params.Nt) {
        throw DomainError("transmit_block: codebook shape does not match params");
    }
    if (!(params.rho > 0.0) || params.Nr < params.Nt) throw DomainError("transmit_block: invalid params");
    const std::size_t n = source.is_fixed() ? source.sequence().size() : static_cast<std::size_t>(params.N);
    SymbolBlock block;
    block.received.reserve(n);
    block.true_indices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = source.is_fixed() ? source.sequence()[i] : rng.uniform_index(book.size());
        if (idx >= book.size()) throw DomainError("transmit_block: index out of range");
        block.true_indices.push_back(idx);
        block.received.push_back(transmit_symbol(book[idx], params, rng).y);
    }
    return block;
}

GrassmannPoint project_symbol(const CMatrix& y, Eigen::Index Nt) {
    if (Nt < 1 || y.rows() <= Nt || y.cols() < Nt) throw DomainError("project_symbol: requires T > Nt and Nr >= Nt");
    const SvdResult d = svd(y);
    if (!(d.s(Nt - 1) >= 1e-12 * d.s(0)) || d.s(0) == 0.0) {
        throw DegenerateInputError("project_symbol: fewer than Nt significant singular values");
    }
    return GrassmannPoint(d.u.leftCols(Nt));
}

void project_block(SymbolBlock& block, Eigen::Index Nt) {
    block.projections.clear();
    block.projections.reserve(block.received.size());
    for (const CMatrix& y : block.received) block.projections.push_back(project_symbol(y, Nt));
}

GrassmannPoint approx_received(const GrassmannPoint& x, const SystemParams& params, double lambda_bar, Rng& rng) {
    if (!(lambda_bar > 0.0)) throw DomainError("approx_received: lambda_bar must be positive");
    const CMatrix& g = x.generator();
    const CMatrix w = sample_gaussian_matrix(g.rows(), g.cols(), 1.0, rng);
    return GrassmannPoint::span_of(g + (params.noise_scale() / lambda_bar) * w);
}

double estimate_lambda_bar(const SystemParams& params, int samples, Rng& rng) {
    if (samples < 100) throw DomainError("estimate_lambda_bar: need at least 100 samples");
    if (params.Nt < 1 || params.Nr < 1) throw DomainError("estimate_lambda_bar: invalid antenna counts");
    double sum = 0.0;
    std::size_t count = 0;
    for (int k = 0; k < samples; ++k) {
        const CMatrix h = sample_gaussian_matrix(params.Nt, params.Nr, 1.0, rng);
        const RVector s = Eigen::JacobiSVD<CMatrix>(h).singularValues();
        sum += s.sum();
        count += static_cast<std::size_t>(s.size());
    }
    return sum / static_cast<double>(count);
}

}  // namespace grassmod
