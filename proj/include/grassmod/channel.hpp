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

#include "grassmod/constellation.hpp"

namespace grassmod {

/// Link configuration. rho is the linear transmit SNR; interfaces that take
/// dB go through from_db.
struct SystemParams {
    Eigen::Index Nt = 2;
    Eigen::Index Nr = 4;
    Eigen::Index T = 4;
    double rho = 100.0;
    int L = 8;
    int N = 400;

    static SystemParams from_db(Eigen::Index Nt, Eigen::Index Nr, Eigen::Index T, double snr_db, int L, int N);

    /// Throws DomainError unless Nr >= Nt, T > Nt >= 1, rho > 0, L >= 2, N >= L.
    void validate() const;

    /// sqrt(Nt / (rho T)), the noise amplitude in Y = X H + sqrt(Nt/(rho T)) W.
    double noise_scale() const;
};

/// Received symbols of one fading block. true_indices is ground truth for
/// evaluation only; detectors read `received` and `projections`.
struct SymbolBlock {
    std::vector<CMatrix> received;
    std::vector<std::size_t> true_indices;
    std::vector<GrassmannPoint> projections;

    std::size_t size() const { return received.size(); }
};

/// Codeword indices drawn i.i.d. uniform, or replayed from a fixed sequence
/// (whose length then sets the block length).
class IndexSource {
public:
    static IndexSource uniform() { return IndexSource(std::nullopt); }
    static IndexSource fixed(std::vector<std::size_t> sequence) { return IndexSource(std::move(sequence)); }

    bool is_fixed() const { return sequence_.has_value(); }
    const std::vector<std::size_t>& sequence() const { return *sequence_; }

private:
    explicit IndexSource(std::optional<std::vector<std::size_t>> s) : sequence_(std::move(s)) {}
    std::optional<std::vector<std::size_t>> sequence_;
};

struct ChannelUse {
    CMatrix y;  // T x Nr
    CMatrix h;  // Nt x Nr
};

/// One channel use: H and W i.i.d. CN(0,1), drawn in that order.
ChannelUse transmit_symbol(const GrassmannPoint& x, const SystemParams& params, Rng& rng);

/// N symbols through independent block-fading channels. Per symbol the draw
/// order is index (uniform source only), H, W. Projections are left empty.
SymbolBlock transmit_block(const Codebook& book, const SystemParams& params, const IndexSource& source, Rng& rng);

/// Span of the Nt dominant left singular vectors of y. Throws
/// DegenerateInputError when sigma_Nt < 1e-12 sigma_1.
GrassmannPoint project_symbol(const CMatrix& y, Eigen::Index Nt);

/// Fills block.projections.
void project_block(SymbolBlock& block, Eigen::Index Nt);

/// Isotropic surrogate of a received symbol:
/// span(x + (1/lambda_bar) sqrt(Nt/(rho T)) W).
GrassmannPoint approx_received(const GrassmannPoint& x, const SystemParams& params, double lambda_bar, Rng& rng);

/// Monte Carlo mean singular value of an Nt x Nr CN(0,1) matrix.
double estimate_lambda_bar(const SystemParams& params, int samples, Rng& rng);

}  // namespace grassmod
