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

#include <string>

#include "json.hpp"

#include "grassmod/channel.hpp"
#include "grassmod/experiment.hpp"

namespace grassmod {

/// {"T":..,"Nt":..,"codewords":[[[re,im],...],...]} with entries row-major.
/// d_min is recomputed on load.
nlohmann::json codebook_to_json(const Codebook& book);
Codebook codebook_from_json(const nlohmann::json& j);
void save_codebook(const Codebook& book, const std::string& path);
Codebook load_codebook(const std::string& path);

/// Debug export: params, true_indices and received matrices.
nlohmann::json block_to_json(const SymbolBlock& block, const SystemParams& params);

/// Matrix as row-major [[re,im],...].
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

}  // namespace grassmod
