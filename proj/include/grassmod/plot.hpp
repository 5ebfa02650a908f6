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
#include <vector>

#include "grassmod/experiment.hpp"

namespace grassmod {

struct PlotSpec {
    std::string title;
    std::string x_label = "sweep value";
    std::string y_label = "success probability";
};

/// Self-contained SVG line chart: one solid polyline per detector (success
/// probability with 95% whiskers) and one dashed path per detector that
/// carries bound values. Series are ordered by detector name. Throws
/// DomainError on empty input.
std::string emit_plot(const std::vector<ResultRow>& rows, const PlotSpec& spec = {});

}  // namespace grassmod
