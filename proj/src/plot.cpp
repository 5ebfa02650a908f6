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

#include "grassmod/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "grassmod/error.hpp"

namespace grassmod {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string emit_plot(const std::vector<ResultRow>& rows, const PlotSpec& spec) {
    if (rows.empty()) throw DomainError("emit_plot: no rows");
    std::map<std::string, std::vector<const ResultRow*>> series;
    double xmin = rows.front().sweep_value;
    double xmax = xmin;
    for (const ResultRow& r : rows) {
        series[r.detector].push_back(&r);
        xmin = std::min(xmin, r.sweep_value);
        xmax = std::max(xmax, r.sweep_value);
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(spec.title) << "</text>\n";
    svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
        << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double y = k / 4.0;
        svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
            << label(y) << "</text>\n";
        const double x = xmin + (xmax - xmin) * k / 4.0;
        svg << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
            << label(x) << "</text>\n";
    }
    svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 14) << "\" text-anchor=\"middle\">"
        << escape(spec.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num(kTop + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";

    std::size_t color = 0;
    double legend_y = kTop + 10;
    for (auto& [name, pts] : series) {
        std::stable_sort(pts.begin(), pts.end(),
                         [](const ResultRow* a, const ResultRow* b) { return a->sweep_value < b->sweep_value; });
        const char* stroke = kPalette[color++ % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            svg << (i ? " " : "") << num(px(pts[i]->sweep_value)) << ',' << num(py(pts[i]->success_prob));
        }
        svg << "\"/>\n";
        for (const ResultRow* r : pts) {
            const double x = px(r->sweep_value);
            svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(py(r->ci_lo)) << "\" x2=\"" << num(x) << "\" y2=\""
                << num(py(r->ci_hi)) << "\" stroke=\"" << stroke << "\"/>\n";
        }
        std::vector<const ResultRow*> bounded;
        for (const ResultRow* r : pts) {
            if (r->bound_value) bounded.push_back(r);
        }
        if (!bounded.empty()) {
            svg << "<path fill=\"none\" stroke=\"" << stroke << "\" stroke-dasharray=\"5,4\" d=\"";
            for (std::size_t i = 0; i < bounded.size(); ++i) {
                svg << (i ? " L" : "M") << num(px(bounded[i]->sweep_value)) << ' ' << num(py(*bounded[i]->bound_value));
            }
            svg << "\"/>\n";
        }
        svg << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(legend_y) << "\" x2=\""
            << num(kWidth - kRight + 36) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << stroke
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << num(kWidth - kRight + 42) << "\" y=\"" << num(legend_y + 4) << "\">" << escape(name)
            << (bounded.empty() ? "" : " (dashed: bound)") << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace grassmod
