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

#include "grassmod/io.hpp"

#include <fstream>

namespace grassmod {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
    }
    return out;
}

CMatrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(rows * cols)) {
        throw DomainError("matrix_from_json: expected rows*cols [re,im] pairs");
    }
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = j.at(static_cast<std::size_t>(r * cols + c));
            if (!e.is_array() || e.size() != 2) throw DomainError("matrix_from_json: entry is not [re,im]");
            m(r, c) = cdouble(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

json codebook_to_json(const Codebook& book) {
    json cw = json::array();
    for (const GrassmannPoint& p : book.codewords()) cw.push_back(matrix_to_json(p.generator()));
    return json{{"T", book.ambient_dim()}, {"Nt", book.subspace_dim()}, {"codewords", cw}};
}

Codebook codebook_from_json(const json& j) {
    try {
        const auto T = j.at("T").get<Eigen::Index>();
        const auto Nt = j.at("Nt").get<Eigen::Index>();
        std::vector<GrassmannPoint> points;
        for (const json& c : j.at("codewords")) points.emplace_back(matrix_from_json(c, T, Nt));
        return Codebook(std::move(points));
    } catch (const json::exception& e) {
        throw DomainError(std::string("codebook_from_json: ") + e.what());
    }
}

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void save_codebook(const Codebook& book, const std::string& path) {
    write_text(path, codebook_to_json(book).dump(2) + "\n");
}

Codebook load_codebook(const std::string& path) { return codebook_from_json(read_json(path)); }

json block_to_json(const SymbolBlock& block, const SystemParams& params) {
    json received = json::array();
    for (const CMatrix& y : block.received) received.push_back(matrix_to_json(y));
    return json{{"params",
                 {{"Nt", params.Nt}, {"Nr", params.Nr}, {"T", params.T}, {"rho", params.rho}, {"L", params.L},
                  {"N", params.N}}},
                {"true_indices", block.true_indices},
                {"received", received}};
}

namespace {

NoiseConvention parse_convention(const std::string& s) {
    if (s == "circular") return NoiseConvention::circular;
    if (s == "unit_per_component") return NoiseConvention::unit_per_component;
    throw DomainError("unknown noise convention: " + s);
}

template <typename T>
void read_if(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    try {
        c.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
        if (j.contains("params")) {
            const json& p = j.at("params");
            read_if(p, "Nt", c.params.Nt);
            read_if(p, "Nr", c.params.Nr);
            read_if(p, "T", c.params.T);
            read_if(p, "L", c.params.L);
            read_if(p, "N", c.params.N);
            if (p.contains("snr_db")) c.params.rho = db_to_linear(p.at("snr_db").get<double>());
        }
        if (j.contains("sweep")) {
            read_if(j.at("sweep"), "axis", c.sweep.axis);
            read_if(j.at("sweep"), "values", c.sweep.values);
        }
        read_if(j, "trials", c.trials);
        read_if(j, "seed", c.seed);
        read_if(j, "output_dir", c.output_dir);
        read_if(j, "emit_svg", c.emit_svg);
        read_if(j, "detectors", c.detectors);
        read_if(j, "kmeans_restarts", c.kmeans_restarts);
        read_if(j, "threads", c.threads);
        if (j.contains("analysis")) {
            const json& a = j.at("analysis");
            read_if(a, "gamma0", c.analysis.gamma0);
            if (a.contains("a") && !a.at("a").is_null()) c.analysis.a = a.at("a").get<double>();
            read_if(a, "eta_D", c.analysis.eta_D);
            read_if(a, "epsilon", c.analysis.epsilon);
            read_if(a, "delta", c.analysis.delta);
            if (a.contains("convention")) c.analysis.convention = parse_convention(a.at("convention").get<std::string>());
            read_if(a, "use_packing_bound", c.analysis.use_packing_bound);
            read_if(a, "lambda_samples", c.analysis.lambda_samples);
        }
        if (j.contains("packing")) {
            read_if(j.at("packing"), "restarts", c.packing.restarts);
            read_if(j.at("packing"), "iterations", c.packing.iterations);
            read_if(j.at("packing"), "candidates", c.packing.candidates);
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json analysis{{"gamma0", c.analysis.gamma0},
                  {"eta_D", c.analysis.eta_D},
                  {"epsilon", c.analysis.epsilon},
                  {"delta", c.analysis.delta},
                  {"convention", c.analysis.convention == NoiseConvention::circular ? "circular" : "unit_per_component"},
                  {"use_packing_bound", c.analysis.use_packing_bound},
                  {"lambda_samples", c.analysis.lambda_samples}};
    if (c.analysis.a) analysis["a"] = *c.analysis.a;
    return json{{"experiment", to_string(c.experiment)},
                {"params",
                 {{"Nt", c.params.Nt},
                  {"Nr", c.params.Nr},
                  {"T", c.params.T},
                  {"snr_db", 10.0 * std::log10(c.params.rho)},
                  {"L", c.params.L},
                  {"N", c.params.N}}},
                {"sweep", {{"axis", c.sweep.axis}, {"values", c.sweep.values}}},
                {"trials", c.trials},
                {"seed", c.seed},
                {"output_dir", c.output_dir},
                {"emit_svg", c.emit_svg},
                {"detectors", c.detectors},
                {"analysis", analysis},
                {"packing",
                 {{"restarts", c.packing.restarts},
                  {"iterations", c.packing.iterations},
                  {"candidates", c.packing.candidates}}},
                {"kmeans_restarts", c.kmeans_restarts},
                {"threads", c.threads}};
}

ExperimentConfig load_config(const std::string& path) { return config_from_json(read_json(path)); }

}  // namespace grassmod
