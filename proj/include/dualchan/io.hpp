// Copyright 2026 The dualchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUALCHAN_IO_HPP
#define DUALCHAN_IO_HPP

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualchan/certificates.hpp"
#include "dualchan/channel.hpp"
#include "dualchan/conj_sampler.hpp"
#include "dualchan/matrix.hpp"
#include "dualchan/petz.hpp"
#include "dualchan/transpose.hpp"

namespace dualchan {

inline constexpr const char* kSchemaTag = "dualchan/1";

using Json = nlohmann::json;

//------------------------------------------------------------------------------
// Matrices as nested row-major arrays of [re, im] pairs
//------------------------------------------------------------------------------

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (!row.is_array() || row.size() != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& entry = row.at(k);
      if (!entry.is_array() || entry.size() != 2)
        throw std::invalid_argument("matrix: entries must be [re, im] pairs");
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("parse failure in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

//------------------------------------------------------------------------------
// Channel files: { "d_in": int, "d_out": int, "kraus": [matrix...] }
//------------------------------------------------------------------------------

inline Json channel_to_json(const QuantumChannel& ch) {
  Json j;
  j["d_in"] = ch.d_in;
  j["d_out"] = ch.d_out;
  Json kraus = Json::array();
  for (const auto& k : ch.kraus) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

inline QuantumChannel channel_from_json(const Json& j, double tol = kCptpTol) {
  if (!j.contains("d_in") || !j.contains("d_out") || !j.contains("kraus"))
    throw std::invalid_argument("channel: need d_in, d_out and kraus fields");
  const Index d_in = j.at("d_in").get<Index>();
  const Index d_out = j.at("d_out").get<Index>();
  std::vector<ComplexMatrix> kraus;
  for (const auto& km : j.at("kraus")) kraus.push_back(matrix_from_json(km));
  return QuantumChannel::from_kraus(std::move(kraus), d_in, d_out, tol);
}

inline void save_channel(const std::string& path, const QuantumChannel& ch) {
  write_json_file(path, channel_to_json(ch));
}

inline QuantumChannel load_channel(const std::string& path, double tol = kCptpTol) {
  return channel_from_json(read_json_file(path), tol);
}

//------------------------------------------------------------------------------
// States, observables, Petz instances
//------------------------------------------------------------------------------

inline ComplexMatrix bare_matrix_from_json(const Json& j) {
  return matrix_from_json(j.is_object() && j.contains("matrix") ? j.at("matrix") : j);
}

inline DensityOperator load_density(const std::string& path, double tol = kStateTol) {
  return DensityOperator::validated(bare_matrix_from_json(read_json_file(path)), tol);
}

inline Observable load_observable(const std::string& path, double tol = kStateTol) {
  return Observable::validated(bare_matrix_from_json(read_json_file(path)), tol);
}

// Instance file: channel reference (path, resolved relative to the instance
// file) or inline channel object, plus sigma/omega/observable matrices.
inline PetzInstance load_petz_instance(const std::string& path, double tol = kCptpTol) {
  const Json j = read_json_file(path);
  PetzInstance inst;
  if (!j.contains("channel")) throw std::invalid_argument("instance: missing channel");
  const auto& cj = j.at("channel");
  if (cj.is_string()) {
    const auto base = std::filesystem::path(path).parent_path();
    inst.channel = load_channel((base / cj.get<std::string>()).string(), tol);
  } else {
    inst.channel = channel_from_json(cj, tol);
  }
  inst.sigma = DensityOperator::validated(bare_matrix_from_json(j.at("sigma")));
  inst.omega = DensityOperator::validated(bare_matrix_from_json(j.at("omega")));
  inst.observable = Observable::validated(bare_matrix_from_json(j.at("observable")));
  if (j.contains("support_tol")) inst.support_tol = j.at("support_tol").get<double>();
  inst.validate();
  return inst;
}

inline Json petz_instance_to_json(const PetzInstance& inst) {
  Json j;
  j["channel"] = channel_to_json(inst.channel);
  j["sigma"] = matrix_to_json(inst.sigma.matrix);
  j["omega"] = matrix_to_json(inst.omega.matrix);
  j["observable"] = matrix_to_json(inst.observable.matrix);
  j["support_tol"] = inst.support_tol;
  return j;
}

//------------------------------------------------------------------------------
// Reports
//------------------------------------------------------------------------------

inline Json report_to_json(const EstimationReport& r) {
  Json j;
  j["schema"] = kSchemaTag;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["rounds"] = r.rounds;
  j["accepted"] = r.accepted;
  j["seed"] = r.seed;
  j["oracle_value"] = r.oracle_value;
  j["max_abs_sample"] = r.max_abs_sample;
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

inline Json report_to_json(const PetzEstimationReport& r) {
  Json j;
  j["schema"] = kSchemaTag;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["attempts"] = r.attempts;
  j["accepted"] = r.accepted;
  j["empirical_acceptance"] = r.empirical_acceptance;
  j["eta_bound"] = r.eta_bound;
  j["seed"] = r.seed;
  j["oracle_value"] = r.oracle_value;
  j["branch_attempts"] = r.branch_attempts;
  j["branch_accepted"] = r.branch_accepted;
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

inline Json report_to_json(const CertificateReport& r) {
  Json j;
  j["schema"] = kSchemaTag;
  j["d_a"] = r.d_a;
  j["d_b"] = r.d_b;
  j["primal_objective"] = r.primal_objective;
  j["dual_objective"] = r.dual_objective;
  j["expected"] = r.expected;
  j["max_violation"] = r.max_violation;
  j["pass"] = r.pass;
  return j;
}

inline Json report_to_json(const TransposeSimResult& r) {
  Json j;
  j["schema"] = kSchemaTag;
  j["p_suc"] = r.p_suc;
  j["conditional_state"] =
      r.conditional_state ? matrix_to_json(r.conditional_state->matrix) : Json(nullptr);
  return j;
}

}  // namespace dualchan

#endif  // DUALCHAN_IO_HPP
