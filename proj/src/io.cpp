// Copyright 2026 The cbqfim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cbqfim/io.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "cbqfim/errors.hpp"

namespace cbqfim {

namespace {

template <typename T>
T get_field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T get_optional(const Json& doc, const char* key, T fallback) {
  return doc.contains(key) ? get_field<T>(doc, key) : fallback;
}

Eigen::VectorXd doubles(const Json& array, const char* what) {
  if (!array.is_array()) throw InputError(std::string(what) + " must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(array.size()));
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (!array[i].is_number()) throw InputError(std::string(what) + " entries must be numbers");
    out(static_cast<Eigen::Index>(i)) = array[i].get<double>();
  }
  return out;
}

InitialState initial_state_from_json(const Json& doc) {
  if (doc.is_string()) {
    const auto s = doc.get<std::string>();
    if (s == "zero") return InitialState::zero();
    if (s == "plus") return InitialState::plus();
    throw InputError("initial_state must be \"zero\", \"plus\" or {\"amplitudes\": ...}");
  }
  if (!doc.is_object() || !doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
    throw InputError("initial_state object needs an \"amplitudes\" array");
  }
  const Json& amps = doc["amplitudes"];
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const Eigen::VectorXd pair = doubles(amps[i], "amplitude");
    if (pair.size() != 2) throw InputError("amplitudes are [re, im] pairs");
    v(static_cast<Eigen::Index>(i)) = {pair(0), pair(1)};
  }
  return InitialState::custom(std::move(v));
}

Json initial_state_to_json(const InitialState& s) {
  switch (s.kind) {
    case InitialState::Kind::AllZero:
      return "zero";
    case InitialState::Kind::AllPlus:
      return "plus";
    case InitialState::Kind::Custom:
      break;
  }
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
    amps.push_back({s.amplitudes(i).real(), s.amplitudes(i).imag()});
  }
  return {{"amplitudes", amps}};
}

// Non-finite values are not representable in JSON.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw InputError("write to " + path.string() + " failed");
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string digest(const Json& value) { return sha256_hex(value.dump()); }

CircuitFile circuit_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("circuit document must be an object");
  const int n = get_field<int>(doc, "n_qubits");
  if (n < 1 || n > 30) throw InputError("n_qubits must lie in [1, 30]");
  const InitialState initial =
      doc.contains("initial_state") ? initial_state_from_json(doc["initial_state"]) : InitialState::zero();

  if (!doc.contains("layers") || !doc["layers"].is_array()) throw InputError("\"layers\" must be an array");
  std::vector<std::vector<PauliString>> layers;
  for (const Json& layer : doc["layers"]) {
    if (!layer.is_array()) throw InputError("each layer must be an array of Pauli labels");
    auto& gates = layers.emplace_back();
    for (const Json& label : layer) {
      if (!label.is_string()) throw InputError("Pauli labels must be strings");
      gates.push_back(parse_pauli(label.get<std::string>()));
    }
  }
  CommutingBlockCircuit circuit(n, std::move(layers), initial);

  if (!doc.contains("parameters")) throw InputError("missing field \"parameters\"");
  Eigen::VectorXd params = doubles(doc["parameters"], "parameters");
  if (params.size() != circuit.n_params()) {
    throw DimensionError("circuit has " + std::to_string(circuit.n_params()) + " generators but " +
                         std::to_string(params.size()) + " parameters");
  }
  if (!params.allFinite()) throw InputError("parameters must be finite");
  return {std::move(circuit), std::move(params)};
}

Json circuit_to_json(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& parameters) {
  Json layers = Json::array();
  for (const auto& layer : circuit.layers()) {
    Json labels = Json::array();
    for (const auto& g : layer.gates) labels.push_back(format(g.generator));
    layers.push_back(std::move(labels));
  }
  return {{"n_qubits", circuit.n_qubits()},
          {"initial_state", initial_state_to_json(circuit.initial_state())},
          {"layers", std::move(layers)},
          {"parameters", vector_to_json(parameters)}};
}

Hamiltonian hamiltonian_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array() || doc["terms"].empty()) {
    throw InputError("Hamiltonian document needs a non-empty \"terms\" array");
  }
  std::vector<Hamiltonian::Term> terms;
  for (const Json& t : doc["terms"]) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_string()) {
      throw InputError("Hamiltonian terms are [coefficient, \"label\"] pairs");
    }
    terms.push_back({t[0].get<double>(), parse_pauli(t[1].get<std::string>())});
  }
  const int n = terms.front().op.n_qubits();
  return {n, std::move(terms)};
}

Json hamiltonian_to_json(const Hamiltonian& h) {
  Json terms = Json::array();
  for (const auto& t : h.terms()) terms.push_back({t.coefficient, format(t.op)});
  return {{"terms", std::move(terms)}};
}

QngConfig qng_config_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("QNG config must be an object");
  QngConfig c;
  c.eta = get_optional(doc, "eta", c.eta);
  c.lambda = get_optional(doc, "lambda", c.lambda);
  c.max_iters = get_optional(doc, "max_iters", c.max_iters);
  c.seed = get_optional(doc, "seed", c.seed);
  c.stop_tol = get_optional(doc, "stop_tol", c.stop_tol);

  const auto qfim_mode = get_optional<std::string>(doc, "qfim_mode", "exact");
  if (qfim_mode == "exact") {
    c.qfim_mode = EstimationMode::exact();
  } else if (qfim_mode == "shots") {
    const auto shots = get_optional<std::int64_t>(doc, "shots", 1000);
    if (shots < 2) throw InputError("shots must be at least 2");
    c.qfim_mode = EstimationMode::with_shots(static_cast<std::size_t>(shots));
  } else {
    throw InputError("qfim_mode must be \"exact\" or \"shots\"");
  }

  const auto grad_mode = get_optional<std::string>(doc, "grad_mode", "analytic");
  if (grad_mode == "analytic") {
    c.grad_mode = GradientMode::Analytic;
  } else if (grad_mode == "parameter-shift") {
    c.grad_mode = GradientMode::ParameterShift;
  } else {
    throw InputError("grad_mode must be \"analytic\" or \"parameter-shift\"");
  }

  if (!(c.eta > 0) || !(c.lambda >= 0) || c.max_iters < 0 || !(c.stop_tol >= 0)) {
    throw InputError("QNG config needs eta > 0, lambda >= 0, max_iters >= 0, stop_tol >= 0");
  }
  return c;
}

Json qng_config_to_json(const QngConfig& c) {
  Json out = {{"eta", c.eta},
              {"lambda", c.lambda},
              {"max_iters", c.max_iters},
              {"qfim_mode", c.qfim_mode.kind == EstimationMode::Kind::Shots ? "shots" : "exact"},
              {"grad_mode", c.grad_mode == GradientMode::Analytic ? "analytic" : "parameter-shift"},
              {"seed", c.seed},
              {"stop_tol", c.stop_tol}};
  if (c.qfim_mode.kind == EstimationMode::Kind::Shots) out["shots"] = c.qfim_mode.shots;
  return out;
}

Json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(finite_or_null(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& rows) {
  if (!rows.is_array()) throw InputError("matrix must be an array of rows");
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = n_rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const Eigen::VectorXd row = doubles(rows[static_cast<std::size_t>(i)], "matrix row");
    if (row.size() != n_cols) throw InputError("matrix rows have different lengths");
    m.row(i) = row.transpose();
  }
  return m;
}

Json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(finite_or_null(v(i)));
  return out;
}

Json relations_to_json(const RelationMatrix& relations) {
  Json rows = Json::array();
  for (int a = 0; a < relations.size(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < relations.size(); ++b) row.push_back(to_string(relations(a, b)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json mode_to_json(const EstimationMode& mode) {
  if (mode.kind == EstimationMode::Kind::ExactExpectation) return {{"kind", "exact"}};
  return {{"kind", "shots"}, {"shots", mode.shots}};
}

Json ledger_to_json(const ResourceLedger& ledger) {
  Json out = {{"n_preparations", ledger.n_preparations},
              {"qubit_counts", ledger.qubit_counts},
              {"total_shots", ledger.total_shots},
              {"mode", mode_to_json(ledger.mode)}};
  out["target_error"] = ledger.target_error ? Json(*ledger.target_error) : Json(nullptr);
  return out;
}

Json provenance_to_json(const std::vector<EntryProvenance>& provenance) {
  Json out = Json::array();
  for (const auto& p : provenance) {
    out.push_back({{"row", p.row},
                   {"col", p.col},
                   {"preparation_id", p.preparation_id},
                   {"observable", p.observable},
                   {"shots", p.shots},
                   {"berry_preparations", {p.berry_preparations.first, p.berry_preparations.second}}});
  }
  return out;
}

Json trajectory_to_json(const QngTrajectory& trajectory) {
  Json records = Json::array();
  for (const auto& r : trajectory.records) {
    Json rec = {{"iteration", r.iteration},
                {"theta", vector_to_json(r.theta)},
                {"energy", r.energy},
                {"gradient_norm", r.gradient_norm},
                {"cumulative_preparations", r.cumulative_preparations},
                {"cumulative_shots", r.cumulative_shots}};
    if (r.qfim) {
      rec["qfim"] = {{"min_eigenvalue", r.qfim->min_eigenvalue},
                     {"max_eigenvalue", r.qfim->max_eigenvalue},
                     {"condition_number", finite_or_null(r.qfim->condition_number)}};
    } else {
      rec["qfim"] = nullptr;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace cbqfim
