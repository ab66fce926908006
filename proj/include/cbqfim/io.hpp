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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <json.hpp>

#include "cbqfim/circuit.hpp"
#include "cbqfim/hamiltonian.hpp"
#include "cbqfim/protocol.hpp"
#include "cbqfim/qng.hpp"

namespace cbqfim {

using Json = nlohmann::json;

/// Unreadable file, malformed JSON, or a document that does not match the schema.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Digest of the canonical (sorted-key, compact) serialization.
std::string digest(const Json& value);

struct CircuitFile {
  CommutingBlockCircuit circuit;
  Eigen::VectorXd parameters;
};

/// {"n_qubits": N, "initial_state": "zero" | "plus" | {"amplitudes": [[re, im], ...]},
///  "layers": [["ZI", "IZ"], ["XX"]], "parameters": [...]}
CircuitFile circuit_from_json(const Json& doc);
Json circuit_to_json(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& parameters);

/// {"terms": [[coefficient, "label"], ...]}
Hamiltonian hamiltonian_from_json(const Json& doc);
Json hamiltonian_to_json(const Hamiltonian& h);

/// Keys (all optional): eta, lambda, max_iters, qfim_mode ("exact" | "shots"),
/// shots, grad_mode ("analytic" | "parameter-shift"), seed, stop_tol.
QngConfig qng_config_from_json(const Json& doc);
Json qng_config_to_json(const QngConfig& config);

Json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m);
Eigen::MatrixXd matrix_from_json(const Json& rows);
Json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v);

Json relations_to_json(const RelationMatrix& relations);
Json mode_to_json(const EstimationMode& mode);
Json ledger_to_json(const ResourceLedger& ledger);
Json provenance_to_json(const std::vector<EntryProvenance>& provenance);
Json trajectory_to_json(const QngTrajectory& trajectory);

}  // namespace cbqfim
