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

#include "cbqfim/simulator.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace cbqfim {

namespace {

void require_params(const CommutingBlockCircuit& circuit,
                    const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (theta.size() != circuit.n_params()) {
    throw DimensionError("circuit has " + std::to_string(circuit.n_params()) +
                         " parameters, got " + std::to_string(theta.size()));
  }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Lazily evaluated outcome tree of a sequential projective measurement.
// Node ids are heap-ordered: root 1, children 2k (+1) and 2k+1 (-1).
class OutcomeTree {
 public:
  OutcomeTree(const StateVector& state, std::span<const PauliString> generators)
      : state_(state), generators_(generators) {}

  double p_plus(std::uint64_t node, int depth) {
    if (auto it = cache_.find(node); it != cache_.end()) return it->second;
    StateVector projected = state_;
    for (int d = 0; d < depth; ++d) {
      const bool minus = (node >> (depth - 1 - d)) & 1u;
      StateVector flipped = pauli_applied(projected, generators_[static_cast<std::size_t>(d)]);
      projected = minus ? StateVector(0.5 * (projected - flipped))
                        : StateVector(0.5 * (projected + flipped));
    }
    const double weight = projected.squaredNorm();
    const auto& p = generators_[static_cast<std::size_t>(depth)];
    const double mean = weight > 0 ? expectation(projected, p) / weight : 0.0;
    double prob = 0.5 * (1.0 + mean);
    if (prob < -1e-9 || prob > 1.0 + 1e-9) {
      throw NumericalError("outcome probability " + std::to_string(prob) + " outside [0, 1]");
    }
    prob = std::clamp(prob, 0.0, 1.0);
    cache_.emplace(node, prob);
    return prob;
  }

 private:
  const StateVector& state_;
  std::span<const PauliString> generators_;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace

StateVector run_prefix(const CommutingBlockCircuit& circuit,
                       const Eigen::Ref<const Eigen::VectorXd>& theta, int count) {
  require_params(circuit, theta);
  StateVector state = init_state(circuit.n_qubits(), circuit.initial_state());
  apply_layers(state, prefix(circuit, count), theta);
  return state;
}

StateVector run_circuit(const CommutingBlockCircuit& circuit,
                        const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return run_prefix(circuit, theta, circuit.n_layers());
}

StateVector prepare_lcu_state(const StateVector& psi, std::span<const Layer> segment_layers,
                              std::span<const int> layer_signs,
                              const Eigen::Ref<const Eigen::VectorXd>& theta, LcuVariant variant) {
  if (segment_layers.empty()) throw PreconditionError("LCU segment is empty");
  if (layer_signs.size() != segment_layers.size()) {
    throw DimensionError("LCU needs one sign per segment layer");
  }
  const int n = qubit_count(psi);
  for (const auto& layer : segment_layers) {
    for (const auto& g : layer.gates) {
      if (g.generator.n_qubits() != n) throw DimensionError("segment and state sizes differ");
    }
  }

  StateVector direct = psi;
  apply_layers(direct, segment_layers, theta);
  StateVector twiddled = psi;
  apply_layers(twiddled, segment_layers, theta, layer_signs);

  const auto dim = psi.size();
  StateVector out(2 * dim);
  auto zero_branch = out.head(dim);
  auto one_branch = out.tail(dim);
  if (variant == LcuVariant::CommutingCase) {
    zero_branch = 0.5 * (direct + twiddled);
    one_branch = 0.5 * (direct - twiddled);
  } else {
    zero_branch = 0.5 * (direct - twiddled);
    one_branch = 0.5 * (direct + twiddled);
  }
  return out;
}

std::vector<SampleRecord> sample_joint_pauli(const StateVector& state,
                                             std::span<const PauliString> generating_set,
                                             std::size_t shots, std::uint64_t seed) {
  const int n = qubit_count(state);
  for (std::size_t a = 0; a < generating_set.size(); ++a) {
    const auto& p = generating_set[a];
    if (p.n_qubits() != n) throw DimensionError("generator size differs from state");
    if (!is_hermitian(p)) throw PreconditionError("generator " + format(p) + " is not Hermitian");
    for (std::size_t b = 0; b < a; ++b) {
      if (commutes(generating_set[b], p) == Relation::Anticommute) throw NonCommutingInput(b, a);
    }
  }
  if (generating_set.size() > 62) throw PreconditionError("generating set too large");
  if (std::abs(state.norm() - 1.0) > 1e-10) throw PreconditionError("state is not normalized");

  OutcomeTree tree(state, generating_set);
  std::mt19937_64 rng(seed);
  std::vector<SampleRecord> records;
  records.reserve(shots);
  const int depth = static_cast<int>(generating_set.size());
  for (std::size_t shot = 0; shot < shots; ++shot) {
    SampleRecord record{std::vector<std::int8_t>(generating_set.size()), shot};
    std::uint64_t node = 1;
    for (int d = 0; d < depth; ++d) {
      const bool plus = uniform01(rng) < tree.p_plus(node, d);
      record.outcomes[static_cast<std::size_t>(d)] = plus ? 1 : -1;
      node = 2 * node + (plus ? 0 : 1);
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace cbqfim
