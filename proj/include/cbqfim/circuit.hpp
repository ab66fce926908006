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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cbqfim/pauli.hpp"

namespace cbqfim {

/// Factor exp(-i G theta[param_index]) with G a plain (phase 0) Pauli string.
struct Gate {
  PauliString generator;
  int param_index;
};

/// Mutually commuting gates.
struct Layer {
  std::vector<Gate> gates;
};

struct InitialState {
  enum class Kind { AllZero, AllPlus, Custom };

  Kind kind = Kind::AllZero;
  Eigen::VectorXcd amplitudes;  // Custom only

  static InitialState zero() { return {Kind::AllZero, {}}; }
  static InitialState plus() { return {Kind::AllPlus, {}}; }
  static InitialState custom(Eigen::VectorXcd amplitudes) {
    return {Kind::Custom, std::move(amplitudes)};
  }
};

/// L x L layer-pair relations; the diagonal is Relation::Self.
class RelationMatrix {
 public:
  explicit RelationMatrix(int n_layers)
      : n_(n_layers), data_(static_cast<std::size_t>(n_layers) * n_layers, Relation::Self) {}

  int size() const { return n_; }
  Relation operator()(int a, int b) const { return data_[index(a, b)]; }
  void set(int a, int b, Relation r) {
    data_[index(a, b)] = r;
    data_[index(b, a)] = r;
  }

  friend bool operator==(const RelationMatrix&, const RelationMatrix&) = default;

 private:
  std::size_t index(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

  int n_;
  std::vector<Relation> data_;
};

/// Checks the commuting-block conditions on raw generator layers and returns
/// the layer relation matrix. Throws IntraLayerViolation or MixedRelation
/// (layer and gate indices 0-based), PreconditionError for empty input or
/// generators with a non-zero phase, DimensionError for size mismatches.
RelationMatrix validate(std::span<const std::vector<PauliString>> layers, int n_qubits);

/// A validated commuting-block circuit. Parameters are numbered 0..m-1 in
/// circuit order, layer by layer.
class CommutingBlockCircuit {
 public:
  CommutingBlockCircuit(int n_qubits, std::vector<std::vector<PauliString>> generators,
                        InitialState initial_state = InitialState::zero());

  int n_qubits() const { return n_qubits_; }
  int n_layers() const { return static_cast<int>(layers_.size()); }
  int n_params() const { return n_params_; }

  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(int l) const { return layers_.at(static_cast<std::size_t>(l)); }
  const InitialState& initial_state() const { return initial_state_; }
  const RelationMatrix& relations() const { return relations_; }
  Relation relation(int a, int b) const { return relations_(a, b); }

  /// Global index of the first parameter of layer l.
  int layer_offset(int l) const { return offsets_.at(static_cast<std::size_t>(l)); }
  int layer_of(int param) const;
  const Gate& gate(int param) const;

  /// Generator labels per layer, as supplied.
  std::vector<std::vector<PauliString>> generators() const;

 private:
  int n_qubits_;
  std::vector<Layer> layers_;
  std::vector<int> offsets_;
  int n_params_ = 0;
  InitialState initial_state_;
  RelationMatrix relations_;
};

/// First `count` layers (0 <= count <= L), in application order.
std::span<const Layer> prefix(const CommutingBlockCircuit& circuit, int count);

/// Layers a+1..b (0-based, a < b): the operator between the layer holding the
/// left derivative generator and the one holding the right generator,
/// including the latter.
std::span<const Layer> segment(const CommutingBlockCircuit& circuit, int a, int b);

/// For each layer of segment(a, b): -1 if it anticommutes with layer a, else
/// +1. Flipping those parameters turns W into W~ with G W^dagger = W~^dagger G
/// for every generator G of layer a.
std::vector<int> twiddle_signs(const CommutingBlockCircuit& circuit, int a, int b);

std::vector<Gate> flatten(std::span<const Layer> layers);

/// Alternating odd-weight Z layer ({I,Z}^N strings with an odd number of Z,
/// 2^(N-1) gates) and a single X^N gate, repeated.
CommutingBlockCircuit build_example_ansatz(int n_qubits, int repetitions,
                                           InitialState initial_state = InitialState::plus());

/// Random valid circuit by rejection sampling; deterministic in `seed`.
/// Throws ConstructionFailed when a layer cannot be filled.
CommutingBlockCircuit build_random_cbc(std::uint64_t seed, int n_qubits, int n_layers,
                                       int gates_per_layer,
                                       InitialState initial_state = InitialState::plus());

}  // namespace cbqfim
