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

#include "cbqfim/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "cbqfim/errors.hpp"

namespace cbqfim {

RelationMatrix validate(std::span<const std::vector<PauliString>> layers, int n_qubits) {
  if (layers.empty()) throw PreconditionError("circuit has no layers");
  const int n_layers = static_cast<int>(layers.size());
  for (int l = 0; l < n_layers; ++l) {
    const auto& gates = layers[l];
    if (gates.empty()) throw PreconditionError("layer " + std::to_string(l) + " is empty");
    for (std::size_t g = 0; g < gates.size(); ++g) {
      if (gates[g].n_qubits() != n_qubits) {
        throw DimensionError("layer " + std::to_string(l) + " gate " + std::to_string(g) +
                             " acts on " + std::to_string(gates[g].n_qubits()) +
                             " qubits, circuit has " + std::to_string(n_qubits));
      }
      if (gates[g].phase_exp() != 0) {
        throw PreconditionError("layer " + std::to_string(l) + " gate " + std::to_string(g) +
                                " generator " + format(gates[g]) + " carries a phase");
      }
    }
    for (std::size_t a = 0; a < gates.size(); ++a) {
      for (std::size_t b = a + 1; b < gates.size(); ++b) {
        if (commutes(gates[a], gates[b]) == Relation::Anticommute) {
          throw IntraLayerViolation(l, static_cast<int>(a), static_cast<int>(b));
        }
      }
    }
  }

  RelationMatrix relations(n_layers);
  for (int la = 0; la < n_layers; ++la) {
    for (int lb = la + 1; lb < n_layers; ++lb) {
      int commuting[2] = {-1, -1};
      int anti[2] = {-1, -1};
      for (std::size_t a = 0; a < layers[la].size(); ++a) {
        for (std::size_t b = 0; b < layers[lb].size(); ++b) {
          int* slot = commutes(layers[la][a], layers[lb][b]) == Relation::Commute ? commuting : anti;
          if (slot[0] < 0) {
            slot[0] = static_cast<int>(a);
            slot[1] = static_cast<int>(b);
          }
        }
      }
      if (commuting[0] >= 0 && anti[0] >= 0) {
        throw MixedRelation(la, lb, commuting[0], commuting[1], anti[0], anti[1]);
      }
      relations.set(la, lb, anti[0] >= 0 ? Relation::Anticommute : Relation::Commute);
    }
  }
  return relations;
}

CommutingBlockCircuit::CommutingBlockCircuit(int n_qubits,
                                             std::vector<std::vector<PauliString>> generators,
                                             InitialState initial_state)
    : n_qubits_(n_qubits),
      initial_state_(std::move(initial_state)),
      relations_(validate(generators, n_qubits)) {
  if (initial_state_.kind == InitialState::Kind::Custom) {
    const auto dim = Eigen::Index{1} << n_qubits;
    if (initial_state_.amplitudes.size() != dim) {
      throw DimensionError("custom initial state has " +
                           std::to_string(initial_state_.amplitudes.size()) +
                           " amplitudes, expected " + std::to_string(dim));
    }
    if (std::abs(initial_state_.amplitudes.norm() - 1.0) > 1e-12) {
      throw PreconditionError("custom initial state is not normalized");
    }
  }
  layers_.reserve(generators.size());
  for (auto& layer_generators : generators) {
    offsets_.push_back(n_params_);
    Layer layer;
    layer.gates.reserve(layer_generators.size());
    for (auto& g : layer_generators) layer.gates.push_back({std::move(g), n_params_++});
    layers_.push_back(std::move(layer));
  }
}

int CommutingBlockCircuit::layer_of(int param) const {
  if (param < 0 || param >= n_params_) {
    throw PreconditionError("parameter index " + std::to_string(param) + " out of range");
  }
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), param);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

const Gate& CommutingBlockCircuit::gate(int param) const {
  const int l = layer_of(param);
  return layers_[static_cast<std::size_t>(l)].gates[static_cast<std::size_t>(param - offsets_[l])];
}

std::vector<std::vector<PauliString>> CommutingBlockCircuit::generators() const {
  std::vector<std::vector<PauliString>> out;
  out.reserve(layers_.size());
  for (const auto& layer : layers_) {
    auto& row = out.emplace_back();
    for (const auto& g : layer.gates) row.push_back(g.generator);
  }
  return out;
}

std::span<const Layer> prefix(const CommutingBlockCircuit& circuit, int count) {
  if (count < 0 || count > circuit.n_layers()) {
    throw PreconditionError("prefix length " + std::to_string(count) + " outside [0, " +
                            std::to_string(circuit.n_layers()) + "]");
  }
  return std::span<const Layer>(circuit.layers()).first(static_cast<std::size_t>(count));
}

std::span<const Layer> segment(const CommutingBlockCircuit& circuit, int a, int b) {
  if (a < 0 || b >= circuit.n_layers() || a >= b) {
    throw PreconditionError("segment requires 0 <= a < b < L, got (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
  }
  return std::span<const Layer>(circuit.layers())
      .subspan(static_cast<std::size_t>(a) + 1, static_cast<std::size_t>(b - a));
}

std::vector<int> twiddle_signs(const CommutingBlockCircuit& circuit, int a, int b) {
  segment(circuit, a, b);
  std::vector<int> signs;
  signs.reserve(static_cast<std::size_t>(b - a));
  for (int l = a + 1; l <= b; ++l) {
    signs.push_back(circuit.relation(a, l) == Relation::Anticommute ? -1 : 1);
  }
  return signs;
}

std::vector<Gate> flatten(std::span<const Layer> layers) {
  std::vector<Gate> out;
  for (const auto& layer : layers) out.insert(out.end(), layer.gates.begin(), layer.gates.end());
  return out;
}

CommutingBlockCircuit build_example_ansatz(int n_qubits, int repetitions,
                                           InitialState initial_state) {
  if (n_qubits < 1 || n_qubits > 20) throw PreconditionError("example ansatz needs 1 <= N <= 20");
  if (repetitions < 1) throw PreconditionError("example ansatz needs at least one repetition");

  std::vector<PauliString::Mask> odd;
  for (PauliString::Mask m = 1; m < (PauliString::Mask{1} << n_qubits); ++m) {
    if (std::popcount(m) % 2 == 1) odd.push_back(m);
  }
  std::stable_sort(odd.begin(), odd.end(),
                   [](auto x, auto y) { return std::popcount(x) < std::popcount(y); });

  std::vector<PauliString> z_layer;
  z_layer.reserve(odd.size());
  for (auto m : odd) z_layer.emplace_back(n_qubits, 0, m);
  const auto all = (PauliString::Mask{1} << n_qubits) - 1;
  const std::vector<PauliString> x_layer{PauliString(n_qubits, all, 0)};

  std::vector<std::vector<PauliString>> layers;
  for (int r = 0; r < repetitions; ++r) {
    layers.push_back(z_layer);
    layers.push_back(x_layer);
  }
  return {n_qubits, std::move(layers), std::move(initial_state)};
}

CommutingBlockCircuit build_random_cbc(std::uint64_t seed, int n_qubits, int n_layers,
                                       int gates_per_layer, InitialState initial_state) {
  if (n_qubits < 1 || n_qubits > 30 || n_layers < 1 || gates_per_layer < 1) {
    throw PreconditionError("random circuit sizes out of range");
  }
  constexpr int kLayerAttempts = 20;
  constexpr int kDrawsPerAttempt = 2000;

  std::mt19937_64 rng(seed);
  const auto full = (PauliString::Mask{1} << n_qubits) - 1;
  auto draw = [&] {
    for (;;) {
      const auto x = rng() & full;
      const auto z = rng() & full;
      if ((x | z) != 0) return PauliString(n_qubits, x, z);
    }
  };

  std::vector<std::vector<PauliString>> layers;
  for (int l = 0; l < n_layers; ++l) {
    bool filled = false;
    for (int attempt = 0; attempt < kLayerAttempts && !filled; ++attempt) {
      std::vector<PauliString> layer;
      for (int d = 0; d < kDrawsPerAttempt && static_cast<int>(layer.size()) < gates_per_layer;
           ++d) {
        const PauliString candidate = draw();
        const bool fits = std::all_of(layer.begin(), layer.end(), [&](const PauliString& g) {
          return g != candidate && commutes(g, candidate) == Relation::Commute;
        });
        if (!fits) continue;
        const bool uniform =
            std::all_of(layers.begin(), layers.end(), [&](const std::vector<PauliString>& prev) {
              const Relation want =
                  layer.empty() ? commutes(prev.front(), candidate) : commutes(prev.front(), layer.front());
              return std::all_of(prev.begin(), prev.end(), [&](const PauliString& g) {
                return commutes(g, candidate) == want;
              });
            });
        if (uniform) layer.push_back(candidate);
      }
      if (static_cast<int>(layer.size()) == gates_per_layer) {
        layers.push_back(std::move(layer));
        filled = true;
      }
    }
    if (!filled) {
      throw ConstructionFailed("could not fill layer " + std::to_string(l) + " with " +
                               std::to_string(gates_per_layer) + " gates on " +
                               std::to_string(n_qubits) + " qubits");
    }
  }
  return {n_qubits, std::move(layers), std::move(initial_state)};
}

}  // namespace cbqfim
