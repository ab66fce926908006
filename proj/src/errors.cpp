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

#include "cbqfim/errors.hpp"

namespace cbqfim {

IntraLayerViolation::IntraLayerViolation(int layer, int gate_a, int gate_b)
    : ValidationError("layer " + std::to_string(layer) + ": generators " +
                      std::to_string(gate_a) + " and " + std::to_string(gate_b) +
                      " anticommute"),
      layer(layer),
      gate_a(gate_a),
      gate_b(gate_b) {}

MixedRelation::MixedRelation(int layer_a, int layer_b, int commuting_a, int commuting_b,
                             int anti_a, int anti_b)
    : ValidationError("layers " + std::to_string(layer_a) + " and " + std::to_string(layer_b) +
                      " have mixed relations: gates (" + std::to_string(commuting_a) + ", " +
                      std::to_string(commuting_b) + ") commute but (" + std::to_string(anti_a) +
                      ", " + std::to_string(anti_b) + ") anticommute"),
      layer_a(layer_a),
      layer_b(layer_b),
      commuting_a(commuting_a),
      commuting_b(commuting_b),
      anti_a(anti_a),
      anti_b(anti_b) {}

NonCommutingInput::NonCommutingInput(std::size_t first, std::size_t second)
    : std::invalid_argument("observables " + std::to_string(first) + " and " +
                            std::to_string(second) + " anticommute"),
      first(first),
      second(second) {}

}  // namespace cbqfim
