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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbqfim {

/// Operand sizes (qubit counts, vector lengths) disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument violates an operation's precondition (index range, ordering,
/// non-plain generator, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at index " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Base for structural violations of the commuting-block conditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two generators of the same layer anticommute.
class IntraLayerViolation : public ValidationError {
 public:
  IntraLayerViolation(int layer, int gate_a, int gate_b);

  int layer;
  int gate_a;
  int gate_b;
};

/// Layers `layer_a` and `layer_b` contain both a commuting and an
/// anticommuting generator pair. The witness gates are indices within their
/// layers: (commuting_a, commuting_b) commute, (anti_a, anti_b) anticommute.
class MixedRelation : public ValidationError {
 public:
  MixedRelation(int layer_a, int layer_b, int commuting_a, int commuting_b,
                int anti_a, int anti_b);

  int layer_a;
  int layer_b;
  int commuting_a;
  int commuting_b;
  int anti_a;
  int anti_b;
};

class ConstructionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set that must be mutually commuting contains an anticommuting pair.
class NonCommutingInput : public std::invalid_argument {
 public:
  NonCommutingInput(std::size_t first, std::size_t second);

  std::size_t first;
  std::size_t second;
};

/// A numerical routine failed in a way that indicates broken inputs
/// (probabilities out of range, singular solve after fallback).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cbqfim
