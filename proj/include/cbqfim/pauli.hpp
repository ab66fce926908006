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
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace cbqfim {

enum class Relation : std::uint8_t { Commute, Anticommute, Self };

std::string_view to_string(Relation relation);

/// N-qubit Pauli operator i^phase_exp * P_0 (x) P_1 (x) ... (x) P_{N-1}.
///
/// Bit q of x_mask is set iff qubit q carries X or Y, bit q of z_mask iff it
/// carries Z or Y. Qubit 0 is the leftmost character of a label and the most
/// significant bit of a basis-state index. Values are immutable.
class PauliString {
 public:
  using Mask = std::uint64_t;
  static constexpr int kMaxQubits = 63;

  PauliString(int n_qubits, Mask x_mask, Mask z_mask, int phase_exp = 0);

  static PauliString identity(int n_qubits);
  /// Single-qubit operator `op` in {'I','X','Y','Z'} on `qubit`.
  static PauliString single(int n_qubits, int qubit, char op);

  int n_qubits() const { return n_qubits_; }
  Mask x_mask() const { return x_mask_; }
  Mask z_mask() const { return z_mask_; }
  int phase_exp() const { return phase_exp_; }

  /// 'I', 'X', 'Y' or 'Z' on qubit q, ignoring the global phase.
  char op(int qubit) const;
  /// Number of non-identity positions.
  int weight() const;
  bool is_identity_up_to_phase() const { return (x_mask_ | z_mask_) == 0; }

  /// this * i^k.
  PauliString times_i_pow(int k) const;
  PauliString phase_free() const { return {n_qubits_, x_mask_, z_mask_, 0}; }

  /// Masks translated to basis-index bit positions (qubit q -> bit N-1-q).
  Mask x_index_mask() const;
  Mask z_index_mask() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_qubits_;
  Mask x_mask_;
  Mask z_mask_;
  int phase_exp_;
};

Relation commutes(const PauliString& a, const PauliString& b);

/// Operator product a*b with exact phase.
PauliString multiply(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) {
  return multiply(a, b);
}

/// `left` on the leading qubits, `right` on the trailing ones.
PauliString tensor(const PauliString& left, const PauliString& right);

inline bool is_hermitian(const PauliString& p) {
  return p.phase_exp() % 2 == 0;
}

/// Parses labels such as "XIZ", "-YY", "+iZ", "-iXZ". Throws ParseError with
/// the offending character index.
PauliString parse_pauli(std::string_view text);

/// Canonical label: phase prefix "" / "+i" / "-" / "-i" then one character
/// per qubit.
std::string format(const PauliString& p);

/// Dense 2^N x 2^N matrix, for verification at small N.
Eigen::MatrixXcd dense_matrix(const PauliString& p);

}  // namespace cbqfim
