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

#include <vector>

#include <Eigen/Core>

#include "cbqfim/pauli.hpp"
#include "cbqfim/simulator.hpp"

namespace cbqfim {

/// Real linear combination of Hermitian Pauli strings on a common register.
class Hamiltonian {
 public:
  struct Term {
    double coefficient;
    PauliString op;
  };

  Hamiltonian(int n_qubits, std::vector<Term> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// -sum Z_i Z_{i+1} - h sum X_i with open boundaries.
  static Hamiltonian transverse_field_ising(int n_qubits, double field = 1.0);

 private:
  int n_qubits_;
  std::vector<Term> terms_;
};

/// H |state>.
StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& state);
double expectation(const StateVector& state, const Hamiltonian& h);

Eigen::MatrixXcd dense_matrix(const Hamiltonian& h);

/// Smallest eigenvalue by dense diagonalization (N <= 12).
double ground_energy(const Hamiltonian& h);

}  // namespace cbqfim
