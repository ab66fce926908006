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

#include "cbqfim/hamiltonian.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cbqfim/errors.hpp"

namespace cbqfim {

Hamiltonian::Hamiltonian(int n_qubits, std::vector<Term> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& term = terms_[t];
    if (term.op.n_qubits() != n_qubits_) {
      throw DimensionError("Hamiltonian term " + std::to_string(t) + " acts on " +
                           std::to_string(term.op.n_qubits()) + " qubits, expected " +
                           std::to_string(n_qubits_));
    }
    if (!std::isfinite(term.coefficient)) {
      throw PreconditionError("Hamiltonian term " + std::to_string(t) + " has a non-finite coefficient");
    }
    if (!is_hermitian(term.op)) {
      throw PreconditionError("Hamiltonian term " + format(term.op) + " is not Hermitian");
    }
  }
}

Hamiltonian Hamiltonian::transverse_field_ising(int n_qubits, double field) {
  std::vector<Term> terms;
  for (int q = 0; q + 1 < n_qubits; ++q) {
    terms.push_back({-1.0, multiply(PauliString::single(n_qubits, q, 'Z'),
                                    PauliString::single(n_qubits, q + 1, 'Z'))});
  }
  for (int q = 0; q < n_qubits; ++q) {
    terms.push_back({-field, PauliString::single(n_qubits, q, 'X')});
  }
  return {n_qubits, std::move(terms)};
}

StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& state) {
  if (qubit_count(state) != h.n_qubits()) throw DimensionError("Hamiltonian and state sizes differ");
  StateVector out = StateVector::Zero(state.size());
  for (const auto& term : h.terms()) out += term.coefficient * pauli_applied(state, term.op);
  return out;
}

double expectation(const StateVector& state, const Hamiltonian& h) {
  if (qubit_count(state) != h.n_qubits()) throw DimensionError("Hamiltonian and state sizes differ");
  double e = 0.0;
  for (const auto& term : h.terms()) e += term.coefficient * expectation(state, term.op);
  return e;
}

Eigen::MatrixXcd dense_matrix(const Hamiltonian& h) {
  const auto dim = Eigen::Index{1} << h.n_qubits();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : h.terms()) out += term.coefficient * dense_matrix(term.op);
  return out;
}

double ground_energy(const Hamiltonian& h) {
  if (h.n_qubits() > 12) throw PreconditionError("dense diagonalization limited to 12 qubits");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return solver.eigenvalues().minCoeff();
}

}  // namespace cbqfim
