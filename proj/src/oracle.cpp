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

#include "cbqfim/oracle.hpp"

#include <string>

#include "cbqfim/errors.hpp"

namespace cbqfim {

namespace {

QfimMatrix fisher_from_tangents(const Eigen::MatrixXcd& tangents, const StateVector& psi) {
  const Eigen::VectorXcd overlaps = tangents.adjoint() * psi;  // <d_i psi|psi>
  const Eigen::MatrixXcd gram = tangents.adjoint() * tangents;
  QfimMatrix f = 4.0 * (gram - overlaps * overlaps.adjoint()).real();
  return 0.5 * (f + f.transpose());
}

}  // namespace

StateVector derivative_state(const CommutingBlockCircuit& circuit,
                             const Eigen::Ref<const Eigen::VectorXd>& theta, int k) {
  const int l = circuit.layer_of(k);
  StateVector state = run_prefix(circuit, theta, l + 1);
  apply_pauli(state, circuit.gate(k).generator.times_i_pow(3));  // -i G_k
  apply_layers(state,
               std::span<const Layer>(circuit.layers()).subspan(static_cast<std::size_t>(l) + 1),
               theta);
  return state;
}

Eigen::MatrixXcd derivative_states(const CommutingBlockCircuit& circuit,
                                   const Eigen::Ref<const Eigen::VectorXd>& theta) {
  const auto dim = Eigen::Index{1} << circuit.n_qubits();
  Eigen::MatrixXcd out(dim, circuit.n_params());
  for (int k = 0; k < circuit.n_params(); ++k) out.col(k) = derivative_state(circuit, theta, k);
  return out;
}

QfimMatrix qfim_exact(const CommutingBlockCircuit& circuit,
                      const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return fisher_from_tangents(derivative_states(circuit, theta), run_circuit(circuit, theta));
}

QfimMatrix qfim_fd(const CommutingBlockCircuit& circuit,
                   const Eigen::Ref<const Eigen::VectorXd>& theta, double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) {
    throw PreconditionError("finite-difference step " + std::to_string(h) + " outside [1e-6, 1e-2]");
  }
  const auto dim = Eigen::Index{1} << circuit.n_qubits();
  Eigen::MatrixXcd tangents(dim, circuit.n_params());
  Eigen::VectorXd shifted = theta;
  for (int k = 0; k < circuit.n_params(); ++k) {
    shifted(k) = theta(k) + h;
    const StateVector forward = run_circuit(circuit, shifted);
    shifted(k) = theta(k) - h;
    const StateVector backward = run_circuit(circuit, shifted);
    shifted(k) = theta(k);
    tangents.col(k) = (forward - backward) / (2.0 * h);
  }
  return fisher_from_tangents(tangents, run_circuit(circuit, theta));
}

Eigen::VectorXd berry_terms(const CommutingBlockCircuit& circuit,
                            const Eigen::Ref<const Eigen::VectorXd>& theta) {
  Eigen::VectorXd out(circuit.n_params());
  StateVector state = run_prefix(circuit, theta, 0);
  for (int l = 0; l < circuit.n_layers(); ++l) {
    apply_layers(state, std::span<const Layer>(circuit.layers()).subspan(static_cast<std::size_t>(l), 1),
                 theta);
    for (const auto& g : circuit.layer(l).gates) out(g.param_index) = expectation(state, g.generator);
  }
  return out;
}

Eigen::VectorXd energy_gradient(const CommutingBlockCircuit& circuit,
                                const Eigen::Ref<const Eigen::VectorXd>& theta,
                                const Hamiltonian& hamiltonian) {
  if (hamiltonian.n_qubits() != circuit.n_qubits()) {
    throw DimensionError("Hamiltonian and circuit qubit counts differ");
  }
  const StateVector h_psi = apply_hamiltonian(hamiltonian, run_circuit(circuit, theta));
  const Eigen::MatrixXcd tangents = derivative_states(circuit, theta);
  return 2.0 * (tangents.adjoint() * h_psi).real();
}

}  // namespace cbqfim
