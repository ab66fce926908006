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

#include <Eigen/Core>

#include "cbqfim/circuit.hpp"
#include "cbqfim/hamiltonian.hpp"
#include "cbqfim/simulator.hpp"

namespace cbqfim {

/// Real symmetric m x m matrix indexed by global parameter index.
using QfimMatrix = Eigen::MatrixXd;

/// d|psi>/d theta_k: the circuit with (-i G_k) inserted after the layer that
/// holds parameter k. Unit norm.
StateVector derivative_state(const CommutingBlockCircuit& circuit,
                             const Eigen::Ref<const Eigen::VectorXd>& theta, int k);

/// Columns are derivative_state(k) for k = 0..m-1.
Eigen::MatrixXcd derivative_states(const CommutingBlockCircuit& circuit,
                                   const Eigen::Ref<const Eigen::VectorXd>& theta);

/// F_ij = 4 Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>] from exact
/// derivative states, symmetrized.
QfimMatrix qfim_exact(const CommutingBlockCircuit& circuit,
                      const Eigen::Ref<const Eigen::VectorXd>& theta);

/// Same formula with central finite-difference derivative states; step h in
/// [1e-6, 1e-2].
QfimMatrix qfim_fd(const CommutingBlockCircuit& circuit,
                   const Eigen::Ref<const Eigen::VectorXd>& theta, double h);

/// <G_k> on the state right after the layer holding parameter k.
Eigen::VectorXd berry_terms(const CommutingBlockCircuit& circuit,
                            const Eigen::Ref<const Eigen::VectorXd>& theta);

/// dE/d theta_k = 2 Re <psi|H|d_k psi>.
Eigen::VectorXd energy_gradient(const CommutingBlockCircuit& circuit,
                                const Eigen::Ref<const Eigen::VectorXd>& theta,
                                const Hamiltonian& hamiltonian);

}  // namespace cbqfim
