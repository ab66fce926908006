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
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cbqfim/circuit.hpp"
#include "cbqfim/hamiltonian.hpp"
#include "cbqfim/protocol.hpp"

namespace cbqfim {

/// <psi(theta)|H|psi(theta)>.
double energy(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& theta,
              const Hamiltonian& hamiltonian);

/// Two-point shift rule for involutory generators:
/// g_k = E(theta_k + pi/4) - E(theta_k - pi/4).
Eigen::VectorXd parameter_shift_gradient(const CommutingBlockCircuit& circuit,
                                         const Eigen::Ref<const Eigen::VectorXd>& theta,
                                         const Hamiltonian& hamiltonian);

/// theta - eta (F + lambda I)^{-1} g. Cholesky first, then LDLT, then a
/// least-squares solve; throws NumericalError if none gives a finite step.
Eigen::VectorXd qng_step(const Eigen::Ref<const Eigen::VectorXd>& theta,
                         const Eigen::Ref<const Eigen::VectorXd>& gradient,
                         const Eigen::Ref<const Eigen::MatrixXd>& qfim, double eta, double lambda);

enum class GradientMode { Analytic, ParameterShift };

struct QngConfig {
  double eta = 0.05;
  double lambda = 1e-3;
  int max_iters = 500;
  EstimationMode qfim_mode = EstimationMode::exact();
  GradientMode grad_mode = GradientMode::Analytic;
  std::uint64_t seed = 0;
  double stop_tol = 1e-6;
  unsigned threads = 1;
};

struct QfimDiagnostics {
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  double condition_number = 0;  // of F + lambda I
};

struct QngRecord {
  int iteration = 0;
  Eigen::VectorXd theta;
  double energy = 0;
  double gradient_norm = 0;
  std::optional<QfimDiagnostics> qfim;  // absent on the final record
  // Resources spent on QFIM estimation up to and including this record.
  std::size_t cumulative_preparations = 0;
  std::size_t cumulative_shots = 0;
};

struct QngTrajectory {
  std::vector<QngRecord> records;

  const QngRecord& final() const { return records.back(); }
};

/// Energies and gradients are exact; only the QFIM follows `config.qfim_mode`.
/// Iteration t uses protocol seed derive_seed(config.seed, {t}).
QngTrajectory run(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& theta0,
                  const Hamiltonian& hamiltonian, const QngConfig& config);

}  // namespace cbqfim
