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

#include "cbqfim/qng.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "cbqfim/errors.hpp"
#include "cbqfim/oracle.hpp"
#include "cbqfim/seed.hpp"
#include "cbqfim/simulator.hpp"

namespace cbqfim {

namespace {

void require_matching(const CommutingBlockCircuit& circuit,
                      const Eigen::Ref<const Eigen::VectorXd>& theta, const Hamiltonian& h) {
  if (h.n_qubits() != circuit.n_qubits()) {
    throw DimensionError("Hamiltonian acts on " + std::to_string(h.n_qubits()) +
                         " qubits, circuit on " + std::to_string(circuit.n_qubits()));
  }
  if (theta.size() != circuit.n_params()) {
    throw DimensionError("circuit has " + std::to_string(circuit.n_params()) +
                         " parameters, got " + std::to_string(theta.size()));
  }
}

QfimDiagnostics diagnose(const Eigen::MatrixXd& qfim, double lambda) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(qfim, Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  QfimDiagnostics d;
  d.min_eigenvalue = ev.minCoeff();
  d.max_eigenvalue = ev.maxCoeff();
  const double lo = d.min_eigenvalue + lambda;
  d.condition_number = lo > 0 ? (d.max_eigenvalue + lambda) / lo : INFINITY;
  return d;
}

}  // namespace

double energy(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& theta,
              const Hamiltonian& hamiltonian) {
  require_matching(circuit, theta, hamiltonian);
  return expectation(run_circuit(circuit, theta), hamiltonian);
}

Eigen::VectorXd parameter_shift_gradient(const CommutingBlockCircuit& circuit,
                                         const Eigen::Ref<const Eigen::VectorXd>& theta,
                                         const Hamiltonian& hamiltonian) {
  require_matching(circuit, theta, hamiltonian);
  constexpr double shift = std::numbers::pi / 4;
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd shifted = theta;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    shifted(k) = theta(k) + shift;
    const double plus = energy(circuit, shifted, hamiltonian);
    shifted(k) = theta(k) - shift;
    const double minus = energy(circuit, shifted, hamiltonian);
    shifted(k) = theta(k);
    grad(k) = plus - minus;
  }
  return grad;
}

Eigen::VectorXd qng_step(const Eigen::Ref<const Eigen::VectorXd>& theta,
                         const Eigen::Ref<const Eigen::VectorXd>& gradient,
                         const Eigen::Ref<const Eigen::MatrixXd>& qfim, double eta, double lambda) {
  const auto m = theta.size();
  if (gradient.size() != m || qfim.rows() != m || qfim.cols() != m) {
    throw DimensionError("theta, gradient and QFIM sizes differ");
  }
  if (!(eta > 0)) throw PreconditionError("step size must be positive");
  if (!(lambda >= 0)) throw PreconditionError("regularization must be non-negative");

  const Eigen::MatrixXd a = qfim + lambda * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd direction;
  if (Eigen::LLT<Eigen::MatrixXd> llt(a); llt.info() == Eigen::Success) {
    direction = llt.solve(gradient);
  }
  if (!direction.allFinite() || direction.size() != m) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() == Eigen::Success) direction = ldlt.solve(gradient);
  }
  if (!direction.allFinite() || direction.size() != m) {
    direction = a.completeOrthogonalDecomposition().solve(gradient);
  }
  if (!direction.allFinite() || direction.size() != m) {
    throw NumericalError("QNG linear solve failed");
  }
  return theta - eta * direction;
}

QngTrajectory run(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& theta0,
                  const Hamiltonian& hamiltonian, const QngConfig& config) {
  require_matching(circuit, theta0, hamiltonian);
  if (config.max_iters < 0) throw PreconditionError("max_iters must be non-negative");
  if (!(config.eta > 0)) throw PreconditionError("step size must be positive");
  if (!(config.lambda >= 0)) throw PreconditionError("regularization must be non-negative");

  QngTrajectory traj;
  Eigen::VectorXd theta = theta0;
  std::size_t preparations = 0;
  std::size_t shots = 0;
  for (int t = 0;; ++t) {
    QngRecord record;
    record.iteration = t;
    record.theta = theta;
    record.energy = energy(circuit, theta, hamiltonian);
    if (!std::isfinite(record.energy)) throw NumericalError("energy is not finite");
    const Eigen::VectorXd grad = config.grad_mode == GradientMode::Analytic
                                     ? energy_gradient(circuit, theta, hamiltonian)
                                     : parameter_shift_gradient(circuit, theta, hamiltonian);
    record.gradient_norm = grad.norm();
    if (t == config.max_iters || record.gradient_norm < config.stop_tol) {
      record.cumulative_preparations = preparations;
      record.cumulative_shots = shots;
      traj.records.push_back(std::move(record));
      break;
    }

    const QfimEstimate qfim =
        estimate_qfim(circuit, theta, config.qfim_mode, derive_seed(config.seed, {static_cast<std::uint64_t>(t)}),
                      {.threads = config.threads, .target_error = std::nullopt});
    record.qfim = diagnose(qfim.matrix, config.lambda);
    preparations += qfim.ledger.n_preparations;
    shots += qfim.ledger.total_shots;
    record.cumulative_preparations = preparations;
    record.cumulative_shots = shots;
    traj.records.push_back(std::move(record));
    theta = qng_step(theta, grad, qfim.matrix, config.eta, config.lambda);
  }
  return traj;
}

}  // namespace cbqfim
