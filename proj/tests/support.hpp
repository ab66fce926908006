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

// Shared helpers for the test binaries. The dense helpers build operators
// from Kronecker products of 2x2 matrices and deliberately avoid the
// library's bit-level kernels so they can serve as an independent reference.

#include <cmath>
#include <complex>
#include <cstdint>
#include <algorithm>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cbqfim/circuit.hpp"
#include "cbqfim/errors.hpp"
#include "cbqfim/pauli.hpp"

namespace cbqfim::testing {

using Cd = std::complex<double>;

inline Eigen::Matrix2cd pauli_2x2(char c) {
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, Cd(0, -1), Cd(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      m.setIdentity();
  }
  return m;
}

/// Dense matrix of a Pauli string built qubit by qubit, qubit 0 leftmost.
inline Eigen::MatrixXcd kron_matrix(const PauliString& p) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < p.n_qubits(); ++q) {
    const Eigen::Matrix2cd s = pauli_2x2(p.op(q));
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * s;
    }
    out = std::move(next);
  }
  static const Cd phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return phases[p.phase_exp()] * out;
}

/// exp(-i theta P) = cos(theta) I - i sin(theta) P.
inline Eigen::MatrixXcd rotation_matrix(const PauliString& p, double theta) {
  const Eigen::MatrixXcd m = kron_matrix(p);
  return std::cos(theta) * Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - Cd(0, std::sin(theta)) * m;
}

/// Product of the gate matrices of `layers`, later gates on the left.
inline Eigen::MatrixXcd layers_matrix(std::span<const Layer> layers, int n_qubits,
                                      const Eigen::VectorXd& theta, std::span<const int> signs = {}) {
  const auto dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const double s = signs.empty() ? 1.0 : signs[l];
    for (const auto& g : layers[l].gates) u = rotation_matrix(g.generator, s * theta(g.param_index)) * u;
  }
  return u;
}

inline Eigen::VectorXcd initial_vector(int n_qubits, const InitialState& s) {
  const auto dim = Eigen::Index{1} << n_qubits;
  switch (s.kind) {
    case InitialState::Kind::AllZero:
      return Eigen::VectorXcd::Unit(dim, 0);
    case InitialState::Kind::AllPlus:
      return Eigen::VectorXcd::Constant(dim, Cd(1.0 / std::sqrt(static_cast<double>(dim))));
    default:
      return s.amplitudes;
  }
}

/// Full circuit state from dense matrices.
inline Eigen::VectorXcd dense_state(const CommutingBlockCircuit& c, const Eigen::VectorXd& theta) {
  return layers_matrix(c.layers(), c.n_qubits(), theta) * initial_vector(c.n_qubits(), c.initial_state());
}

inline Eigen::VectorXcd random_state(std::mt19937_64& rng, int n_qubits) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Cd(normal(rng), normal(rng));
  return v / v.norm();
}

inline Eigen::VectorXd random_angles(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  Eigen::VectorXd t(m);
  for (int i = 0; i < m; ++i) t(i) = u(rng);
  return t;
}

inline PauliString random_pauli(std::mt19937_64& rng, int n_qubits, bool with_phase = true) {
  const auto full = (PauliString::Mask{1} << n_qubits) - 1;
  const auto x = rng() & full;
  const auto z = rng() & full;
  return {n_qubits, x, z, with_phase ? static_cast<int>(rng() % 4) : 0};
}

struct Instance {
  std::string name;
  CommutingBlockCircuit circuit;
  Eigen::VectorXd theta;
};

/// 50 seeded random circuits (N <= 5, L <= 4, <= 3 gates per layer, mixed
/// initial states) followed by the example ansatz for N in {1, 2, 3} and 1-2
/// repetitions.
inline std::vector<Instance> corpus(int n_random = 50) {
  std::vector<Instance> out;
  std::mt19937_64 rng(20260417);
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < n_random; ++seed) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int layers = 1 + static_cast<int>(rng() % 4);
    const int max_gates = std::min(3, (1 << n) - 1);
    const int gates = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_gates));
    InitialState init;
    switch (rng() % 3) {
      case 0:
        init = InitialState::zero();
        break;
      case 1:
        init = InitialState::plus();
        break;
      default:
        init = InitialState::custom(random_state(rng, n));
    }
    try {
      auto c = build_random_cbc(seed, n, layers, gates, init);
      const int m = c.n_params();
      out.push_back({"random seed " + std::to_string(seed), std::move(c), random_angles(rng, m)});
    } catch (const ConstructionFailed&) {
      // infeasible size draw; try the next seed
    }
  }
  for (int n = 1; n <= 3; ++n) {
    for (int reps = 1; reps <= 2; ++reps) {
      auto c = build_example_ansatz(n, reps);
      const int m = c.n_params();
      out.push_back({"example ansatz N=" + std::to_string(n) + " reps=" + std::to_string(reps), std::move(c),
                     random_angles(rng, m)});
    }
  }
  return out;
}

}  // namespace cbqfim::testing
