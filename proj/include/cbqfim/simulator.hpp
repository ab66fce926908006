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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cbqfim/circuit.hpp"
#include "cbqfim/errors.hpp"
#include "cbqfim/pauli.hpp"

namespace cbqfim {

/// Dense amplitudes over 2^n basis states; basis index bit n-1-q is qubit q.
template <typename Real>
using State = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
using StateVector = State<double>;

template <typename Derived>
int qubit_count(const Eigen::MatrixBase<Derived>& state) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw DimensionError("state length " + std::to_string(dim) + " is not a power of two");
  }
  return std::countr_zero(dim);
}

namespace detail {

template <typename Real>
std::complex<Real> i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

inline int parity(std::uint64_t bits) { return std::popcount(bits) & 1; }

template <typename Real>
void require_size(const State<Real>& state, const PauliString& p) {
  if (qubit_count(state) != p.n_qubits()) {
    throw DimensionError("Pauli on " + std::to_string(p.n_qubits()) + " qubits applied to a " +
                         std::to_string(qubit_count(state)) + "-qubit state");
  }
}

}  // namespace detail

template <typename Real = double>
State<Real> init_state(int n_qubits, const InitialState& spec) {
  if (n_qubits < 1 || n_qubits > 30) throw DimensionError("qubit count out of range");
  const auto dim = Eigen::Index{1} << n_qubits;
  switch (spec.kind) {
    case InitialState::Kind::AllZero: {
      State<Real> out = State<Real>::Zero(dim);
      out(0) = 1;
      return out;
    }
    case InitialState::Kind::AllPlus:
      return State<Real>::Constant(dim, std::complex<Real>(std::pow(Real(2), Real(-0.5) * n_qubits)));
    case InitialState::Kind::Custom:
      if (spec.amplitudes.size() != dim) {
        throw DimensionError("custom amplitudes have length " +
                             std::to_string(spec.amplitudes.size()));
      }
      if (std::abs(spec.amplitudes.norm() - 1.0) > 1e-12) {
        throw PreconditionError("custom initial state is not normalized");
      }
      return spec.amplitudes.template cast<std::complex<Real>>();
  }
  throw PreconditionError("unknown initial state");
}

/// state <- p * state.
template <typename Real>
void apply_pauli(State<Real>& state, const PauliString& p) {
  detail::require_size(state, p);
  const auto flip = p.x_index_mask();
  const auto sign = p.z_index_mask();
  const auto c = detail::i_pow<Real>(p.phase_exp() + std::popcount(p.x_mask() & p.z_mask()));
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (flip == 0) {
    for (std::uint64_t b = 0; b < dim; ++b) state(b) *= detail::parity(b & sign) ? -c : c;
    return;
  }
  const auto pivot = std::uint64_t{1} << (63 - std::countl_zero(flip));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & pivot) continue;
    const auto b2 = b ^ flip;
    const auto from_b = state(b);
    const auto from_b2 = state(b2);
    // (P v)[b ^ flip] = c (-1)^{|b & sign|} v[b]
    state(b2) = detail::parity(b & sign) ? -c * from_b : c * from_b;
    state(b) = detail::parity(b2 & sign) ? -c * from_b2 : c * from_b2;
  }
}

template <typename Real>
State<Real> pauli_applied(State<Real> state, const PauliString& p) {
  apply_pauli(state, p);
  return state;
}

/// state <- exp(-i theta p) state, p a plain (phase 0) Pauli string.
template <typename Real>
void apply_rotation(State<Real>& state, const PauliString& p, Real theta) {
  detail::require_size(state, p);
  if (p.phase_exp() != 0) {
    throw PreconditionError("rotation generator " + format(p) + " must have phase 0");
  }
  const auto flip = p.x_index_mask();
  const auto sign = p.z_index_mask();
  const Real cs = std::cos(theta);
  const Real sn = std::sin(theta);
  // -i sin(theta) * i^{|x & z|}
  const auto off = std::complex<Real>(0, -sn) * detail::i_pow<Real>(std::popcount(p.x_mask() & p.z_mask()));
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (flip == 0) {
    const std::complex<Real> even(cs, -sn);
    const std::complex<Real> odd(cs, sn);
    for (std::uint64_t b = 0; b < dim; ++b) state(b) *= detail::parity(b & sign) ? odd : even;
    return;
  }
  const auto pivot = std::uint64_t{1} << (63 - std::countl_zero(flip));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & pivot) continue;
    const auto b2 = b ^ flip;
    const auto v = state(b);
    const auto w = state(b2);
    state(b) = cs * v + (detail::parity(b2 & sign) ? -off : off) * w;
    state(b2) = cs * w + (detail::parity(b & sign) ? -off : off) * v;
  }
}

/// Applies the gates of `layers` in order with angles theta[param_index],
/// each layer's angles multiplied by `layer_signs[l]` when signs are given.
template <typename Real>
void apply_layers(State<Real>& state, std::span<const Layer> layers,
                  const Eigen::Ref<const Eigen::VectorXd>& theta,
                  std::span<const int> layer_signs = {}) {
  if (!layer_signs.empty() && layer_signs.size() != layers.size()) {
    throw DimensionError("one sign per layer required");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Real s = layer_signs.empty() ? Real(1) : Real(layer_signs[l]);
    for (const Gate& g : layers[l].gates) {
      if (g.param_index < 0 || g.param_index >= theta.size()) {
        throw DimensionError("parameter vector too short for gate " + std::to_string(g.param_index));
      }
      apply_rotation(state, g.generator, s * static_cast<Real>(theta(g.param_index)));
    }
  }
}

/// <state| p |state> for Hermitian p.
template <typename Real>
Real expectation(const State<Real>& state, const PauliString& p) {
  if (!is_hermitian(p)) throw PreconditionError("observable " + format(p) + " is not Hermitian");
  const auto value = state.dot(pauli_applied(state, p));
  const Real scale = std::max<Real>(1, state.squaredNorm());
  if (std::abs(value.imag()) > Real(1e-12) * scale) {
    throw NumericalError("expectation of Hermitian observable has imaginary part " +
                         std::to_string(static_cast<double>(value.imag())));
  }
  return value.real();
}

/// Initial state with the first `count` layers applied.
StateVector run_prefix(const CommutingBlockCircuit& circuit,
                       const Eigen::Ref<const Eigen::VectorXd>& theta, int count);

/// Full circuit state.
StateVector run_circuit(const CommutingBlockCircuit& circuit,
                        const Eigen::Ref<const Eigen::VectorXd>& theta);

enum class LcuVariant { CommutingCase, AnticommutingCase };

/// Ancilla-assisted superposition over N+1 qubits, ancilla = qubit 0 (most
/// significant). With W the segment evolution, W~ the same with the layer
/// angles multiplied by `layer_signs`, and L+- = W +- W~:
///   CommutingCase:     (|0> L+ psi + |1> L- psi) / 2
///   AnticommutingCase: (|0> L- psi + |1> L+ psi) / 2
StateVector prepare_lcu_state(const StateVector& psi, std::span<const Layer> segment_layers,
                              std::span<const int> layer_signs,
                              const Eigen::Ref<const Eigen::VectorXd>& theta, LcuVariant variant);

struct SampleRecord {
  std::vector<std::int8_t> outcomes;  // +1 / -1 per generating-set element
  std::size_t shot_index;
};

/// Sequential projective measurement of commuting Hermitian Pauli strings
/// (sign included) on `shots` copies of `state`. Deterministic in `seed`.
std::vector<SampleRecord> sample_joint_pauli(const StateVector& state,
                                             std::span<const PauliString> generating_set,
                                             std::size_t shots, std::uint64_t seed);

}  // namespace cbqfim
