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

#include "cbqfim/pauli.hpp"

#include <bit>
#include <complex>

#include "cbqfim/errors.hpp"

namespace cbqfim {

namespace {

using Mask = PauliString::Mask;

Mask low_bits(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

Mask reverse_bits(Mask m, int n) {
  Mask out = 0;
  for (int q = 0; q < n; ++q) {
    if ((m >> q) & 1u) out |= Mask{1} << (n - 1 - q);
  }
  return out;
}

void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("Pauli strings act on " + std::to_string(a.n_qubits()) +
                         " and " + std::to_string(b.n_qubits()) + " qubits");
  }
}

}  // namespace

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::Commute:
      return "commute";
    case Relation::Anticommute:
      return "anticommute";
    case Relation::Self:
      return "self";
  }
  return "?";
}

PauliString::PauliString(int n_qubits, Mask x_mask, Mask z_mask, int phase_exp)
    : n_qubits_(n_qubits),
      x_mask_(x_mask),
      z_mask_(z_mask),
      phase_exp_(((phase_exp % 4) + 4) % 4) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DimensionError("qubit count must be in [1, 63], got " +
                         std::to_string(n_qubits));
  }
  if (((x_mask | z_mask) & ~low_bits(n_qubits)) != 0) {
    throw DimensionError("mask bits set beyond qubit count");
  }
}

PauliString PauliString::identity(int n_qubits) { return {n_qubits, 0, 0, 0}; }

PauliString PauliString::single(int n_qubits, int qubit, char op) {
  if (qubit < 0 || qubit >= n_qubits) throw PreconditionError("qubit index out of range");
  const Mask bit = Mask{1} << qubit;
  switch (op) {
    case 'I':
      return {n_qubits, 0, 0};
    case 'X':
      return {n_qubits, bit, 0};
    case 'Y':
      return {n_qubits, bit, bit};
    case 'Z':
      return {n_qubits, 0, bit};
    default:
      throw PreconditionError(std::string("unknown Pauli '") + op + "'");
  }
}

char PauliString::op(int qubit) const {
  const bool x = (x_mask_ >> qubit) & 1u;
  const bool z = (z_mask_ >> qubit) & 1u;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

int PauliString::weight() const { return std::popcount(x_mask_ | z_mask_); }

PauliString PauliString::times_i_pow(int k) const {
  return {n_qubits_, x_mask_, z_mask_, phase_exp_ + k};
}

Mask PauliString::x_index_mask() const { return reverse_bits(x_mask_, n_qubits_); }
Mask PauliString::z_index_mask() const { return reverse_bits(z_mask_, n_qubits_); }

Relation commutes(const PauliString& a, const PauliString& b) {
  require_same_size(a, b);
  const int symplectic =
      std::popcount(a.x_mask() & b.z_mask()) + std::popcount(a.z_mask() & b.x_mask());
  return symplectic % 2 == 0 ? Relation::Commute : Relation::Anticommute;
}

// With Y = i X Z, a string with masks (x, z) equals i^{|x&z|} X^x Z^z, and
// Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
PauliString multiply(const PauliString& a, const PauliString& b) {
  require_same_size(a, b);
  const Mask x = a.x_mask() ^ b.x_mask();
  const Mask z = a.z_mask() ^ b.z_mask();
  const int phase = a.phase_exp() + b.phase_exp() + std::popcount(a.x_mask() & a.z_mask()) +
                    std::popcount(b.x_mask() & b.z_mask()) +
                    2 * std::popcount(a.z_mask() & b.x_mask()) - std::popcount(x & z);
  return {a.n_qubits(), x, z, phase};
}

PauliString tensor(const PauliString& left, const PauliString& right) {
  const int n = left.n_qubits() + right.n_qubits();
  const int shift = left.n_qubits();
  return {n, left.x_mask() | (right.x_mask() << shift), left.z_mask() | (right.z_mask() << shift),
          left.phase_exp() + right.phase_exp()};
}

PauliString parse_pauli(std::string_view text) {
  std::size_t pos = 0;
  int phase = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    phase = text[pos] == '-' ? 2 : 0;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  const std::size_t start = pos;
  const std::size_t n = text.size() - start;
  if (n == 0) throw ParseError("empty Pauli label", pos);
  if (n > static_cast<std::size_t>(PauliString::kMaxQubits)) {
    throw ParseError("Pauli label too long", PauliString::kMaxQubits + start);
  }
  Mask x = 0;
  Mask z = 0;
  for (; pos < text.size(); ++pos) {
    const Mask bit = Mask{1} << (pos - start);
    switch (text[pos]) {
      case 'I':
        break;
      case 'X':
        x |= bit;
        break;
      case 'Y':
        x |= bit;
        z |= bit;
        break;
      case 'Z':
        z |= bit;
        break;
      default:
        throw ParseError(std::string("illegal character '") + text[pos] + "' in Pauli label",
                         pos);
    }
  }
  return {static_cast<int>(n), x, z, phase};
}

std::string format(const PauliString& p) {
  static constexpr std::string_view kPrefix[] = {"", "+i", "-", "-i"};
  std::string out(kPrefix[p.phase_exp()]);
  out.reserve(out.size() + p.n_qubits());
  for (int q = 0; q < p.n_qubits(); ++q) out.push_back(p.op(q));
  return out;
}

Eigen::MatrixXcd dense_matrix(const PauliString& p) {
  using C = std::complex<double>;
  Eigen::Matrix2cd single[4];
  single[0] << 1, 0, 0, 1;
  single[1] << 0, 1, 1, 0;
  single[2] << 0, C(0, -1), C(0, 1), 0;
  single[3] << 1, 0, 0, -1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < p.n_qubits(); ++q) {
    const char c = p.op(q);
    const Eigen::Matrix2cd& m = single[c == 'I' ? 0 : c == 'X' ? 1 : c == 'Y' ? 2 : 3];
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index col = 0; col < out.cols(); ++col) {
        next.block<2, 2>(2 * r, 2 * col) = out(r, col) * m;
      }
    }
    out = std::move(next);
  }
  static const C kPhases[] = {C(1, 0), C(0, 1), C(-1, 0), C(0, -1)};
  return kPhases[p.phase_exp()] * out;
}

}  // namespace cbqfim
