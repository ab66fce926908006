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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cbqfim/circuit.hpp"
#include "cbqfim/oracle.hpp"
#include "cbqfim/pauli.hpp"
#include "cbqfim/simulator.hpp"

namespace cbqfim {

/// sign * pauli with `pauli` phase-free; the Hermitian operators measured by
/// the protocol are all of this form.
struct SignedPauli {
  int sign = 1;
  PauliString pauli;

  /// Back to a single PauliString (phase 0 or 2).
  PauliString as_pauli() const { return sign > 0 ? pauli : pauli.times_i_pow(2); }
};

/// Splits a Hermitian Pauli string (phase 0 or 2) into sign and phase-free part.
SignedPauli to_signed(const PauliString& hermitian);
std::string format(const SignedPauli& p);

struct ObservableTarget {
  enum class Kind { RawGenerator, PairProduct };

  Kind kind;
  int first;        // parameter index (RawGenerator: the generator's)
  int second = -1;  // PairProduct only

  static ObservableTarget raw(int k) { return {Kind::RawGenerator, k, -1}; }
  static ObservableTarget pair(int i, int j) { return {Kind::PairProduct, i, j}; }
};

struct ObservableAssignment {
  ObservableTarget target;
  SignedPauli observable;  // on the preparation's register (ancilla first if any)
  std::vector<std::pair<int, int>> qfim_entries;  // (row, col) with row <= col
};

enum class PreparationKind { BlockDiag, OffBlock };

/// One distinct circuit configuration. BlockDiag(l) measures the layer's
/// generators and their pairwise products on |psi^l>; OffBlock(a, b) measures
/// ancilla (x) O_ji on the LCU state built from |psi^a> and layers a+1..b.
struct Preparation {
  int id = 0;
  PreparationKind kind = PreparationKind::BlockDiag;
  int layer_a = 0;
  int layer_b = 0;  // == layer_a for BlockDiag
  Relation relation = Relation::Self;
  int qubit_count = 0;
  int prefix_layers = 0;           // layers applied to the initial state first
  std::vector<int> twiddle_signs;  // OffBlock: one per layer a+1..b
  LcuVariant variant = LcuVariant::CommutingCase;
  std::vector<ObservableAssignment> observables;
};

Preparation make_block_diag_preparation(const CommutingBlockCircuit& circuit, int layer, int id);
Preparation make_off_block_preparation(const CommutingBlockCircuit& circuit, int a, int b, int id);

/// L block-diagonal preparations (ids 0..L-1, by layer) followed by
/// L(L-1)/2 off-block ones in (a, b) lexicographic order.
std::vector<Preparation> plan(const CommutingBlockCircuit& circuit);

/// Observable for Re<d_i psi|d_j psi> with G_i in the earlier layer and G_j in
/// the later one, O_ji = G_j G_i. Commute: Z (x) O_ji. Anticommute:
/// Y (x) (i O_ji). Throws PreconditionError if `relation` does not match.
ObservableAssignment build_offblock_observable(const Gate& g_i, const Gate& g_j, Relation relation);

/// True iff every pair of observables in the preparation commutes.
bool observables_commute(const Preparation& preparation);

/// GF(2)-independent commuting generators for a set of commuting Hermitian
/// Pauli strings. Each input equals sign * product of generators[factors].
struct GeneratingSet {
  struct Decomposition {
    int sign = 1;
    std::vector<int> factors;  // ascending
  };

  std::vector<PauliString> generators;  // phase-free
  std::vector<Decomposition> decompositions;
};

/// Throws NonCommutingInput on an anticommuting pair.
GeneratingSet generating_set(std::span<const PauliString> observables);

struct EstimationMode {
  enum class Kind { ExactExpectation, Shots };

  Kind kind = Kind::ExactExpectation;
  std::size_t shots = 0;

  static EstimationMode exact() { return {}; }
  /// Requires shots >= 2.
  static EstimationMode with_shots(std::size_t shots);

  friend bool operator==(const EstimationMode&, const EstimationMode&) = default;
};

std::string to_string(const EstimationMode& mode);

/// Expectation values (exact or M-shot means) of a preparation's observables,
/// in plan order, plus the raw sums used by the product estimators.
struct PreparationOutcome {
  int preparation_id = 0;
  std::vector<double> means;
  std::size_t shots = 0;  // 0 in exact mode
};

StateVector prepare_state(const CommutingBlockCircuit& circuit,
                          const Eigen::Ref<const Eigen::VectorXd>& theta,
                          const Preparation& preparation);

PreparationOutcome execute(const CommutingBlockCircuit& circuit,
                           const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const Preparation& preparation, const EstimationMode& mode,
                           std::uint64_t seed);

struct BlockDiagEstimate {
  int layer = 0;
  Eigen::MatrixXd inner;            // Re<d_i psi|d_j psi> = <G_i G_j>
  Eigen::VectorXd generator_means;  // <G_i>
  Eigen::MatrixXd berry_products;   // estimates of <G_i><G_j>

  Eigen::MatrixXd fisher() const { return 4.0 * (inner - berry_products); }
};

/// In shot mode the products <G_i><G_j> use the unbiased U-statistic
/// (S_i S_j - S_ij) / (M (M - 1)) over the single joint dataset.
BlockDiagEstimate estimate_block_diag(const CommutingBlockCircuit& circuit,
                                      const Eigen::Ref<const Eigen::VectorXd>& theta, int layer,
                                      const EstimationMode& mode, std::uint64_t seed);

/// Re<d_i psi|d_j psi> for G_i in layer a (rows) and G_j in layer b (cols).
Eigen::MatrixXd estimate_off_block(const CommutingBlockCircuit& circuit,
                                   const Eigen::Ref<const Eigen::VectorXd>& theta, int a, int b,
                                   const EstimationMode& mode, std::uint64_t seed);

struct EntryProvenance {
  int row = 0;
  int col = 0;
  int preparation_id = 0;
  std::string observable;
  std::size_t shots = 0;
  std::pair<int, int> berry_preparations{0, 0};
};

struct ResourceLedger {
  std::size_t n_preparations = 0;
  std::vector<int> qubit_counts;  // per preparation id
  std::size_t total_shots = 0;
  EstimationMode mode;
  std::optional<double> target_error;
};

struct QfimEstimate {
  QfimMatrix matrix;
  std::vector<EntryProvenance> provenance;  // upper triangle, row-major
  ResourceLedger ledger;
};

struct EstimatorOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  std::optional<double> target_error;
};

/// Per-preparation RNG stream; identical for serial and parallel execution.
std::uint64_t preparation_seed(std::uint64_t master_seed, int preparation_id);

QfimEstimate estimate_qfim(const CommutingBlockCircuit& circuit,
                           const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const EstimationMode& mode, std::uint64_t master_seed,
                           const EstimatorOptions& options = {});

}  // namespace cbqfim
