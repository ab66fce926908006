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

#include "cbqfim/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cbqfim/errors.hpp"
#include "cbqfim/seed.hpp"

namespace cbqfim {

namespace {

int off_block_id(int n_layers, int a, int b) {
  // Pairs (a, b), a < b, enumerated lexicographically after the L diagonal ids.
  int id = n_layers;
  for (int x = 0; x < a; ++x) id += n_layers - 1 - x;
  return id + (b - a - 1);
}

std::vector<std::pair<int, int>> row_and_column(int k, int n_params) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n_params));
  for (int j = 0; j < n_params; ++j) out.emplace_back(std::min(k, j), std::max(k, j));
  return out;
}

// Symplectic vector of a Pauli string, used for GF(2) elimination.
struct Symplectic {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  bool empty() const { return (x | z) == 0; }
  int pivot() const { return x != 0 ? std::countr_zero(x) : 64 + std::countr_zero(z); }
  bool has(int bit) const { return bit < 64 ? (x >> bit) & 1u : (z >> (bit - 64)) & 1u; }
  Symplectic& operator^=(const Symplectic& o) {
    x ^= o.x;
    z ^= o.z;
    return *this;
  }
};

void require_theta(const CommutingBlockCircuit& circuit,
                   const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (theta.size() != circuit.n_params()) {
    throw DimensionError("circuit has " + std::to_string(circuit.n_params()) +
                         " parameters, got " + std::to_string(theta.size()));
  }
}

BlockDiagEstimate assemble_block(const CommutingBlockCircuit& circuit,
                                 const Preparation& preparation,
                                 const PreparationOutcome& outcome) {
  const int l = preparation.layer_a;
  const int offset = circuit.layer_offset(l);
  const auto g = static_cast<Eigen::Index>(circuit.layer(l).gates.size());
  BlockDiagEstimate est;
  est.layer = l;
  est.inner = Eigen::MatrixXd::Identity(g, g);
  est.generator_means = Eigen::VectorXd::Zero(g);
  for (std::size_t o = 0; o < preparation.observables.size(); ++o) {
    const auto& target = preparation.observables[o].target;
    if (target.kind == ObservableTarget::Kind::RawGenerator) {
      est.generator_means(target.first - offset) = outcome.means[o];
    } else {
      const int i = target.first - offset;
      const int j = target.second - offset;
      est.inner(i, j) = est.inner(j, i) = outcome.means[o];
    }
  }
  const Eigen::VectorXd& mean = est.generator_means;
  if (outcome.shots == 0) {
    est.berry_products = mean * mean.transpose();
  } else {
    // E[x_a y_b] = E[x] E[y] for distinct shots a != b.
    const double m = static_cast<double>(outcome.shots);
    est.berry_products = (m * mean * mean.transpose() - est.inner) / (m - 1.0);
  }
  return est;
}

Eigen::MatrixXd assemble_off_block(const CommutingBlockCircuit& circuit,
                                   const Preparation& preparation,
                                   const PreparationOutcome& outcome) {
  const int a = preparation.layer_a;
  const int b = preparation.layer_b;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(circuit.layer(a).gates.size()),
                      static_cast<Eigen::Index>(circuit.layer(b).gates.size()));
  for (std::size_t o = 0; o < preparation.observables.size(); ++o) {
    const auto& target = preparation.observables[o].target;
    out(target.first - circuit.layer_offset(a), target.second - circuit.layer_offset(b)) =
        outcome.means[o];
  }
  return out;
}

}  // namespace

SignedPauli to_signed(const PauliString& hermitian) {
  if (!is_hermitian(hermitian)) {
    throw std::logic_error("operator " + format(hermitian) + " is not Hermitian");
  }
  return {hermitian.phase_exp() == 0 ? 1 : -1, hermitian.phase_free()};
}

std::string format(const SignedPauli& p) { return (p.sign > 0 ? "+" : "-") + format(p.pauli); }

ObservableAssignment build_offblock_observable(const Gate& g_i, const Gate& g_j, Relation relation) {
  const Relation actual = commutes(g_i.generator, g_j.generator);
  if (relation == Relation::Self || actual != relation) {
    throw PreconditionError("relation mismatch between " + format(g_i.generator) + " and " +
                            format(g_j.generator));
  }
  const PauliString o_ji = multiply(g_j.generator, g_i.generator);
  const bool commuting = relation == Relation::Commute;
  // Commuting: O_ji is Hermitian. Anticommuting: i O_ji is.
  const SignedPauli system = to_signed(commuting ? o_ji : o_ji.times_i_pow(1));
  const PauliString ancilla = PauliString::single(1, 0, commuting ? 'Z' : 'Y');
  return {ObservableTarget::pair(g_i.param_index, g_j.param_index),
          SignedPauli{system.sign, tensor(ancilla, system.pauli)},
          {{g_i.param_index, g_j.param_index}}};
}

bool observables_commute(const Preparation& preparation) {
  const auto& obs = preparation.observables;
  for (std::size_t a = 0; a < obs.size(); ++a) {
    for (std::size_t b = a + 1; b < obs.size(); ++b) {
      if (commutes(obs[a].observable.pauli, obs[b].observable.pauli) != Relation::Commute) {
        return false;
      }
    }
  }
  return true;
}

Preparation make_block_diag_preparation(const CommutingBlockCircuit& circuit, int layer, int id) {
  if (layer < 0 || layer >= circuit.n_layers()) throw PreconditionError("layer index out of range");
  Preparation prep;
  prep.id = id;
  prep.kind = PreparationKind::BlockDiag;
  prep.layer_a = prep.layer_b = layer;
  prep.relation = Relation::Self;
  prep.qubit_count = circuit.n_qubits();
  prep.prefix_layers = layer + 1;
  const auto& gates = circuit.layer(layer).gates;
  for (const Gate& g : gates) {
    prep.observables.push_back({ObservableTarget::raw(g.param_index), to_signed(g.generator),
                                row_and_column(g.param_index, circuit.n_params())});
  }
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (std::size_t j = i + 1; j < gates.size(); ++j) {
      prep.observables.push_back(
          {ObservableTarget::pair(gates[i].param_index, gates[j].param_index),
           to_signed(multiply(gates[i].generator, gates[j].generator)),
           {{gates[i].param_index, gates[j].param_index}}});
    }
  }
  if (!observables_commute(prep)) throw std::logic_error("block-diagonal observables anticommute");
  return prep;
}

Preparation make_off_block_preparation(const CommutingBlockCircuit& circuit, int a, int b, int id) {
  Preparation prep;
  prep.id = id;
  prep.kind = PreparationKind::OffBlock;
  prep.layer_a = a;
  prep.layer_b = b;
  prep.twiddle_signs = twiddle_signs(circuit, a, b);  // validates a < b
  prep.relation = circuit.relation(a, b);
  prep.variant = prep.relation == Relation::Commute ? LcuVariant::CommutingCase
                                                    : LcuVariant::AnticommutingCase;
  prep.qubit_count = circuit.n_qubits() + 1;
  prep.prefix_layers = a + 1;
  for (const Gate& gi : circuit.layer(a).gates) {
    for (const Gate& gj : circuit.layer(b).gates) {
      prep.observables.push_back(build_offblock_observable(gi, gj, prep.relation));
    }
  }
  if (!observables_commute(prep)) throw std::logic_error("off-block observables anticommute");
  return prep;
}

std::vector<Preparation> plan(const CommutingBlockCircuit& circuit) {
  const int n_layers = circuit.n_layers();
  std::vector<Preparation> preps;
  preps.reserve(static_cast<std::size_t>(n_layers * (n_layers + 1) / 2));
  for (int l = 0; l < n_layers; ++l) preps.push_back(make_block_diag_preparation(circuit, l, l));
  for (int a = 0; a < n_layers; ++a) {
    for (int b = a + 1; b < n_layers; ++b) {
      preps.push_back(make_off_block_preparation(circuit, a, b, off_block_id(n_layers, a, b)));
    }
  }
  return preps;
}

GeneratingSet generating_set(std::span<const PauliString> observables) {
  for (std::size_t a = 0; a < observables.size(); ++a) {
    if (!is_hermitian(observables[a])) {
      throw PreconditionError("observable " + format(observables[a]) + " is not Hermitian");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (commutes(observables[b], observables[a]) == Relation::Anticommute) {
        throw NonCommutingInput(b, a);
      }
    }
  }
  if (!observables.empty() && observables.front().n_qubits() > 64) {
    throw DimensionError("generating sets limited to 64 qubits");
  }

  struct Row {
    Symplectic vec;
    std::uint64_t combo;  // generators whose product has symplectic vector `vec`
    int pivot;
  };
  GeneratingSet out;
  std::vector<Row> rows;
  std::vector<std::uint64_t> combos;
  combos.reserve(observables.size());
  for (const auto& obs : observables) {
    Symplectic residual{obs.x_mask(), obs.z_mask()};
    std::uint64_t combo = 0;
    for (const Row& row : rows) {
      if (residual.has(row.pivot)) {
        residual ^= row.vec;
        combo ^= row.combo;
      }
    }
    if (!residual.empty()) {
      if (out.generators.size() >= 64) throw DimensionError("too many independent generators");
      const auto index = out.generators.size();
      out.generators.push_back(obs.phase_free());
      combo ^= std::uint64_t{1} << index;
      rows.push_back({residual, combo, residual.pivot()});
      // The observable itself equals the new generator.
      combo = std::uint64_t{1} << index;
    }
    combos.push_back(combo);
  }

  for (std::size_t o = 0; o < observables.size(); ++o) {
    GeneratingSet::Decomposition d;
    PauliString product = PauliString::identity(observables[o].n_qubits());
    for (std::uint64_t c = combos[o]; c != 0; c &= c - 1) {
      const int k = std::countr_zero(c);
      d.factors.push_back(k);
      product = multiply(product, out.generators[static_cast<std::size_t>(k)]);
    }
    if (product.x_mask() != observables[o].x_mask() || product.z_mask() != observables[o].z_mask() ||
        !is_hermitian(product)) {
      throw std::logic_error("generating-set decomposition failed");
    }
    // observable = i^{p_o} P, product = i^{p_g} P  =>  observable = i^{p_o - p_g} product.
    d.sign = ((observables[o].phase_exp() - product.phase_exp() + 4) % 4) == 0 ? 1 : -1;
    out.decompositions.push_back(std::move(d));
  }
  return out;
}

EstimationMode EstimationMode::with_shots(std::size_t shots) {
  if (shots < 2) throw PreconditionError("shot mode needs at least 2 shots per preparation");
  return {Kind::Shots, shots};
}

std::string to_string(const EstimationMode& mode) {
  return mode.kind == EstimationMode::Kind::ExactExpectation ? "exact"
                                                              : "shots(" + std::to_string(mode.shots) + ")";
}

StateVector prepare_state(const CommutingBlockCircuit& circuit,
                          const Eigen::Ref<const Eigen::VectorXd>& theta,
                          const Preparation& preparation) {
  require_theta(circuit, theta);
  StateVector psi = run_prefix(circuit, theta, preparation.prefix_layers);
  if (preparation.kind == PreparationKind::BlockDiag) return psi;
  return prepare_lcu_state(psi, segment(circuit, preparation.layer_a, preparation.layer_b),
                           preparation.twiddle_signs, theta, preparation.variant);
}

PreparationOutcome execute(const CommutingBlockCircuit& circuit,
                           const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const Preparation& preparation, const EstimationMode& mode,
                           std::uint64_t seed) {
  const StateVector state = prepare_state(circuit, theta, preparation);
  PreparationOutcome outcome;
  outcome.preparation_id = preparation.id;
  const auto& obs = preparation.observables;
  outcome.means.resize(obs.size());

  if (mode.kind == EstimationMode::Kind::ExactExpectation) {
    for (std::size_t o = 0; o < obs.size(); ++o) {
      outcome.means[o] = obs[o].observable.sign * expectation(state, obs[o].observable.pauli);
    }
    return outcome;
  }

  std::vector<PauliString> signed_obs;
  signed_obs.reserve(obs.size());
  for (const auto& a : obs) signed_obs.push_back(a.observable.as_pauli());
  const GeneratingSet gens = generating_set(signed_obs);
  const auto records = sample_joint_pauli(state, gens.generators, mode.shots, seed);

  std::vector<long long> sums(obs.size(), 0);
  for (const auto& record : records) {
    for (std::size_t o = 0; o < obs.size(); ++o) {
      const auto& d = gens.decompositions[o];
      int value = d.sign;
      for (int k : d.factors) value *= record.outcomes[static_cast<std::size_t>(k)];
      sums[o] += value;
    }
  }
  outcome.shots = mode.shots;
  for (std::size_t o = 0; o < obs.size(); ++o) {
    outcome.means[o] = static_cast<double>(sums[o]) / static_cast<double>(mode.shots);
  }
  return outcome;
}

BlockDiagEstimate estimate_block_diag(const CommutingBlockCircuit& circuit,
                                      const Eigen::Ref<const Eigen::VectorXd>& theta, int layer,
                                      const EstimationMode& mode, std::uint64_t seed) {
  const Preparation prep = make_block_diag_preparation(circuit, layer, layer);
  return assemble_block(circuit, prep, execute(circuit, theta, prep, mode, seed));
}

Eigen::MatrixXd estimate_off_block(const CommutingBlockCircuit& circuit,
                                   const Eigen::Ref<const Eigen::VectorXd>& theta, int a, int b,
                                   const EstimationMode& mode, std::uint64_t seed) {
  const Preparation prep =
      make_off_block_preparation(circuit, a, b, off_block_id(circuit.n_layers(), a, b));
  return assemble_off_block(circuit, prep, execute(circuit, theta, prep, mode, seed));
}

std::uint64_t preparation_seed(std::uint64_t master_seed, int preparation_id) {
  return derive_seed(master_seed, {0x51f1u, static_cast<std::uint64_t>(preparation_id)});
}

QfimEstimate estimate_qfim(const CommutingBlockCircuit& circuit,
                           const Eigen::Ref<const Eigen::VectorXd>& theta,
                           const EstimationMode& mode, std::uint64_t master_seed,
                           const EstimatorOptions& options) {
  require_theta(circuit, theta);
  const std::vector<Preparation> preps = plan(circuit);
  std::vector<PreparationOutcome> outcomes(preps.size());

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(preps.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t p = next++; p < preps.size(); p = next++) {
      try {
        outcomes[p] = execute(circuit, theta, preps[p], mode, preparation_seed(master_seed, preps[p].id));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const int n_layers = circuit.n_layers();
  const int m = circuit.n_params();
  std::vector<BlockDiagEstimate> blocks;
  blocks.reserve(static_cast<std::size_t>(n_layers));
  for (int l = 0; l < n_layers; ++l) {
    blocks.push_back(assemble_block(circuit, preps[static_cast<std::size_t>(l)],
                                    outcomes[static_cast<std::size_t>(l)]));
  }

  QfimEstimate est;
  est.matrix = QfimMatrix::Zero(m, m);
  for (int l = 0; l < n_layers; ++l) {
    const auto f = blocks[static_cast<std::size_t>(l)].fisher();
    const int off = circuit.layer_offset(l);
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      for (Eigen::Index j = i; j < f.cols(); ++j) {
        est.matrix(off + i, off + j) = est.matrix(off + j, off + i) = f(i, j);
      }
    }
  }
  for (std::size_t p = static_cast<std::size_t>(n_layers); p < preps.size(); ++p) {
    const Preparation& prep = preps[p];
    const Eigen::MatrixXd inner = assemble_off_block(circuit, prep, outcomes[p]);
    const auto& mean_a = blocks[static_cast<std::size_t>(prep.layer_a)].generator_means;
    const auto& mean_b = blocks[static_cast<std::size_t>(prep.layer_b)].generator_means;
    const int off_a = circuit.layer_offset(prep.layer_a);
    const int off_b = circuit.layer_offset(prep.layer_b);
    for (Eigen::Index i = 0; i < inner.rows(); ++i) {
      for (Eigen::Index j = 0; j < inner.cols(); ++j) {
        const double value = 4.0 * (inner(i, j) - mean_a(i) * mean_b(j));
        est.matrix(off_a + i, off_b + j) = est.matrix(off_b + j, off_a + i) = value;
      }
    }
  }

  // Provenance: which preparation and observable produced each upper-triangle entry.
  auto find_observable = [&](const Preparation& prep, int row, int col) -> std::string {
    for (const auto& a : prep.observables) {
      const bool raw = a.target.kind == ObservableTarget::Kind::RawGenerator;
      if ((raw && row == col && a.target.first == row) ||
          (!raw && a.target.first == row && a.target.second == col)) {
        return format(a.observable);
      }
    }
    throw std::logic_error("entry without an observable");
  };
  const std::size_t shots = mode.kind == EstimationMode::Kind::Shots ? mode.shots : 0;
  for (int r = 0; r < m; ++r) {
    const int lr = circuit.layer_of(r);
    for (int c = r; c < m; ++c) {
      const int lc = circuit.layer_of(c);
      const int id = lr == lc ? lr : off_block_id(n_layers, lr, lc);
      const auto& prep = preps[static_cast<std::size_t>(id)];
      est.provenance.push_back({r, c, id, find_observable(prep, r, c), shots, {lr, lc}});
    }
  }

  est.ledger.n_preparations = preps.size();
  for (const auto& prep : preps) est.ledger.qubit_counts.push_back(prep.qubit_count);
  est.ledger.total_shots = shots * preps.size();
  est.ledger.mode = mode;
  est.ledger.target_error = options.target_error;
  return est;
}

}  // namespace cbqfim
