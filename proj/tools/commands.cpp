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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>

#include <CLI11.hpp>

#include "cbqfim/errors.hpp"
#include "cbqfim/hamiltonian.hpp"
#include "cbqfim/oracle.hpp"
#include "cbqfim/protocol.hpp"
#include "cbqfim/qng.hpp"
#include "cbqfim/seed.hpp"

namespace cbqfim::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

/// Thrown for argument combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned threads_from_env() {
  const char* raw = std::getenv("QFIM_CBC_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long value = std::strtoul(raw, &end, 10);
  if (*end != '\0' || value > 4096) throw UsageError(std::string("QFIM_CBC_THREADS: bad value \"") + raw + "\"");
  return static_cast<unsigned>(value);
}

Json layer_sizes(const CommutingBlockCircuit& circuit) {
  Json out = Json::array();
  for (const auto& layer : circuit.layers()) out.push_back(layer.gates.size());
  return out;
}

Json make_report(std::string command, std::string input_digest, Json mode, Json seed, Json results,
                 Json ledger) {
  return {{"command", std::move(command)}, {"input_digest", std::move(input_digest)},
          {"mode", std::move(mode)},       {"seed", std::move(seed)},
          {"results", std::move(results)}, {"ledger", std::move(ledger)}};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(Json report, const Stopwatch& clock, const std::string& out_path) {
  if (out_path.empty()) return;
  report["duration_seconds"] = clock.seconds();
  write_json_file(out_path, report);
}

void print_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  const Eigen::IOFormat fmt(10, 0, "  ", "\n", "  ", "", "", "");
  out << m.format(fmt) << '\n';
}

// ---- validate ----------------------------------------------------------

int cmd_validate(const std::string& path, const std::string& out_path, std::ostream& out) {
  const Stopwatch clock;
  const Json doc = read_json_file(path);
  Json results;
  int code = kOk;
  try {
    const CircuitFile file = circuit_from_json(doc);
    const auto& c = file.circuit;
    results = {{"valid", true},
               {"n_qubits", c.n_qubits()},
               {"n_layers", c.n_layers()},
               {"layer_sizes", layer_sizes(c)},
               {"relations", relations_to_json(c.relations())}};
    out << "valid: " << c.n_qubits() << " qubits, " << c.n_layers() << " layers, " << c.n_params()
        << " parameters\nlayer relations (C commute, A anticommute, - same layer):\n";
    for (int a = 0; a < c.n_layers(); ++a) {
      for (int b = 0; b < c.n_layers(); ++b) {
        const Relation r = c.relation(a, b);
        out << (b ? " " : "  ") << (r == Relation::Self ? '-' : r == Relation::Commute ? 'C' : 'A');
      }
      out << '\n';
    }
  } catch (const IntraLayerViolation& e) {
    results = {{"valid", false},
               {"violation", {{"kind", "intra-layer"}, {"layer", e.layer}, {"gates", {e.gate_a, e.gate_b}}}}};
    out << "invalid: " << e.what() << '\n';
    code = kFail;
  } catch (const MixedRelation& e) {
    results = {{"valid", false},
               {"violation",
                {{"kind", "mixed-relation"},
                 {"layer_a", e.layer_a},
                 {"layer_b", e.layer_b},
                 {"commuting_pair", {e.commuting_a, e.commuting_b}},
                 {"anticommuting_pair", {e.anti_a, e.anti_b}}}}};
    out << "invalid: " << e.what() << '\n';
    code = kFail;
  }
  emit(make_report("validate", digest(doc), nullptr, nullptr, std::move(results), nullptr), clock, out_path);
  return code;
}

// ---- qfim --------------------------------------------------------------

struct QfimArgs {
  std::string circuit;
  std::vector<std::string> mode{"protocol-exact"};
  std::optional<std::size_t> shots;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_qfim(const QfimArgs& args, unsigned threads, std::ostream& out, std::ostream& err) {
  const Stopwatch clock;
  const std::string& mode = args.mode.front();
  if (mode != "exact-oracle" && mode != "protocol-exact" && mode != "protocol-shots") {
    throw UsageError("--mode must be exact-oracle, protocol-exact or protocol-shots");
  }
  std::optional<std::size_t> shots = args.shots;
  if (args.mode.size() == 2) {
    if (mode != "protocol-shots") throw UsageError("only protocol-shots takes a shot count");
    std::size_t parsed = 0;
    if (!CLI::detail::lexical_cast(args.mode[1], parsed)) throw UsageError("bad shot count " + args.mode[1]);
    if (shots && *shots != parsed) throw UsageError("conflicting shot counts");
    shots = parsed;
  }
  if (mode != "protocol-shots" && shots) throw UsageError("--shots requires --mode protocol-shots");
  if (mode == "protocol-shots" && !shots) {
    shots = 1000;
    err << "shots: 1000 (default)\n";
  }

  const Json doc = read_json_file(args.circuit);
  const CircuitFile file = circuit_from_json(doc);
  const auto& circuit = file.circuit;

  Json results = {{"n_params", circuit.n_params()}, {"layer_sizes", layer_sizes(circuit)}};
  Json ledger;
  Eigen::MatrixXd matrix;
  if (mode == "exact-oracle") {
    matrix = qfim_exact(circuit, file.parameters);
    ledger = {{"oracle", true}, {"n_preparations", nullptr}};
  } else {
    const EstimationMode m = mode == "protocol-exact" ? EstimationMode::exact() : EstimationMode::with_shots(*shots);
    const QfimEstimate est = estimate_qfim(circuit, file.parameters, m, args.seed, EstimatorOptions{.threads = threads, .target_error = std::nullopt});
    matrix = est.matrix;
    results["provenance"] = provenance_to_json(est.provenance);
    ledger = ledger_to_json(est.ledger);
    out << "preparations: " << est.ledger.n_preparations << ", total shots: " << est.ledger.total_shots << '\n';
  }
  results["matrix"] = matrix_to_json(matrix);
  out << "QFIM (" << mode << "):\n";
  print_matrix(out, matrix);

  Json mode_json = {{"name", mode}};
  if (shots) mode_json["shots"] = *shots;
  emit(make_report("qfim", digest(doc), std::move(mode_json), args.seed, std::move(results), std::move(ledger)),
       clock, args.out_path);
  return kOk;
}

// ---- compare -----------------------------------------------------------

int cmd_compare(const std::string& path_a, const std::string& path_b, double tol, const std::string& out_path,
                std::ostream& out) {
  const Stopwatch clock;
  const Json a = read_json_file(path_a);
  const Json b = read_json_file(path_b);
  for (const Json* r : {&a, &b}) {
    if (!r->is_object() || r->value("command", "") != "qfim" || !r->contains("results") ||
        !(*r)["results"].contains("matrix")) {
      throw InputError("compare expects two qfim reports");
    }
  }
  if (a.value("input_digest", "") != b.value("input_digest", "")) {
    throw InputError("reports were produced from different inputs (digest mismatch)");
  }
  if (a["results"].value("layer_sizes", Json()) != b["results"].value("layer_sizes", Json())) {
    throw InputError("reports have different parameter layouts");
  }
  const Eigen::MatrixXd ma = matrix_from_json(a["results"]["matrix"]);
  const Eigen::MatrixXd mb = matrix_from_json(b["results"]["matrix"]);
  if (ma.rows() != mb.rows() || ma.cols() != mb.cols()) throw InputError("matrix shapes differ");

  const Eigen::MatrixXd diff = (ma - mb).cwiseAbs();
  const double max_diff = diff.size() == 0 ? 0.0 : diff.maxCoeff();
  const bool pass = max_diff <= tol;
  out << "max abs diff: " << max_diff << " (tol " << tol << ") " << (pass ? "PASS" : "FAIL") << '\n';
  Json results = {{"max_abs_diff", max_diff}, {"tol", tol}, {"pass", pass}, {"entry_diffs", matrix_to_json(diff)}};
  emit(make_report("compare", a["input_digest"], {{"a", a["mode"]}, {"b", b["mode"]}}, nullptr, std::move(results),
                   nullptr),
       clock, out_path);
  return pass ? kOk : kFail;
}

// ---- variance-sweep ----------------------------------------------------

int cmd_variance_sweep(const std::string& path, const std::vector<std::size_t>& shots, int reps,
                       std::uint64_t seed, const std::string& out_path, unsigned threads, std::ostream& out) {
  const Stopwatch clock;
  if (reps < 20) throw UsageError("--reps must be at least 20 for a variance estimate");
  if (shots.size() < 3) throw UsageError("--shots-list needs at least 3 shot counts for a fit");
  for (auto m : shots) {
    if (m < 2) throw UsageError("shot counts must be at least 2");
  }
  const Json doc = read_json_file(path);
  const CircuitFile file = circuit_from_json(doc);
  const VarianceSweep sweep = variance_sweep(file.circuit, file.parameters, shots, reps, seed, threads);

  Json per_shot = Json::array();
  for (std::size_t s = 0; s < shots.size(); ++s) {
    per_shot.push_back({{"shots", shots[s]},
                        {"mean", matrix_to_json(sweep.means[s])},
                        {"variance", matrix_to_json(sweep.variances[s])},
                        {"total_variance", sweep.total_variance[s]}});
    out << "M = " << shots[s] << ": total variance " << sweep.total_variance[s] << '\n';
  }
  const bool pass = sweep.passes();
  out << "aggregate log-log slope: " << sweep.aggregate_slope << " (accepted range [-1.15, -0.85]) "
      << (pass ? "PASS" : "FAIL") << '\n';

  const auto n_preps = static_cast<std::size_t>(file.circuit.n_layers() * (file.circuit.n_layers() + 1) / 2);
  std::size_t total_shots = 0;
  for (auto m : shots) total_shots += m * n_preps * static_cast<std::size_t>(reps);
  Json results = {{"reps", reps},
                  {"per_shot_count", std::move(per_shot)},
                  {"entry_slopes", matrix_to_json(sweep.entry_slopes)},
                  {"aggregate_slope", sweep.aggregate_slope},
                  {"pass", pass}};
  Json ledger = {{"n_preparations_per_estimate", n_preps},
                 {"estimates", shots.size() * static_cast<std::size_t>(reps)},
                 {"total_shots", total_shots}};
  emit(make_report("variance-sweep", digest(doc), {{"name", "protocol-shots"}, {"shots_list", shots}}, seed,
                   std::move(results), std::move(ledger)),
       clock, out_path);
  return pass ? kOk : kFail;
}

// ---- qng-run -----------------------------------------------------------

int cmd_qng_run(const std::string& circuit_path, const std::string& ham_path, const std::string& config_path,
                const std::string& out_path, unsigned threads, std::ostream& out, std::ostream& err) {
  const Stopwatch clock;
  const Json circuit_doc = read_json_file(circuit_path);
  const Json ham_doc = read_json_file(ham_path);
  const Json config_doc = config_path.empty() ? Json::object() : read_json_file(config_path);
  const CircuitFile file = circuit_from_json(circuit_doc);
  const Hamiltonian h = hamiltonian_from_json(ham_doc);
  QngConfig config = qng_config_from_json(config_doc);
  config.threads = threads;
  if (!config_doc.contains("seed")) err << "seed: 0 (default)\n";
  if (h.n_qubits() != file.circuit.n_qubits()) {
    throw DimensionError("Hamiltonian acts on " + std::to_string(h.n_qubits()) + " qubits, circuit on " +
                         std::to_string(file.circuit.n_qubits()));
  }

  const QngTrajectory traj = run(file.circuit, file.parameters, h, config);
  const double final_energy = traj.final().energy;
  Json reference = nullptr;
  out << "iterations: " << traj.final().iteration << '\n' << "final energy: " << final_energy << '\n';
  if (h.n_qubits() <= 10) {
    const double e0 = ground_energy(h);
    reference = e0;
    out << "reference ground energy: " << e0 << '\n' << "gap: " << final_energy - e0 << '\n';
  }
  Json results = {{"config", qng_config_to_json(config)},
                  {"trajectory", trajectory_to_json(traj)},
                  {"final_energy", final_energy},
                  {"reference_energy", reference}};
  Json ledger = {{"total_preparations", traj.final().cumulative_preparations},
                 {"total_shots", traj.final().cumulative_shots}};
  const Json inputs = {{"circuit", circuit_doc}, {"hamiltonian", ham_doc}, {"config", config_doc}};
  emit(make_report("qng-run", digest(inputs), mode_to_json(config.qfim_mode), config.seed, std::move(results),
                   std::move(ledger)),
       clock, out_path);
  return kOk;
}

}  // namespace

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("slope fit needs two or more points");
  Eigen::VectorXd lx(static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd ly(lx.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx(static_cast<Eigen::Index>(i)) = std::log(x[i]);
    ly(static_cast<Eigen::Index>(i)) = std::log(y[i]);
  }
  const Eigen::VectorXd cx = lx.array() - lx.mean();
  const Eigen::VectorXd cy = ly.array() - ly.mean();
  return cx.dot(cy) / cx.squaredNorm();
}

VarianceSweep variance_sweep(const CommutingBlockCircuit& circuit, const Eigen::Ref<const Eigen::VectorXd>& theta,
                             const std::vector<std::size_t>& shots, int reps, std::uint64_t seed,
                             unsigned threads) {
  if (reps < 2) throw PreconditionError("variance sweep needs at least 2 repetitions");
  const auto m = static_cast<Eigen::Index>(circuit.n_params());
  VarianceSweep sweep;
  sweep.shots = shots;
  sweep.reps = reps;
  for (const std::size_t count : shots) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(m, m);
    std::vector<Eigen::MatrixXd> samples;
    samples.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
      const auto s = derive_seed(seed, {count, static_cast<std::uint64_t>(r)});
      samples.push_back(estimate_qfim(circuit, theta, EstimationMode::with_shots(count), s, EstimatorOptions{.threads = threads, .target_error = std::nullopt}).matrix);
      sum += samples.back();
    }
    const Eigen::MatrixXd mean = sum / reps;
    for (const auto& x : samples) sum_sq += (x - mean).cwiseAbs2();
    const Eigen::MatrixXd var = sum_sq / (reps - 1);
    sweep.means.push_back(mean);
    sweep.variances.push_back(var);
    sweep.total_variance.push_back(var.triangularView<Eigen::Upper>().toDenseMatrix().sum());
  }

  std::vector<double> xs(shots.begin(), shots.end());
  sweep.entry_slopes = Eigen::MatrixXd::Constant(m, m, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      std::vector<double> ys;
      for (const auto& v : sweep.variances) ys.push_back(v(i, j));
      if (std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0; })) {
        sweep.entry_slopes(i, j) = sweep.entry_slopes(j, i) = log_log_slope(xs, ys);
      }
    }
  }
  const bool fit = std::all_of(sweep.total_variance.begin(), sweep.total_variance.end(),
                               [](double v) { return v > 0; });
  sweep.aggregate_slope = fit ? log_log_slope(xs, sweep.total_variance) : std::numeric_limits<double>::quiet_NaN();
  return sweep;
}

Json payload(Json report) {
  report.erase("duration_seconds");
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Fisher information of commuting-block circuits", "cbqfim"};
  app.require_subcommand(1);

  std::string circuit_path;
  std::string out_path;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Check the commuting-block structure of a circuit file");
  validate->add_option("circuit", circuit_path, "Circuit JSON")->required();
  validate->add_option("--out", out_path, "Report JSON");

  QfimArgs qfim_args;
  auto* qfim = app.add_subcommand("qfim", "Compute the QFIM of a circuit");
  qfim->add_option("circuit", qfim_args.circuit, "Circuit JSON")->required();
  qfim->add_option("--mode", qfim_args.mode, "exact-oracle | protocol-exact | protocol-shots [M]")
      ->expected(1, 2)
      ->capture_default_str();
  qfim->add_option("--shots", qfim_args.shots, "Shots per preparation (protocol-shots)");
  auto* qfim_seed = qfim->add_option("--seed", qfim_args.seed, "Master seed");
  qfim->add_option("--out", qfim_args.out_path, "Report JSON");

  std::string report_a;
  std::string report_b;
  double tol = 1e-9;
  auto* compare = app.add_subcommand("compare", "Compare two qfim reports entrywise");
  compare->add_option("report_a", report_a)->required();
  compare->add_option("report_b", report_b)->required();
  compare->add_option("--tol", tol, "Max abs difference")->capture_default_str();
  compare->add_option("--out", out_path, "Report JSON");

  std::vector<std::size_t> shots_list{100, 1000, 10000};
  int reps = 200;
  auto* sweep = app.add_subcommand("variance-sweep", "Per-entry estimator variance against shot count");
  sweep->add_option("circuit", circuit_path, "Circuit JSON")->required();
  sweep->add_option("--shots-list", shots_list, "Comma-separated shot counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--reps", reps, "Repetitions per shot count")->capture_default_str();
  auto* sweep_seed = sweep->add_option("--seed", seed, "Master seed");
  sweep->add_option("--out", out_path, "Report JSON");

  std::string ham_path;
  std::string config_path;
  auto* qng = app.add_subcommand("qng-run", "Quantum natural gradient descent on a Hamiltonian");
  qng->add_option("circuit", circuit_path, "Circuit JSON (parameters are the starting point)")->required();
  qng->add_option("hamiltonian", ham_path, "Hamiltonian JSON")->required();
  qng->add_option("--config", config_path, "QNG config JSON");
  qng->add_option("--out", out_path, "Trajectory report JSON");

  std::vector<const char*> argv{"cbqfim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const unsigned threads = threads_from_env();
    if ((qfim->parsed() && qfim_seed->count() == 0) || (sweep->parsed() && sweep_seed->count() == 0)) {
      err << "seed: 0 (default)\n";
    }
    if (validate->parsed()) return cmd_validate(circuit_path, out_path, out);
    if (qfim->parsed()) return cmd_qfim(qfim_args, threads, out, err);
    if (compare->parsed()) return cmd_compare(report_a, report_b, tol, out_path, out);
    if (sweep->parsed()) return cmd_variance_sweep(circuit_path, shots_list, reps, seed, out_path, threads, out);
    return cmd_qng_run(circuit_path, ham_path, config_path, out_path, threads, out, err);
  } catch (const ValidationError& e) {
    err << "invalid circuit: " << e.what() << '\n';
    return kFail;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cbqfim::cli
