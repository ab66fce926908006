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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cbqfim/errors.hpp"
#include "cbqfim/io.hpp"
#include "commands.hpp"

namespace cbqfim {
namespace {

namespace fs = std::filesystem;

const std::string kSample = CBQFIM_SAMPLE_DATA;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cbqfim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("QFIM_CBC_THREADS");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("QFIM_CBC_THREADS");
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, CircuitRoundTrip) {
  const Json doc = read_json_file(kSample + "/example_ansatz_n2.json");
  const CircuitFile file = circuit_from_json(doc);
  EXPECT_EQ(circuit_to_json(file.circuit, file.parameters), doc);
  EXPECT_EQ(digest(circuit_to_json(file.circuit, file.parameters)), digest(doc));
}

TEST(Io, CustomAmplitudes) {
  const Json doc = Json::parse(R"({"n_qubits": 1, "initial_state": {"amplitudes": [[0.6, 0], [0, 0.8]]},
                                   "layers": [["X"]], "parameters": [0.1]})");
  const CircuitFile file = circuit_from_json(doc);
  EXPECT_EQ(file.circuit.initial_state().amplitudes(1), std::complex<double>(0, 0.8));
  EXPECT_EQ(circuit_to_json(file.circuit, file.parameters), doc);
}

TEST(Io, SchemaErrors) {
  EXPECT_THROW(circuit_from_json(Json::parse(R"({"layers": [["X"]], "parameters": [0]})")), InputError);
  EXPECT_THROW(circuit_from_json(Json::parse(R"({"n_qubits": 1, "layers": [["X"]]})")), InputError);
  EXPECT_THROW(circuit_from_json(Json::parse(R"({"n_qubits": 1, "layers": [["X"]], "parameters": [0, 1]})")),
               DimensionError);
  EXPECT_THROW(circuit_from_json(Json::parse(R"({"n_qubits": 1, "layers": [["Q"]], "parameters": [0]})")), ParseError);
  EXPECT_THROW(circuit_from_json(Json::parse(R"({"n_qubits": 1, "initial_state": "minus", "layers": [["X"]], "parameters": [0]})")),
               InputError);
  EXPECT_THROW(hamiltonian_from_json(Json::parse(R"({"terms": [[1.0]]})")), InputError);
  EXPECT_THROW(qng_config_from_json(Json::parse(R"({"eta": -1})")), InputError);
  EXPECT_THROW(qng_config_from_json(Json::parse(R"({"grad_mode": "adjoint"})")), InputError);
}

TEST(Io, HamiltonianAndConfig) {
  const Hamiltonian h = hamiltonian_from_json(read_json_file(kSample + "/tfim3_hamiltonian.json"));
  EXPECT_EQ(h.n_qubits(), 3);
  EXPECT_EQ(h.terms().size(), 5u);
  EXPECT_EQ(hamiltonian_from_json(hamiltonian_to_json(h)).terms().size(), 5u);
  const QngConfig c = qng_config_from_json(Json::parse(R"({"qfim_mode": "shots", "shots": 64, "grad_mode": "parameter-shift"})"));
  EXPECT_EQ(c.qfim_mode, EstimationMode::with_shots(64));
  EXPECT_EQ(c.grad_mode, GradientMode::ParameterShift);
  EXPECT_EQ(c.eta, 0.05);
  EXPECT_EQ(qng_config_from_json(qng_config_to_json(c)).qfim_mode, c.qfim_mode);
}

TEST_F(CliTest, ValidateExampleAnsatz) {
  const auto r = cli({"validate", kSample + "/example_ansatz_n2.json", "--out", path("v.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("- A"), std::string::npos);
  const Json report = read_json_file(path("v.json"));
  EXPECT_TRUE(report["results"]["valid"].get<bool>());
  EXPECT_EQ(report["results"]["relations"][0][1], "anticommute");
}

TEST_F(CliTest, ValidateMixedRelationReportsWitness) {
  const auto r = cli({"validate", kSample + "/mixed_relation.json", "--out", path("v.json")});
  EXPECT_EQ(r.code, 1);
  const Json v = read_json_file(path("v.json"))["results"]["violation"];
  EXPECT_EQ(v["kind"], "mixed-relation");
  EXPECT_EQ(v["layer_a"], 0);
  EXPECT_EQ(v["layer_b"], 1);
  EXPECT_EQ(v["commuting_pair"], Json::parse("[1, 0]"));
  EXPECT_EQ(v["anticommuting_pair"], Json::parse("[0, 0]"));
}

TEST_F(CliTest, ValidateIntraLayerViolation) {
  const auto f = write("c.json", R"({"n_qubits": 2, "layers": [["ZI", "XI"]], "parameters": [0, 0]})");
  EXPECT_EQ(cli({"validate", f}).code, 1);
}

TEST_F(CliTest, MalformedInputsExitTwo) {
  EXPECT_EQ(cli({"validate", write("bad.json", "{not json")}).code, 2);
  EXPECT_EQ(cli({"validate", path("missing.json")}).code, 2);
  EXPECT_EQ(cli({"validate", write("lbl.json", R"({"n_qubits": 1, "layers": [["Q"]], "parameters": [0]})")}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"qfim", kSample + "/example_ansatz_n2.json", "--mode", "bogus"}).code, 2);
  EXPECT_EQ(cli({"qfim", kSample + "/example_ansatz_n2.json", "--mode", "protocol-exact", "--shots", "10"}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("variance-sweep"), std::string::npos);
}

TEST_F(CliTest, ProtocolExactMatchesOracle) {
  const std::string c = kSample + "/example_ansatz_n2.json";
  ASSERT_EQ(cli({"qfim", c, "--mode", "exact-oracle", "--out", path("o.json")}).code, 0);
  ASSERT_EQ(cli({"qfim", c, "--mode", "protocol-exact", "--out", path("p.json")}).code, 0);
  const auto r = cli({"compare", path("o.json"), path("p.json"), "--tol", "1e-9"});
  EXPECT_EQ(r.code, 0) << r.out;
  const Json p = read_json_file(path("p.json"));
  EXPECT_EQ(p["ledger"]["n_preparations"], 3);
  EXPECT_EQ(p["ledger"]["qubit_counts"], Json::parse("[2, 2, 3]"));
  EXPECT_EQ(p["results"]["provenance"].size(), 6u);
  EXPECT_EQ(p["seed"], 0);
  EXPECT_NE(cli({"qfim", c}).err.find("seed: 0 (default)"), std::string::npos);
}

TEST_F(CliTest, IdenticalReportsCompareToZero) {
  const std::string c = kSample + "/example_ansatz_n2.json";
  ASSERT_EQ(cli({"qfim", c, "--mode", "protocol-shots", "100", "--seed", "5", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(cli({"compare", path("a.json"), path("a.json"), "--out", path("cmp.json")}).code, 0);
  EXPECT_EQ(read_json_file(path("cmp.json"))["results"]["max_abs_diff"], 0.0);
}

TEST_F(CliTest, ShotReportsAreReproducible) {
  const std::string c = kSample + "/example_ansatz_n2.json";
  ASSERT_EQ(cli({"qfim", c, "--mode", "protocol-shots", "200", "--seed", "9", "--out", path("a.json")}).code, 0);
  setenv("QFIM_CBC_THREADS", "3", 1);
  ASSERT_EQ(cli({"qfim", c, "--mode", "protocol-shots", "--shots", "200", "--seed", "9", "--out", path("b.json")}).code, 0);
  EXPECT_EQ(cli::payload(read_json_file(path("a.json"))).dump(), cli::payload(read_json_file(path("b.json"))).dump());
}

TEST_F(CliTest, ShotNoiseFailsTightTolerance) {
  const std::string c = kSample + "/example_ansatz_n2.json";
  ASSERT_EQ(cli({"qfim", c, "--mode", "exact-oracle", "--out", path("o.json")}).code, 0);
  ASSERT_EQ(cli({"qfim", c, "--mode", "protocol-shots", "100", "--out", path("s.json")}).code, 0);
  EXPECT_EQ(cli({"compare", path("o.json"), path("s.json"), "--tol", "1e-9"}).code, 1);
}

TEST_F(CliTest, CompareRefusesDifferentCircuits) {
  ASSERT_EQ(cli({"qfim", kSample + "/example_ansatz_n2.json", "--out", path("a.json")}).code, 0);
  const auto other = write("c.json", R"({"n_qubits": 2, "initial_state": "plus", "layers": [["ZI", "IZ"], ["XX"]],
                                         "parameters": [0.3, 0.7, 0.6]})");
  ASSERT_EQ(cli({"qfim", other, "--out", path("b.json")}).code, 0);
  EXPECT_EQ(cli({"compare", path("a.json"), path("b.json")}).code, 2);
  EXPECT_EQ(cli({"compare", path("a.json"), kSample + "/example_ansatz_n2.json"}).code, 2);
}

TEST_F(CliTest, VarianceSweepGuards) {
  const std::string c = kSample + "/example_ansatz_n2.json";
  const auto r = cli({"variance-sweep", c, "--reps", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("at least 20"), std::string::npos);
  EXPECT_EQ(cli({"variance-sweep", c, "--shots-list", "100"}).code, 2);
  EXPECT_EQ(cli({"variance-sweep", c, "--shots-list", "1,10,100"}).code, 2);
}

TEST_F(CliTest, VarianceSweepReport) {
  const std::string c = kSample + "/example_ansatz_n2.json";
  const auto r = cli({"variance-sweep", c, "--shots-list", "50,200,800", "--reps", "60", "--seed", "3", "--out",
                      path("v.json")});
  EXPECT_TRUE(r.code == 0 || r.code == 1);
  const Json v = read_json_file(path("v.json"));
  EXPECT_EQ(v["results"]["per_shot_count"].size(), 3u);
  EXPECT_EQ(v["results"]["pass"].get<bool>(), r.code == 0);
  EXPECT_EQ(v["ledger"]["total_shots"], (50 + 200 + 800) * 3 * 60);
}

TEST_F(CliTest, QngRunZeroIterations) {
  const auto cfg = write("cfg.json", R"({"max_iters": 0})");
  const auto r = cli({"qng-run", kSample + "/tfim3_ansatz.json", kSample + "/tfim3_hamiltonian.json", "--config", cfg,
                      "--out", path("t.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("reference ground energy"), std::string::npos);
  const Json t = read_json_file(path("t.json"));
  EXPECT_EQ(t["results"]["trajectory"].size(), 1u);
  EXPECT_NEAR(t["results"]["reference_energy"].get<double>(), -3.4939592074349357, 1e-10);
}

TEST_F(CliTest, QngRunHamiltonianMismatch) {
  EXPECT_EQ(cli({"qng-run", kSample + "/example_ansatz_n2.json", kSample + "/tfim3_hamiltonian.json"}).code, 2);
}

TEST_F(CliTest, BadThreadVariable) {
  setenv("QFIM_CBC_THREADS", "many", 1);
  EXPECT_EQ(cli({"qfim", kSample + "/example_ansatz_n2.json"}).code, 2);
}

TEST(LogLogSlope, RecoversPowerLaw) {
  EXPECT_NEAR(cli::log_log_slope({1, 10, 100}, {3, 0.3, 0.03}), -1.0, 1e-12);
  EXPECT_THROW(cli::log_log_slope({1}, {1}), PreconditionError);
}

}  // namespace
}  // namespace cbqfim
