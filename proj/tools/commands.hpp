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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cbqfim/circuit.hpp"
#include "cbqfim/io.hpp"

namespace cbqfim::cli {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success or pass, 1 validation or tolerance failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VarianceSweep {
  std::vector<std::size_t> shots;
  int reps = 0;
  std::vector<Eigen::MatrixXd> means;      // per shot count
  std::vector<Eigen::MatrixXd> variances;  // sample variance over reps, per shot count
  std::vector<double> total_variance;      // sum over the upper triangle
  Eigen::MatrixXd entry_slopes;            // NaN where some variance is zero
  double aggregate_slope = 0;

  bool passes() const { return aggregate_slope >= -1.15 && aggregate_slope <= -0.85; }
};

/// Repetition r at shot count M uses master seed derive_seed(seed, {M, r}).
VarianceSweep variance_sweep(const CommutingBlockCircuit& circuit,
                             const Eigen::Ref<const Eigen::VectorXd>& theta,
                             const std::vector<std::size_t>& shots, int reps, std::uint64_t seed,
                             unsigned threads);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Report with the wall-clock field removed.
Json payload(Json report);

}  // namespace cbqfim::cli
