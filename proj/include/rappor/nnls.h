// Copyright 2026 The Rapporkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAPPOR_NNLS_H_
#define RAPPOR_NNLS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace rappor {

// Sparse 0/1 matrix stored by column: columns[s] lists the rows holding a 1,
// sorted and without repeats.
struct BinaryDesign {
  int64_t num_rows = 0;
  std::vector<std::vector<int64_t>> columns;

  int num_columns() const { return static_cast<int>(columns.size()); }
};

// X^T X for a binary design; entry (s,t) is the number of shared rows.
Eigen::MatrixXd GramMatrix(const BinaryDesign& design);

// X^T y.
Eigen::VectorXd TransposeTimes(const BinaryDesign& design,
                               std::span<const double> y);

// X beta.
Eigen::VectorXd DesignTimes(const BinaryDesign& design,
                            const Eigen::VectorXd& beta);

struct NnlsOptions {
  // KKT tolerance, relative to ||y||.
  double tolerance = 1e-8;
  // Outer iterations allowed; 0 means 10 * number of columns.
  int max_iterations = 0;
};

struct NnlsSolution {
  Eigen::VectorXd coefficients;
  // Columns with a positive coefficient, ascending.
  std::vector<int> passive_set;
  // X^T (X beta - y).
  Eigen::VectorXd gradient;
  double residual_sum_squares = 0;
  int iterations = 0;
};

// Lawson-Hanson active set method for min ||X beta - y|| subject to
// beta >= 0, run on the normal equations. Entering columns are the most
// violated ones, ties broken by lowest index, so the result is deterministic.
// MaxIterations if the outer loop does not settle in time.
absl::StatusOr<NnlsSolution> SolveNnls(const BinaryDesign& design,
                                       std::span<const double> y,
                                       const NnlsOptions& options = {});

// Same method given G = X^T X, b = X^T y and ||y||. The residual sum of
// squares is then computed as y'y - 2 b'beta + beta'G beta.
absl::StatusOr<NnlsSolution> SolveNnlsNormal(const Eigen::MatrixXd& gram,
                                             const Eigen::VectorXd& xty,
                                             double y_norm,
                                             const NnlsOptions& options = {});

// Largest violation of the KKT conditions, scaled by ||y||:
//   beta_s > 0  =>  |g_s| <= tol * ||y||
//   beta_s = 0  =>   g_s  >= -tol * ||y||
// Returns 0 when every condition holds exactly.
double KktViolation(const Eigen::VectorXd& beta, const Eigen::VectorXd& gradient,
                    double y_norm);

bool SatisfiesKkt(const NnlsSolution& solution, double y_norm,
                  double tolerance = 1e-8);

}  // namespace rappor

#endif  // RAPPOR_NNLS_H_
