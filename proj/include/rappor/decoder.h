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

#ifndef RAPPOR_DECODER_H_
#define RAPPOR_DECODER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rappor/candidate_map.h"
#include "rappor/counts.h"
#include "rappor/nnls.h"
#include "rappor/params.h"

namespace rappor {

// Estimated true-bit-set counts, row-major m x k. Values may be negative.
struct DebiasedBitCounts {
  int k = 0;
  int m = 0;
  std::vector<double> y;
  std::vector<int64_t> n;
};

// y[j][i] = (c[j][i] - p* n_j) / (q* - p*). DegenerateNoise if q* == p*.
absl::StatusOr<DebiasedBitCounts> Debias(const CountsMatrix& counts,
                                         const RapporParams& params);

enum class CohortScaling {
  // estimate = m * beta.
  kUniform,
  // estimate = beta * mean over used cohorts of (N / n_j).
  kPerCohortWeighted,
};

struct DecodeConfig {
  // Family-wise significance level, Bonferroni-split over candidates.
  double alpha = 0.05;
  // Cohorts with fewer reports are left out of the fit.
  int64_t min_reports = 1;
  CohortScaling scaling = CohortScaling::kUniform;
  NnlsOptions nnls;
  // Design construction only; the solve is single-threaded.
  int threads = 1;
};

struct CandidateEstimate {
  std::string candidate;
  double estimate = 0;
  // On the same scale as `estimate`; +inf when there are no residual
  // degrees of freedom.
  double std_error = 0;
  bool detected = false;

  bool operator==(const CandidateEstimate&) const = default;
};

struct DecodedDistribution {
  // In candidate-map order.
  std::vector<CandidateEstimate> estimates;
  int64_t total_reports = 0;
  int m = 0;
  int k = 0;

  // Fit diagnostics.
  double z_threshold = 0;
  double residual_variance = 0;
  int64_t degrees_of_freedom = 0;
  int nnls_iterations = 0;
  double y_norm = 0;
  // Scaled KKT violation of the returned coefficients; see KktViolation.
  double kkt_violation = 0;
};

// Debias, NNLS fit against the candidate map, then a one-sided z test per
// candidate: detected iff estimate > z * std_error with
// z = Phi^-1(1 - alpha / (2M)).
// Errors: ShapeMismatch if counts or map disagree with params,
// InvalidParams for a bad config, DegenerateNoise, MaxIterations.
absl::StatusOr<DecodedDistribution> Decode(const CountsMatrix& counts,
                                           const CandidateMap& map,
                                           const RapporParams& params,
                                           const DecodeConfig& config = {});

// Descending estimate, ties by candidate ascending.
std::vector<CandidateEstimate> SortedByEstimate(
    std::vector<CandidateEstimate> estimates);

// results.csv: header string,estimate,std_error,detected; rows in
// SortedByEstimate order.
std::string FormatResultsCsv(const DecodedDistribution& decoded);
absl::Status WriteResultsCsv(const DecodedDistribution& decoded,
                             const std::string& path);
absl::StatusOr<std::vector<CandidateEstimate>> ParseResultsLines(
    const std::vector<std::string>& lines);
absl::StatusOr<std::vector<CandidateEstimate>> ReadResultsCsv(
    const std::string& path);

// "true" / "false".
std::string_view FormatBool(bool value);
std::optional<bool> ParseBool(std::string_view text);

}  // namespace rappor

#endif  // RAPPOR_DECODER_H_
