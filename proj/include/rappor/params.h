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

#ifndef RAPPOR_PARAMS_H_
#define RAPPOR_PARAMS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace rappor {

// The six mechanism parameters shared by clients and the aggregator.
struct RapporParams {
  int k = 32;      // Bloom filter size in bits.
  int h = 2;       // Hash functions per value.
  int m = 64;      // Cohorts.
  double f = 0.5;  // PRR: probability of replacing a bit with a coin flip.
  double p = 0.5;  // IRR: probability of reporting 1 when the PRR bit is 0.
  double q = 0.75; // IRR: probability of reporting 1 when the PRR bit is 1.

  bool operator==(const RapporParams&) const = default;
};

struct ValidationOptions {
  // Filters used by the reference experiments are sized 2^n. Turning this
  // off admits any k >= 1.
  bool require_power_of_two_k = true;
};

// Returns `params` unchanged when every invariant holds, otherwise an
// InvalidParams error naming the first offending field.
absl::StatusOr<RapporParams> Validate(const RapporParams& params,
                                      const ValidationOptions& options = {});

// End-to-end probabilities of observing a set bit in a report:
//   q* = P(S_i = 1 | B_i = 1) = f(p+q)/2 + (1-f) q
//   p* = P(S_i = 1 | B_i = 0) = f(p+q)/2 + (1-f) p
struct EffectiveProbabilities {
  double p_star = 0;
  double q_star = 0;
};

EffectiveProbabilities ComputeEffectiveProbabilities(
    const RapporParams& params);

// Privacy of a single report, in nats:
//   eps_1 = h * ln( q*(1-p*) / (p*(1-q*)) ).
// DegenerateNoise when p* = 0 or q* = 1, where the bound is infinite.
//
// Reference values with h = 2: (f,p,q) = (0.75,0.5,0.55) -> 0.1003,
// (0.5,0.5,0.75) -> 1.0743, (0.01,0.05,0.9) -> 10.018.
absl::StatusOr<double> EpsilonOne(const RapporParams& params);

// Lifetime privacy of the permanent randomized response:
//   eps_inf = 2h * ln( (1 - f/2) / (f/2) ).
// DegenerateNoise when f = 0.
absl::StatusOr<double> EpsilonInfinity(const RapporParams& params);

// All derived quantities at once; unbounded epsilons are reported as
// +infinity instead of an error.
struct PrivacyProfile {
  double p_star = 0;
  double q_star = 0;
  double epsilon_one = 0;
  double epsilon_infinity = 0;
};

PrivacyProfile ComputePrivacyProfile(const RapporParams& params);

// Grid searched by FindParams. Each axis runs from min to max (inclusive) in
// the given step. k and m are copied into every candidate.
struct ParamGrid {
  double f_step = 0.05;
  double p_step = 0.05;
  double q_step = 0.05;
  int h = 2;
  int k = 32;
  int m = 64;
  double f_min = 0, f_max = 1;
  double p_min = 0, p_max = 1;
  double q_min = 0, q_max = 1;
};

struct ParamMatch {
  RapporParams params;
  double epsilon = 0;
};

// Every valid grid point whose eps_1 lies within `tolerance` of
// `target_epsilon`, closest first; ties go to ascending f, then p, then q.
// NoMatch when nothing qualifies.
absl::StatusOr<std::vector<ParamMatch>> FindParams(double target_epsilon,
                                                   const ParamGrid& grid,
                                                   double tolerance);

// params.csv: header "k,h,m,p,q,f" and one data row.
std::string FormatParamsCsv(const RapporParams& params);
absl::StatusOr<RapporParams> ParseParamsCsv(const std::string& content);
absl::Status WriteParamsCsv(const RapporParams& params,
                            const std::string& path);
absl::StatusOr<RapporParams> ReadParamsCsv(const std::string& path);

}  // namespace rappor

#endif  // RAPPOR_PARAMS_H_
