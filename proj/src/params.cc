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

#include "rappor/params.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rappor/csv.h"
#include "rappor/status.h"

namespace rappor {
namespace {

absl::Status InvalidParams(std::string_view field, std::string_view reason) {
  return MakeError(ErrorKind::kInvalidParams,
                   std::string(field) + ": " + std::string(reason));
}

bool IsProbability(double x) { return x >= 0.0 && x <= 1.0; }

// Axis values min, min+step, ..., <= max. Rounded to 12 decimals so that a
// step of 0.01 yields 0.9 rather than 0.9000000000000001.
std::vector<double> AxisValues(double min, double max, double step) {
  std::vector<double> values;
  const auto count =
      static_cast<int64_t>(std::floor((max - min) / step + 1e-9)) + 1;
  values.reserve(static_cast<size_t>(std::max<int64_t>(count, 0)));
  for (int64_t i = 0; i < count; ++i) {
    const double v = min + static_cast<double>(i) * step;
    values.push_back(std::round(v * 1e12) / 1e12);
  }
  return values;
}

}  // namespace

absl::StatusOr<RapporParams> Validate(const RapporParams& params,
                                      const ValidationOptions& options) {
  if (params.k < 1) return InvalidParams("k", "must be positive");
  if (options.require_power_of_two_k &&
      !std::has_single_bit(static_cast<unsigned>(params.k))) {
    return InvalidParams("k", "must be a power of two");
  }
  if (params.h < 1) return InvalidParams("h", "must be positive");
  if (params.h > params.k) return InvalidParams("h", "must not exceed k");
  if (params.m < 1) return InvalidParams("m", "must be positive");
  if (!IsProbability(params.f)) return InvalidParams("f", "must be in [0,1]");
  if (!IsProbability(params.p)) return InvalidParams("p", "must be in [0,1]");
  if (!IsProbability(params.q)) return InvalidParams("q", "must be in [0,1]");
  if (params.q <= params.p) return InvalidParams("q", "q must exceed p");
  return params;
}

EffectiveProbabilities ComputeEffectiveProbabilities(
    const RapporParams& params) {
  const double shared = 0.5 * params.f * (params.p + params.q);
  return {
      .p_star = shared + (1.0 - params.f) * params.p,
      .q_star = shared + (1.0 - params.f) * params.q,
  };
}

absl::StatusOr<double> EpsilonOne(const RapporParams& params) {
  const auto [p_star, q_star] = ComputeEffectiveProbabilities(params);
  if (p_star <= 0.0 || q_star >= 1.0) {
    return MakeError(ErrorKind::kDegenerateNoise,
                     absl::StrFormat("eps_1 unbounded (p*=%g, q*=%g)", p_star,
                                     q_star));
  }
  return params.h *
         std::log((q_star * (1.0 - p_star)) / (p_star * (1.0 - q_star)));
}

absl::StatusOr<double> EpsilonInfinity(const RapporParams& params) {
  if (params.f <= 0.0) {
    return MakeError(ErrorKind::kDegenerateNoise, "eps_inf unbounded (f=0)");
  }
  const double half_f = 0.5 * params.f;
  return 2.0 * params.h * std::log((1.0 - half_f) / half_f);
}

PrivacyProfile ComputePrivacyProfile(const RapporParams& params) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto probs = ComputeEffectiveProbabilities(params);
  auto eps_one = EpsilonOne(params);
  auto eps_inf = EpsilonInfinity(params);
  return {
      .p_star = probs.p_star,
      .q_star = probs.q_star,
      .epsilon_one = eps_one.ok() ? *eps_one : kInf,
      .epsilon_infinity = eps_inf.ok() ? *eps_inf : kInf,
  };
}

absl::StatusOr<std::vector<ParamMatch>> FindParams(double target_epsilon,
                                                   const ParamGrid& grid,
                                                   double tolerance) {
  if (!(target_epsilon > 0)) {
    return InvalidParams("target_epsilon", "must be positive");
  }
  if (!(grid.f_step > 0) || !(grid.p_step > 0) || !(grid.q_step > 0)) {
    return InvalidParams("grid", "steps must be positive");
  }
  if (!(tolerance >= 0)) {
    return InvalidParams("tolerance", "must be non-negative");
  }

  const auto fs = AxisValues(grid.f_min, grid.f_max, grid.f_step);
  const auto ps = AxisValues(grid.p_min, grid.p_max, grid.p_step);
  const auto qs = AxisValues(grid.q_min, grid.q_max, grid.q_step);

  std::vector<ParamMatch> matches;
  for (double f : fs) {
    for (double p : ps) {
      for (double q : qs) {
        if (q <= p) continue;
        const RapporParams candidate{
            .k = grid.k, .h = grid.h, .m = grid.m, .f = f, .p = p, .q = q};
        if (!Validate(candidate).ok()) continue;
        auto eps = EpsilonOne(candidate);
        if (!eps.ok()) continue;
        if (std::abs(*eps - target_epsilon) <= tolerance) {
          matches.push_back({candidate, *eps});
        }
      }
    }
  }
  if (matches.empty()) {
    return MakeError(ErrorKind::kNoMatch,
                     absl::StrFormat("no grid point within %g of eps=%g",
                                     tolerance, target_epsilon));
  }
  std::stable_sort(matches.begin(), matches.end(),
                   [target_epsilon](const ParamMatch& a, const ParamMatch& b) {
                     const double da = std::abs(a.epsilon - target_epsilon);
                     const double db = std::abs(b.epsilon - target_epsilon);
                     return std::tie(da, a.params.f, a.params.p, a.params.q) <
                            std::tie(db, b.params.f, b.params.p, b.params.q);
                   });
  return matches;
}

std::string FormatParamsCsv(const RapporParams& params) {
  return absl::StrCat("k,h,m,p,q,f\n", params.k, ",", params.h, ",", params.m,
                      ",", FormatDouble(params.p), ",", FormatDouble(params.q),
                      ",", FormatDouble(params.f), "\n");
}

absl::StatusOr<RapporParams> ParseParamsCsv(const std::string& content) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty() || lines[0] != "k,h,m,p,q,f") {
    return MakeError(ErrorKind::kMalformedRow,
                     "line 1: expected header k,h,m,p,q,f");
  }
  if (lines.size() != 2) {
    return MakeError(ErrorKind::kMalformedRow,
                     "params.csv must hold exactly one data row");
  }
  const auto fields = SplitFields(lines[1]);
  if (fields.size() != 6) {
    return MakeError(ErrorKind::kMalformedRow, "line 2: expected 6 fields");
  }
  auto k = ParseInt64(fields[0]);
  auto h = ParseInt64(fields[1]);
  auto m = ParseInt64(fields[2]);
  auto p = ParseDouble(fields[3]);
  auto q = ParseDouble(fields[4]);
  auto f = ParseDouble(fields[5]);
  if (!k || !h || !m || !p || !q || !f) {
    return MakeError(ErrorKind::kMalformedRow, "line 2: unparsable value");
  }
  return RapporParams{.k = static_cast<int>(*k),
                      .h = static_cast<int>(*h),
                      .m = static_cast<int>(*m),
                      .f = *f,
                      .p = *p,
                      .q = *q};
}

absl::Status WriteParamsCsv(const RapporParams& params,
                            const std::string& path) {
  return WriteTextFile(path, FormatParamsCsv(params));
}

absl::StatusOr<RapporParams> ReadParamsCsv(const std::string& path) {
  auto lines = ReadLines(path);
  if (!lines.ok()) return lines.status();
  std::string content;
  for (const auto& line : *lines) absl::StrAppend(&content, line, "\n");
  return ParseParamsCsv(content);
}

}  // namespace rappor
