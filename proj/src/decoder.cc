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

#include "rappor/decoder.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "boost/math/distributions/normal.hpp"
#include "rappor/csv.h"
#include "rappor/parallel.h"
#include "rappor/status.h"

namespace rappor {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Diagonal of G_PP^-1, with a pseudo-inverse when G_PP is singular.
Eigen::VectorXd InverseDiagonal(const Eigen::MatrixXd& gram,
                                const std::vector<int>& indices) {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      sub(a, b) = gram(indices[a], indices[b]);
    }
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() == Eigen::Success) return llt.solve(identity).diagonal();
  return sub.completeOrthogonalDecomposition().solve(identity).diagonal();
}

}  // namespace

absl::StatusOr<DebiasedBitCounts> Debias(const CountsMatrix& counts,
                                         const RapporParams& params) {
  if (counts.k() != params.k || counts.m() != params.m) {
    return MakeError(ErrorKind::kShapeMismatch,
                     absl::StrFormat("counts are %dx%d, params say %dx%d",
                                     counts.m(), counts.k(), params.m,
                                     params.k));
  }
  const EffectiveProbabilities probs = ComputeEffectiveProbabilities(params);
  const double spread = probs.q_star - probs.p_star;
  if (!(spread != 0)) {
    return MakeError(ErrorKind::kDegenerateNoise, "q* equals p*");
  }
  DebiasedBitCounts out;
  out.k = params.k;
  out.m = params.m;
  out.n = counts.report_counts();
  out.y.resize(counts.bit_counts().size());
  for (int j = 0; j < params.m; ++j) {
    const double n = static_cast<double>(counts.report_count(j));
    for (int i = 0; i < params.k; ++i) {
      const double c = static_cast<double>(counts.bit_count(j, i));
      out.y[static_cast<size_t>(j) * params.k + i] =
          (c - probs.p_star * n) / spread;
    }
  }
  return out;
}

absl::StatusOr<DecodedDistribution> Decode(const CountsMatrix& counts,
                                           const CandidateMap& map,
                                           const RapporParams& params,
                                           const DecodeConfig& config) {
  if (!(config.alpha > 0 && config.alpha < 1)) {
    return MakeError(ErrorKind::kInvalidParams, "alpha must be in (0,1)");
  }
  const auto num_candidates = static_cast<int>(map.candidates.size());
  if (num_candidates < 1) {
    return MakeError(ErrorKind::kEmptyCandidateList, "map has no candidates");
  }
  const size_t arity =
      static_cast<size_t>(params.m) * static_cast<size_t>(params.h);
  for (int s = 0; s < num_candidates; ++s) {
    if (map.positions[s].size() != arity) {
      return MakeError(
          ErrorKind::kShapeMismatch,
          absl::StrFormat("map row %d has %d positions, params imply %d",
                          s + 1, map.positions[s].size(), arity));
    }
  }
  RAPPOR_ASSIGN_OR_RETURN(DebiasedBitCounts debiased, Debias(counts, params));

  // Compact row index for each (cohort, bit) kept in the fit, or -1.
  const int64_t k = params.k;
  std::vector<int64_t> row_of(debiased.y.size(), -1);
  std::vector<double> y;
  int used_cohorts = 0;
  double inverse_share_sum = 0;
  const double total = static_cast<double>(counts.total_reports());
  for (int j = 0; j < params.m; ++j) {
    const int64_t n = debiased.n[j];
    if (n < config.min_reports || n == 0) continue;
    ++used_cohorts;
    inverse_share_sum += total / static_cast<double>(n);
    for (int64_t i = 0; i < k; ++i) {
      row_of[j * k + i] = static_cast<int64_t>(y.size());
      y.push_back(debiased.y[j * k + i]);
    }
  }

  BinaryDesign design;
  design.num_rows = static_cast<int64_t>(y.size());
  design.columns.resize(static_cast<size_t>(num_candidates));
  ParallelFor(design.columns.size(), config.threads,
              [&](size_t begin, size_t end) {
                for (size_t s = begin; s < end; ++s) {
                  auto& column = design.columns[s];
                  for (int64_t position : map.positions[s]) {
                    const int64_t index = position - 1;
                    if (index < 0 ||
                        index >= static_cast<int64_t>(row_of.size())) {
                      continue;
                    }
                    if (row_of[index] >= 0) column.push_back(row_of[index]);
                  }
                  std::sort(column.begin(), column.end());
                  column.erase(std::unique(column.begin(), column.end()),
                               column.end());
                }
              });

  double y_norm_sq = 0;
  for (double v : y) y_norm_sq += v * v;
  const double y_norm = std::sqrt(y_norm_sq);
  const Eigen::MatrixXd gram = GramMatrix(design);
  const Eigen::VectorXd xty = TransposeTimes(design, y);
  RAPPOR_ASSIGN_OR_RETURN(NnlsSolution fit,
                          SolveNnlsNormal(gram, xty, y_norm, config.nnls));
  const Eigen::VectorXd fitted = DesignTimes(design, fit.coefficients);
  double rss = 0;
  for (size_t r = 0; r < y.size(); ++r) {
    const double residual = y[r] - fitted(static_cast<Eigen::Index>(r));
    rss += residual * residual;
  }

  const int64_t dof = design.num_rows -
                      static_cast<int64_t>(fit.passive_set.size());
  const double sigma2 = dof > 0 ? rss / static_cast<double>(dof) : kInf;

  double scale = static_cast<double>(params.m);
  if (config.scaling == CohortScaling::kPerCohortWeighted) {
    scale = used_cohorts > 0 ? inverse_share_sum / used_cohorts : 0;
  }

  std::vector<double> se_beta(static_cast<size_t>(num_candidates), kInf);
  if (dof > 0) {
    const Eigen::VectorXd active_diag =
        fit.passive_set.empty() ? Eigen::VectorXd()
                                : InverseDiagonal(gram, fit.passive_set);
    for (size_t a = 0; a < fit.passive_set.size(); ++a) {
      se_beta[fit.passive_set[a]] =
          std::sqrt(sigma2 * std::max(0.0, active_diag(a)));
    }
    for (int s = 0; s < num_candidates; ++s) {
      if (fit.coefficients(s) > 0) continue;
      const double g = gram(s, s);
      se_beta[s] = g > 0 ? std::sqrt(sigma2 / g) : kInf;
    }
  }

  const boost::math::normal standard_normal;
  const double z = boost::math::quantile(
      standard_normal, 1.0 - config.alpha / (2.0 * num_candidates));

  DecodedDistribution out;
  out.total_reports = counts.total_reports();
  out.m = params.m;
  out.k = params.k;
  out.z_threshold = z;
  out.residual_variance = sigma2;
  out.degrees_of_freedom = dof;
  out.nnls_iterations = fit.iterations;
  out.y_norm = y_norm;
  out.kkt_violation = KktViolation(fit.coefficients, fit.gradient, y_norm);
  out.estimates.resize(static_cast<size_t>(num_candidates));
  for (int s = 0; s < num_candidates; ++s) {
    CandidateEstimate& e = out.estimates[s];
    e.candidate = map.candidates[s];
    e.estimate = scale * fit.coefficients(s);
    e.std_error = scale * se_beta[s];
    e.detected = e.estimate > 0 && e.estimate > z * e.std_error;
  }
  return out;
}

std::vector<CandidateEstimate> SortedByEstimate(
    std::vector<CandidateEstimate> estimates) {
  std::sort(estimates.begin(), estimates.end(),
            [](const CandidateEstimate& a, const CandidateEstimate& b) {
              if (a.estimate != b.estimate) return a.estimate > b.estimate;
              return a.candidate < b.candidate;
            });
  return estimates;
}

std::string_view FormatBool(bool value) { return value ? "true" : "false"; }

std::optional<bool> ParseBool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  return std::nullopt;
}

std::string FormatResultsCsv(const DecodedDistribution& decoded) {
  std::string content = "string,estimate,std_error,detected\n";
  for (const CandidateEstimate& e : SortedByEstimate(decoded.estimates)) {
    absl::StrAppend(&content, e.candidate, ",", FormatDouble(e.estimate), ",",
                    FormatDouble(e.std_error), ",",
                    std::string(FormatBool(e.detected)), "\n");
  }
  return content;
}

absl::Status WriteResultsCsv(const DecodedDistribution& decoded,
                             const std::string& path) {
  return WriteTextFile(path, FormatResultsCsv(decoded));
}

absl::StatusOr<std::vector<CandidateEstimate>> ParseResultsLines(
    const std::vector<std::string>& lines) {
  if (lines.empty() || lines[0] != "string,estimate,std_error,detected") {
    return MakeError(ErrorKind::kMalformedRow, "line 1: bad results header");
  }
  std::vector<CandidateEstimate> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = SplitFields(lines[i]);
    const auto estimate = fields.size() == 4 ? ParseDouble(fields[1])
                                             : std::optional<double>();
    const auto std_error = fields.size() == 4 ? ParseDouble(fields[2])
                                              : std::optional<double>();
    const auto detected =
        fields.size() == 4 ? ParseBool(fields[3]) : std::optional<bool>();
    if (!estimate || !std_error || !detected || fields[0].empty()) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d", i + 1));
    }
    out.push_back({std::string(fields[0]), *estimate, *std_error, *detected});
  }
  return out;
}

absl::StatusOr<std::vector<CandidateEstimate>> ReadResultsCsv(
    const std::string& path) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  return ParseResultsLines(lines);
}

}  // namespace rappor
