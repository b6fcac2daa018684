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

#ifndef RAPPOR_EXPERIMENT_H_
#define RAPPOR_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rappor/datasets.h"
#include "rappor/decoder.h"
#include "rappor/encoder.h"
#include "rappor/params.h"

namespace rappor {

// Where scenario records come from.
struct DatasetSpec {
  // Empty means synthetic Zipf data.
  std::string path;
  int client_column = 1;
  int value_column = 2;
  bool has_header = true;
  int reports_per_user = 1;
  // Candidate list for file data; empty means the distinct values of the
  // whole file, sorted.
  std::string uniques_path;

  int num_candidates = 150;
  double zipf_exponent = 1.2;

  bool synthetic() const { return path.empty(); }
};

// File data loaded once and shared by every scenario of a grid.
struct LoadedSource {
  Dataset dataset;
  std::vector<std::string> candidates;
};

absl::StatusOr<std::shared_ptr<const LoadedSource>> LoadSource(
    const DatasetSpec& spec);

struct ScenarioSpec {
  DatasetSpec dataset;
  // Required for file data; see LoadSource.
  std::shared_ptr<const LoadedSource> source;
  int64_t population = 0;
  RapporParams params;
  // Used in the directory name and in summary rows.
  std::string epsilon_label;
  EncoderMode mode = EncoderMode::kStandard;
  uint64_t seed = 0;
  DecodeConfig decode;
  double margin = 0.2;
  int threads = 1;
  // Empty means nothing is written.
  std::string output_dir;
  bool write_secrets = false;
  // Keep bloom and PRR columns in reports.csv.
  bool retain_audit = true;
};

struct ComparisonRow {
  std::string candidate;
  int64_t true_count = 0;
  double estimate = 0;
  bool detected = false;
  bool accurate = false;

  bool operator==(const ComparisonRow&) const = default;
};

struct Metrics {
  int64_t true_strings = 0;
  int64_t rappor_strings = 0;
  int64_t accurate80 = 0;
  // accurate80 / rappor_strings; empty when nothing was detected.
  std::optional<double> proportion;

  bool operator==(const Metrics&) const = default;
};

struct ScenarioResult {
  ScenarioSpec spec;
  // Params actually used by the encoder and decoder.
  RapporParams effective_params;
  // +inf when the effective params carry no noise.
  double epsilon = 0;
  int64_t population = 0;
  std::vector<ComparisonRow> comparison;
  Metrics metrics;
  DecodedDistribution decoded;
};

// |estimate - true| <= margin * true, boundary included.
bool WithinMargin(int64_t true_count, double estimate, double margin);

// Rows for every candidate plus any true value missing from the candidate
// list, ordered like results.csv.
std::vector<ComparisonRow> BuildComparison(const DecodedDistribution& decoded,
                                           const TrueHistogram& truth,
                                           double margin);

Metrics Evaluate(std::span<const ComparisonRow> rows);

// Runs datasets -> encoder -> aggregate -> decoder -> evaluate. When an
// output directory is set, all files are written to a sibling temporary
// directory that is renamed into place on success and removed on failure.
absl::StatusOr<ScenarioResult> RunScenario(const ScenarioSpec& spec);

// "N<population>_eps<label>_seed<seed>".
std::string ScenarioDirName(int64_t population, const std::string& label,
                            uint64_t seed);

// comparison.csv: header string,true_count,estimate,detected,accurate80.
std::string FormatComparisonCsv(std::span<const ComparisonRow> rows);
absl::StatusOr<std::vector<ComparisonRow>> ParseComparisonLines(
    const std::vector<std::string>& lines);
absl::StatusOr<std::vector<ComparisonRow>> ReadComparisonCsv(
    const std::string& path);

// metrics.csv: header population,epsilon,true_strings,rappor_strings,
// accurate80,proportion,seed.
std::string FormatMetricsCsv(const ScenarioResult& result);

struct EpsilonSetting {
  std::string label;
  RapporParams params;
};

struct GridSpec {
  DatasetSpec dataset;
  std::vector<int64_t> populations;
  std::vector<EpsilonSetting> epsilons;
  std::vector<uint64_t> seeds;
  EncoderMode mode = EncoderMode::kStandard;
  DecodeConfig decode;
  double margin = 0.2;
  std::string output_dir;
  int threads = 1;
  bool write_secrets = false;
  bool retain_audit = true;
};

struct SummaryRow {
  int64_t population = 0;
  std::string epsilon;
  // Medians over the successful seeds.
  double true_strings = 0;
  double rappor_strings = 0;
  double accurate80 = 0;
  // Median of the per-seed proportions that exist.
  std::optional<double> proportion;
  std::vector<uint64_t> seeds;
};

struct CellFailure {
  int64_t population = 0;
  std::string epsilon;
  uint64_t seed = 0;
  std::string error;
};

struct GridResult {
  // Population-major, then epsilon, in configuration order.
  std::vector<SummaryRow> summary;
  std::vector<CellFailure> failures;
  // Every scenario, same order as the summary, seeds innermost. Failed cells
  // hold an error.
  std::vector<absl::StatusOr<ScenarioResult>> scenarios;
};

// Runs every (population, epsilon, seed) cell. Failed cells are recorded and
// skipped. Writes summary.csv, plot.csv, drops.csv and failures.csv when an
// output directory is set.
absl::StatusOr<GridResult> RunGrid(const GridSpec& spec);

double Median(std::vector<double> values);

// summary.csv: header population,epsilon,true_strings,rappor_strings,
// accurate80,proportion,seeds. Missing proportions print as NA; seeds are
// joined with ';'.
std::string FormatSummaryCsv(std::span<const SummaryRow> rows);

struct PlotPoint {
  int64_t population = 0;
  std::string epsilon;
  // accurate80 / true_strings, 0 when there are no true strings.
  double normalized_accurate80 = 0;
};

std::vector<PlotPoint> ExportPlotData(std::span<const SummaryRow> rows);
// plot.csv: header population,epsilon,normalized_accurate80.
std::string FormatPlotCsv(std::span<const PlotPoint> points);

// Change in accurate80 between consecutive epsilons of one population.
struct DropRow {
  int64_t population = 0;
  std::string epsilon_from;
  std::string epsilon_to;
  double raw_drop = 0;
  double normalized_drop = 0;
  // accurate80(from) / accurate80(to); empty when the latter is 0.
  std::optional<double> ratio;
};

std::vector<DropRow> ComputeDrops(std::span<const SummaryRow> rows);
// drops.csv: header population,epsilon_from,epsilon_to,raw_drop,
// normalized_drop,ratio.
std::string FormatDropsCsv(std::span<const DropRow> rows);

}  // namespace rappor

#endif  // RAPPOR_EXPERIMENT_H_
