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

#include "rappor/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <system_error>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "rappor/candidate_map.h"
#include "rappor/counts.h"
#include "rappor/csv.h"
#include "rappor/hashing.h"
#include "rappor/status.h"

namespace rappor {
namespace {

namespace fs = std::filesystem;

constexpr char kComparisonHeader[] =
    "string,true_count,estimate,detected,accurate80";

absl::Status FsError(const std::string& what, const std::error_code& ec) {
  return MakeError(ErrorKind::kIo, absl::StrCat(what, ": ", ec.message()));
}

std::string FormatOptional(const std::optional<double>& value) {
  return value ? FormatDouble(*value) : "NA";
}

// Writes every scenario file into `dir`.
absl::Status WriteScenarioFiles(const ScenarioResult& result,
                                const Dataset& data,
                                std::span<const Report> reports,
                                const CountsMatrix& counts,
                                const CandidateMap& map,
                                const std::string& dir) {
  const ScenarioSpec& spec = result.spec;
  const auto path = [&](const char* name) {
    return (fs::path(dir) / name).string();
  };
  RAPPOR_RETURN_IF_ERROR(
      WriteParamsCsv(result.effective_params, path("params.csv")));
  RAPPOR_RETURN_IF_ERROR(
      WriteTrueValuesCsv(reports, data.records, path("true_values.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteReportsCsv(reports, path("reports.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteCountsCsv(counts, path("counts.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteMapCsv(map, path("map.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteResultsCsv(result.decoded, path("results.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteTextFile(path("comparison.csv"),
                                       FormatComparisonCsv(result.comparison)));
  RAPPOR_RETURN_IF_ERROR(
      WriteTextFile(path("metrics.csv"), FormatMetricsCsv(result)));
  if (spec.write_secrets) {
    RAPPOR_RETURN_IF_ERROR(WriteSecretsCsv(
        data.records, DeriveSeed(spec.seed, "encoder"), path("secrets.csv")));
  }
  return absl::OkStatus();
}

absl::Status PublishScenario(const ScenarioResult& result, const Dataset& data,
                             std::span<const Report> reports,
                             const CountsMatrix& counts,
                             const CandidateMap& map) {
  const fs::path final_dir(result.spec.output_dir);
  const fs::path temp_dir = final_dir.string() + ".partial";
  std::error_code ec;
  fs::remove_all(temp_dir, ec);
  fs::create_directories(temp_dir, ec);
  if (ec) return FsError(temp_dir.string(), ec);
  absl::Status status =
      WriteScenarioFiles(result, data, reports, counts, map, temp_dir.string());
  if (status.ok()) {
    fs::remove_all(final_dir, ec);
    if (!ec) fs::rename(temp_dir, final_dir, ec);
    if (ec) status = FsError(final_dir.string(), ec);
  }
  if (!status.ok()) fs::remove_all(temp_dir, ec);
  return status;
}

}  // namespace

absl::StatusOr<std::shared_ptr<const LoadedSource>> LoadSource(
    const DatasetSpec& spec) {
  if (spec.synthetic()) {
    return MakeError(ErrorKind::kInvalidParams, "no dataset path");
  }
  auto source = std::make_shared<LoadedSource>();
  RAPPOR_ASSIGN_OR_RETURN(source->dataset,
                          IngestCsv(spec.path, spec.client_column,
                                    spec.value_column, spec.has_header));
  if (!spec.uniques_path.empty()) {
    RAPPOR_ASSIGN_OR_RETURN(source->candidates,
                            LoadCandidates(spec.uniques_path));
  } else {
    std::set<std::string> distinct;
    for (const Record& r : source->dataset.records) distinct.insert(r.value);
    source->candidates.assign(distinct.begin(), distinct.end());
  }
  return std::shared_ptr<const LoadedSource>(std::move(source));
}

bool WithinMargin(int64_t true_count, double estimate, double margin) {
  const double truth = static_cast<double>(true_count);
  return std::abs(estimate - truth) <= margin * truth;
}

std::vector<ComparisonRow> BuildComparison(const DecodedDistribution& decoded,
                                           const TrueHistogram& truth,
                                           double margin) {
  std::vector<CandidateEstimate> rows = decoded.estimates;
  std::set<std::string> listed;
  for (const CandidateEstimate& e : rows) listed.insert(e.candidate);
  for (const auto& [value, count] : truth.counts) {
    if (!listed.count(value)) rows.push_back({value, 0.0, 0.0, false});
  }
  std::vector<ComparisonRow> out;
  out.reserve(rows.size());
  for (const CandidateEstimate& e : SortedByEstimate(std::move(rows))) {
    const auto it = truth.counts.find(e.candidate);
    const int64_t true_count = it == truth.counts.end() ? 0 : it->second;
    out.push_back({e.candidate, true_count, e.estimate, e.detected,
                   e.detected && WithinMargin(true_count, e.estimate, margin)});
  }
  return out;
}

Metrics Evaluate(std::span<const ComparisonRow> rows) {
  Metrics metrics;
  for (const ComparisonRow& row : rows) {
    if (row.true_count > 0) ++metrics.true_strings;
    if (row.detected) ++metrics.rappor_strings;
    if (row.detected && row.accurate) ++metrics.accurate80;
  }
  if (metrics.rappor_strings > 0) {
    metrics.proportion = static_cast<double>(metrics.accurate80) /
                         static_cast<double>(metrics.rappor_strings);
  }
  return metrics;
}

std::string ScenarioDirName(int64_t population, const std::string& label,
                            uint64_t seed) {
  return absl::StrCat("N", population, "_eps", label, "_seed", seed);
}

absl::StatusOr<ScenarioResult> RunScenario(const ScenarioSpec& spec) {
  if (!(spec.margin > 0 && spec.margin < 1)) {
    return MakeError(ErrorKind::kInvalidParams, "margin must be in (0,1)");
  }
  if (spec.population < 1) {
    return MakeError(ErrorKind::kInvalidParams, "population must be >= 1");
  }
  RAPPOR_RETURN_IF_ERROR(Validate(spec.params).status());
  RAPPOR_RETURN_IF_ERROR(CheckModeConstraints(spec.params, spec.mode));

  ScenarioResult result;
  result.spec = spec;
  result.population = spec.population;
  result.effective_params = EffectiveParams(spec.params, spec.mode);
  const RapporParams& effective = result.effective_params;
  auto epsilon = EpsilonOne(effective);
  result.epsilon =
      epsilon.ok() ? *epsilon : std::numeric_limits<double>::infinity();
  if (result.spec.epsilon_label.empty()) {
    result.spec.epsilon_label = FormatDouble(result.epsilon);
  }

  Dataset data;
  std::vector<std::string> candidates;
  if (spec.dataset.synthetic()) {
    RAPPOR_ASSIGN_OR_RETURN(
        SyntheticPopulation population,
        SynthZipf(spec.dataset.num_candidates, spec.population,
                  spec.dataset.zipf_exponent,
                  DeriveSeed(spec.seed, "dataset")));
    data = std::move(population.dataset);
    candidates = std::move(population.candidates);
  } else {
    if (spec.source == nullptr) {
      return MakeError(ErrorKind::kInvalidParams, "dataset not loaded");
    }
    RAPPOR_ASSIGN_OR_RETURN(
        data, Subsample(spec.source->dataset, spec.population,
                        spec.dataset.reports_per_user,
                        DeriveSeed(spec.seed, "subsample")));
    candidates = spec.source->candidates;
  }
  const TrueHistogram truth = ComputeTrueHistogram(data);

  BatchOptions batch;
  batch.retain_audit = spec.retain_audit && !spec.output_dir.empty();
  batch.threads = spec.threads;
  RAPPOR_ASSIGN_OR_RETURN(
      std::vector<Report> reports,
      EncodeRecords(data.records, spec.params, spec.mode,
                    DeriveSeed(spec.seed, "encoder"), batch));
  RAPPOR_ASSIGN_OR_RETURN(CountsMatrix counts,
                          Accumulate(reports, effective, spec.threads));
  RAPPOR_ASSIGN_OR_RETURN(CandidateMap map,
                          BuildMap(candidates, effective, spec.threads));
  DecodeConfig decode = spec.decode;
  decode.threads = spec.threads;
  RAPPOR_ASSIGN_OR_RETURN(result.decoded,
                          Decode(counts, map, effective, decode));

  result.comparison = BuildComparison(result.decoded, truth, spec.margin);
  result.metrics = Evaluate(result.comparison);

  if (!spec.output_dir.empty()) {
    RAPPOR_RETURN_IF_ERROR(PublishScenario(result, data, reports, counts, map));
  }
  return result;
}

std::string FormatComparisonCsv(std::span<const ComparisonRow> rows) {
  std::string content = absl::StrCat(kComparisonHeader, "\n");
  for (const ComparisonRow& row : rows) {
    absl::StrAppend(&content, row.candidate, ",", row.true_count, ",",
                    FormatDouble(row.estimate), ",",
                    std::string(FormatBool(row.detected)), ",",
                    std::string(FormatBool(row.accurate)), "\n");
  }
  return content;
}

absl::StatusOr<std::vector<ComparisonRow>> ParseComparisonLines(
    const std::vector<std::string>& lines) {
  if (lines.empty() || lines[0] != kComparisonHeader) {
    return MakeError(ErrorKind::kMalformedRow, "line 1: bad comparison header");
  }
  std::vector<ComparisonRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = SplitFields(lines[i]);
    if (fields.size() != 5 || fields[0].empty()) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d", i + 1));
    }
    const auto true_count = ParseInt64(fields[1]);
    const auto estimate = ParseDouble(fields[2]);
    const auto detected = ParseBool(fields[3]);
    const auto accurate = ParseBool(fields[4]);
    if (!true_count || !estimate || !detected || !accurate) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d", i + 1));
    }
    rows.push_back({std::string(fields[0]), *true_count, *estimate, *detected,
                    *accurate});
  }
  return rows;
}

absl::StatusOr<std::vector<ComparisonRow>> ReadComparisonCsv(
    const std::string& path) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  return ParseComparisonLines(lines);
}

std::string FormatMetricsCsv(const ScenarioResult& result) {
  const Metrics& m = result.metrics;
  return absl::StrCat(
      "population,epsilon,true_strings,rappor_strings,accurate80,proportion,"
      "seed\n",
      result.population, ",", result.spec.epsilon_label, ",", m.true_strings,
      ",", m.rappor_strings, ",", m.accurate80, ",",
      FormatOptional(m.proportion), ",", result.spec.seed, "\n");
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

absl::StatusOr<GridResult> RunGrid(const GridSpec& spec) {
  if (spec.populations.empty() || spec.epsilons.empty() ||
      spec.seeds.empty()) {
    return MakeError(ErrorKind::kInvalidParams,
                     "grid needs populations, epsilons and seeds");
  }
  std::shared_ptr<const LoadedSource> source;
  if (!spec.dataset.synthetic()) {
    RAPPOR_ASSIGN_OR_RETURN(source, LoadSource(spec.dataset));
  }

  std::vector<ScenarioSpec> cells;
  for (int64_t population : spec.populations) {
    for (const EpsilonSetting& eps : spec.epsilons) {
      for (uint64_t seed : spec.seeds) {
        ScenarioSpec cell;
        cell.dataset = spec.dataset;
        cell.source = source;
        cell.population = population;
        cell.params = eps.params;
        cell.epsilon_label = eps.label;
        cell.mode = spec.mode;
        cell.seed = seed;
        cell.decode = spec.decode;
        cell.margin = spec.margin;
        cell.write_secrets = spec.write_secrets;
        cell.retain_audit = spec.retain_audit;
        if (!spec.output_dir.empty()) {
          cell.output_dir = (fs::path(spec.output_dir) /
                             ScenarioDirName(population, eps.label, seed))
                                .string();
        }
        cells.push_back(std::move(cell));
      }
    }
  }

  const int threads = std::max(spec.threads, 1);
  const size_t workers = std::min(cells.size(), static_cast<size_t>(threads));
  const int inner_threads =
      cells.size() >= static_cast<size_t>(threads) ? 1 : threads;
  for (ScenarioSpec& cell : cells) cell.threads = inner_threads;

  std::vector<std::optional<absl::StatusOr<ScenarioResult>>> slots(
      cells.size());
  {
    std::atomic<size_t> next{0};
    const auto work = [&] {
      for (size_t i = next++; i < cells.size(); i = next++) {
        slots[i] = RunScenario(cells[i]);
      }
    };
    std::vector<std::jthread> pool;
    for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  GridResult grid;
  size_t index = 0;
  for (int64_t population : spec.populations) {
    for (const EpsilonSetting& eps : spec.epsilons) {
      SummaryRow row;
      row.population = population;
      row.epsilon = eps.label;
      std::vector<double> true_strings, rappor_strings, accurate80, proportion;
      for (uint64_t seed : spec.seeds) {
        absl::StatusOr<ScenarioResult>& outcome = *slots[index++];
        if (outcome.ok()) {
          const Metrics& m = outcome->metrics;
          true_strings.push_back(static_cast<double>(m.true_strings));
          rappor_strings.push_back(static_cast<double>(m.rappor_strings));
          accurate80.push_back(static_cast<double>(m.accurate80));
          if (m.proportion) proportion.push_back(*m.proportion);
          row.seeds.push_back(seed);
        } else {
          grid.failures.push_back({population, eps.label, seed,
                                   std::string(outcome.status().message())});
        }
        grid.scenarios.push_back(std::move(outcome));
      }
      row.true_strings = Median(true_strings);
      row.rappor_strings = Median(rappor_strings);
      row.accurate80 = Median(accurate80);
      if (!proportion.empty()) row.proportion = Median(proportion);
      grid.summary.push_back(std::move(row));
    }
  }

  if (!spec.output_dir.empty()) {
    const fs::path out(spec.output_dir);
    std::string failures = "population,epsilon,seed,error\n";
    for (const CellFailure& f : grid.failures) {
      absl::StrAppend(&failures, f.population, ",", f.epsilon, ",", f.seed,
                      ",", absl::StrReplaceAll(f.error, {{",", ";"}, {"\n", " "}}),
                      "\n");
    }
    RAPPOR_RETURN_IF_ERROR(WriteTextFile((out / "summary.csv").string(),
                                         FormatSummaryCsv(grid.summary)));
    RAPPOR_RETURN_IF_ERROR(
        WriteTextFile((out / "plot.csv").string(),
                      FormatPlotCsv(ExportPlotData(grid.summary))));
    RAPPOR_RETURN_IF_ERROR(
        WriteTextFile((out / "drops.csv").string(),
                      FormatDropsCsv(ComputeDrops(grid.summary))));
    RAPPOR_RETURN_IF_ERROR(
        WriteTextFile((out / "failures.csv").string(), failures));
  }
  return grid;
}

std::string FormatSummaryCsv(std::span<const SummaryRow> rows) {
  std::string content =
      "population,epsilon,true_strings,rappor_strings,accurate80,proportion,"
      "seeds\n";
  for (const SummaryRow& row : rows) {
    const bool any = !row.seeds.empty();
    const auto cell = [any](double v) {
      return any ? FormatDouble(v) : std::string("NA");
    };
    absl::StrAppend(&content, row.population, ",", row.epsilon, ",",
                    cell(row.true_strings), ",", cell(row.rappor_strings), ",",
                    cell(row.accurate80), ",", FormatOptional(row.proportion),
                    ",", absl::StrJoin(row.seeds, ";"), "\n");
  }
  return content;
}

std::vector<PlotPoint> ExportPlotData(std::span<const SummaryRow> rows) {
  std::vector<PlotPoint> points;
  for (const SummaryRow& row : rows) {
    if (row.seeds.empty()) continue;
    const double normalized =
        row.true_strings > 0 ? row.accurate80 / row.true_strings : 0.0;
    points.push_back({row.population, row.epsilon, normalized});
  }
  return points;
}

std::string FormatPlotCsv(std::span<const PlotPoint> points) {
  std::string content = "population,epsilon,normalized_accurate80\n";
  for (const PlotPoint& p : points) {
    absl::StrAppend(&content, p.population, ",", p.epsilon, ",",
                    FormatDouble(p.normalized_accurate80), "\n");
  }
  return content;
}

std::vector<DropRow> ComputeDrops(std::span<const SummaryRow> rows) {
  std::vector<DropRow> drops;
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    const SummaryRow& from = rows[i];
    const SummaryRow& to = rows[i + 1];
    if (from.population != to.population || from.seeds.empty() ||
        to.seeds.empty()) {
      continue;
    }
    DropRow drop;
    drop.population = from.population;
    drop.epsilon_from = from.epsilon;
    drop.epsilon_to = to.epsilon;
    drop.raw_drop = from.accurate80 - to.accurate80;
    const double norm_from =
        from.true_strings > 0 ? from.accurate80 / from.true_strings : 0.0;
    const double norm_to =
        to.true_strings > 0 ? to.accurate80 / to.true_strings : 0.0;
    drop.normalized_drop = norm_from - norm_to;
    if (to.accurate80 > 0) drop.ratio = from.accurate80 / to.accurate80;
    drops.push_back(std::move(drop));
  }
  return drops;
}

std::string FormatDropsCsv(std::span<const DropRow> rows) {
  std::string content =
      "population,epsilon_from,epsilon_to,raw_drop,normalized_drop,ratio\n";
  for (const DropRow& d : rows) {
    absl::StrAppend(&content, d.population, ",", d.epsilon_from, ",",
                    d.epsilon_to, ",", FormatDouble(d.raw_drop), ",",
                    FormatDouble(d.normalized_drop), ",",
                    FormatOptional(d.ratio), "\n");
  }
  return content;
}

}  // namespace rappor
