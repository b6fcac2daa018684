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

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "rappor/candidate_map.h"
#include "rappor/csv.h"
#include "rappor/params.h"
#include "test_util.h"

namespace rappor {
namespace {

namespace fs = std::filesystem;

const RapporParams kEpsPointOne{.k = 32, .h = 2, .m = 64, .f = 0.75, .p = 0.5,
                                .q = 0.55};
const RapporParams kEpsTen{.k = 32, .h = 2, .m = 64, .f = 0.01, .p = 0.05,
                           .q = 0.9};

ScenarioSpec SmallSpec(uint64_t seed) {
  ScenarioSpec spec;
  spec.dataset.num_candidates = 40;
  spec.population = 3000;
  spec.params = kEpsTen;
  spec.epsilon_label = "10";
  spec.seed = seed;
  return spec;
}

// Smallest power-of-two filter that separates the synthetic candidates with
// one hash and one cohort.
RapporParams NoiselessParams(int num_candidates) {
  std::vector<std::string> names;
  for (int i = 1; i <= num_candidates; ++i) {
    names.push_back(SyntheticCandidateName(i));
  }
  for (int k = 1024;; k *= 2) {
    const RapporParams params{.k = k, .h = 1, .m = 1, .f = 0, .p = 0, .q = 1};
    if (IsCollisionFree(*BuildMap(names, params), params)) return params;
  }
}

TEST(EvaluateTest, MarginBoundaryIsInclusive) {
  EXPECT_TRUE(WithinMargin(100, 80, 0.2));
  EXPECT_TRUE(WithinMargin(100, 120, 0.2));
  EXPECT_FALSE(WithinMargin(100, 79.9, 0.2));
  EXPECT_FALSE(WithinMargin(100, 120.1, 0.2));
  EXPECT_FALSE(WithinMargin(0, 1, 0.2));
}

TEST(EvaluateTest, ExactEstimatesAreAllAccurate) {
  DecodedDistribution d;
  d.estimates = {{"a", 10, 1, true}, {"b", 5, 1, true}, {"c", 0, 1, false}};
  TrueHistogram truth;
  truth.counts = {{"a", 10}, {"b", 5}, {"c", 2}};
  const auto rows = BuildComparison(d, truth, 0.2);
  const Metrics m = Evaluate(rows);
  EXPECT_EQ(m.true_strings, 3);
  EXPECT_EQ(m.rappor_strings, 2);
  EXPECT_EQ(m.accurate80, 2);
  EXPECT_EQ(m.proportion, 1.0);
}

TEST(EvaluateTest, ProportionOfDetected) {
  // 14 detections, 7 of them within the margin.
  std::vector<ComparisonRow> rows;
  for (int i = 0; i < 14; ++i) {
    rows.push_back({"s" + std::to_string(i), 100, i < 7 ? 100.0 : 50.0, true,
                    i < 7});
  }
  rows.push_back({"missed", 30, 0, false, false});
  const Metrics m = Evaluate(rows);
  EXPECT_EQ(m.rappor_strings, 14);
  EXPECT_EQ(m.accurate80, 7);
  EXPECT_EQ(m.true_strings, 15);
  ASSERT_TRUE(m.proportion.has_value());
  EXPECT_DOUBLE_EQ(*m.proportion, 0.5);
}

TEST(EvaluateTest, NoDetectionsGiveNoProportion) {
  const std::vector<ComparisonRow> rows = {{"a", 4, 0, false, false}};
  EXPECT_FALSE(Evaluate(rows).proportion.has_value());
}

TEST(BuildComparisonTest, AddsMissingTrueValuesAndSorts) {
  DecodedDistribution d;
  d.estimates = {{"a", 3, 1, false}, {"b", 90, 1, true}};
  TrueHistogram truth;
  truth.counts = {{"b", 100}, {"zz", 7}};
  const auto rows = BuildComparison(d, truth, 0.2);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (ComparisonRow{"b", 100, 90, true, true}));
  EXPECT_EQ(rows[1], (ComparisonRow{"a", 0, 3, false, false}));
  EXPECT_EQ(rows[2], (ComparisonRow{"zz", 7, 0, false, false}));
}

TEST(ComparisonCsvTest, RoundTrip) {
  const std::vector<ComparisonRow> rows = {{"b", 100, 90.5, true, true},
                                           {"a", 0, 0, false, false}};
  EXPECT_EQ(FormatComparisonCsv(rows),
            "string,true_count,estimate,detected,accurate80\n"
            "b,100,90.5,true,true\n"
            "a,0,0,false,false\n");
  testing::ScopedTempDir dir;
  testing::WriteFile(dir.File("c.csv"), FormatComparisonCsv(rows));
  EXPECT_EQ(*ReadComparisonCsv(dir.File("c.csv")), rows);
  EXPECT_ERROR_KIND(ParseComparisonLines({"x"}), ErrorKind::kMalformedRow);
  EXPECT_ERROR_KIND(
      ParseComparisonLines({"string,true_count,estimate,detected,accurate80",
                            "a,1,2,true"}),
      ErrorKind::kMalformedRow);
}

TEST(PlotTest, NormalizesByTrueStrings) {
  std::vector<SummaryRow> rows(3);
  rows[0] = {1200000, "1.0", 143, 60, 24, 0.4, {1}};
  rows[1] = {100000, "0.5", 140, 10, 2, 0.2, {1}};
  rows[2] = {10000, "0.1", 121, 0, 0, std::nullopt, {1}};
  const auto points = ExportPlotData(rows);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_NEAR(points[0].normalized_accurate80, 0.1678, 5e-5);
  EXPECT_NEAR(points[1].normalized_accurate80, 0.0143, 5e-5);
  EXPECT_EQ(points[2].normalized_accurate80, 0);
  EXPECT_EQ(FormatPlotCsv({points.data() + 2, 1}),
            "population,epsilon,normalized_accurate80\n10000,0.1,0\n");
}

TEST(SummaryTest, FormatsMediansAndMissingValues) {
  std::vector<SummaryRow> rows(2);
  rows[0] = {10000, "1", 120, 7, 3.5, 0.5, {1, 2}};
  rows[1] = {10000, "2", 0, 0, 0, std::nullopt, {}};
  EXPECT_EQ(FormatSummaryCsv(rows),
            "population,epsilon,true_strings,rappor_strings,accurate80,"
            "proportion,seeds\n"
            "10000,1,120,7,3.5,0.5,1;2\n"
            "10000,2,NA,NA,NA,NA,\n");
}

TEST(SummaryTest, Median) {
  EXPECT_TRUE(std::isnan(Median({})));
  EXPECT_EQ(Median({3}), 3);
  EXPECT_EQ(Median({5, 1, 3}), 3);
  EXPECT_EQ(Median({4, 1, 3, 2}), 2.5);
}

TEST(DropsTest, ConsecutiveRowsOfOnePopulation) {
  std::vector<SummaryRow> rows(4);
  rows[0] = {1200000, "1.0", 143, 50, 24, 0.5, {1}};
  rows[1] = {1200000, "0.8", 143, 30, 8, 0.3, {1}};
  rows[2] = {1200000, "0.5", 143, 10, 0, 0.0, {1}};
  rows[3] = {100000, "1.0", 140, 10, 5, 0.5, {1}};
  const auto drops = ComputeDrops(rows);
  ASSERT_EQ(drops.size(), 2u);
  EXPECT_EQ(drops[0].raw_drop, 16);
  EXPECT_NEAR(drops[0].normalized_drop, 16.0 / 143, 1e-12);
  EXPECT_EQ(drops[0].ratio, 3.0);
  EXPECT_FALSE(drops[1].ratio.has_value());
  EXPECT_EQ(FormatDropsCsv({drops.data() + 1, 1}),
            "population,epsilon_from,epsilon_to,raw_drop,normalized_drop,"
            "ratio\n1200000,0.8,0.5,8," +
                FormatDouble(8.0 / 143) + ",NA\n");
}

TEST(RunScenarioTest, NoiselessRecoversEverything) {
  ScenarioSpec spec;
  spec.dataset.num_candidates = 150;
  spec.population = 10000;
  spec.params = NoiselessParams(150);
  spec.mode = EncoderMode::kBasicOneTime;
  spec.seed = 1;
  spec.threads = 4;
  auto result = RunScenario(spec);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->spec.epsilon_label, "inf");
  EXPECT_TRUE(std::isinf(result->epsilon));
  EXPECT_GT(result->metrics.true_strings, 0);
  EXPECT_EQ(result->metrics.rappor_strings, result->metrics.true_strings);
  EXPECT_EQ(result->metrics.accurate80, result->metrics.true_strings);
  for (const ComparisonRow& row : result->comparison) {
    EXPECT_NEAR(row.estimate, row.true_count, 1e-6 * std::max<int64_t>(
                                                         1, row.true_count));
  }
  EXPECT_LE(result->decoded.kkt_violation, 1e-8);
}

TEST(RunScenarioTest, HighPrivacySmallPopulationFindsNothingAccurate) {
  int zero_seeds = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioSpec spec;
    spec.population = 10000;
    spec.params = kEpsPointOne;
    spec.seed = seed;
    spec.threads = 4;
    auto result = RunScenario(spec);
    ASSERT_TRUE(result.ok()) << result.status();
    EXPECT_LE(result->decoded.kkt_violation, 1e-8);
    zero_seeds += result->metrics.accurate80 == 0;
  }
  EXPECT_GE(zero_seeds, 4);
}

TEST(RunScenarioTest, WritesAllFilesDeterministically) {
  testing::ScopedTempDir dir;
  ScenarioSpec spec = SmallSpec(3);
  spec.write_secrets = true;
  spec.output_dir = dir.File("a");
  spec.threads = 1;
  auto first = RunScenario(spec);
  ASSERT_TRUE(first.ok()) << first.status();
  spec.output_dir = dir.File("b");
  spec.threads = 4;
  ASSERT_TRUE(RunScenario(spec).ok());
  const auto a = testing::ReadTree(dir.File("a"));
  const auto b = testing::ReadTree(dir.File("b"));
  for (const char* name :
       {"params.csv", "true_values.csv", "reports.csv", "counts.csv",
        "map.csv", "results.csv", "comparison.csv", "metrics.csv",
        "secrets.csv"}) {
    EXPECT_TRUE(a.count(name)) << name;
  }
  EXPECT_EQ(a, b);
  EXPECT_FALSE(fs::exists(dir.File("a.partial")));
}

TEST(RunScenarioTest, MetricsRecomputeFromComparisonFile) {
  testing::ScopedTempDir dir;
  ScenarioSpec spec = SmallSpec(4);
  spec.output_dir = dir.File("out");
  auto result = RunScenario(spec);
  ASSERT_TRUE(result.ok());
  auto rows = ReadComparisonCsv(dir.File("out/comparison.csv"));
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ(Evaluate(*rows), result->metrics);
  EXPECT_EQ(testing::ReadFile(dir.File("out/metrics.csv")),
            FormatMetricsCsv(*result));
  auto params = ReadParamsCsv(dir.File("out/params.csv"));
  EXPECT_EQ(*params, kEpsTen);
  EXPECT_LE(result->metrics.accurate80, result->metrics.rappor_strings);
  EXPECT_LE(result->metrics.rappor_strings, 40);
}

TEST(RunScenarioTest, OneTimeModeRecordsEffectiveParams) {
  testing::ScopedTempDir dir;
  ScenarioSpec spec = SmallSpec(4);
  spec.mode = EncoderMode::kOneTime;
  spec.output_dir = dir.File("out");
  auto result = RunScenario(spec);
  ASSERT_TRUE(result.ok()) << result.status();
  RapporParams expected = kEpsTen;
  expected.p = 0;
  expected.q = 1;
  EXPECT_EQ(*ReadParamsCsv(dir.File("out/params.csv")), expected);
}

TEST(RunScenarioTest, FailureLeavesNoOutput) {
  testing::ScopedTempDir dir;
  ScenarioSpec spec = SmallSpec(5);
  spec.output_dir = dir.File("out");
  spec.decode.alpha = 2;
  EXPECT_ERROR_KIND(RunScenario(spec), ErrorKind::kInvalidParams);
  EXPECT_FALSE(fs::exists(dir.File("out")));
  EXPECT_FALSE(fs::exists(dir.File("out.partial")));

  testing::WriteFile(dir.File("blocker"), "file");
  spec = SmallSpec(5);
  spec.output_dir = dir.File("blocker/out");
  EXPECT_ERROR_KIND(RunScenario(spec), ErrorKind::kIo);
  EXPECT_FALSE(fs::exists(dir.File("blocker/out.partial")));
}

TEST(RunScenarioTest, RejectsBadSpecs) {
  ScenarioSpec spec = SmallSpec(1);
  spec.margin = 0;
  EXPECT_ERROR_KIND(RunScenario(spec), ErrorKind::kInvalidParams);
  spec = SmallSpec(1);
  spec.population = 0;
  EXPECT_ERROR_KIND(RunScenario(spec), ErrorKind::kInvalidParams);
  spec = SmallSpec(1);
  spec.mode = EncoderMode::kBasic;
  EXPECT_ERROR_KIND(RunScenario(spec), ErrorKind::kInvalidParams);
  spec = SmallSpec(1);
  spec.dataset.path = "/nonexistent";
  EXPECT_ERROR_KIND(RunScenario(spec), ErrorKind::kInvalidParams);
}

TEST(RunScenarioTest, FileDatasetUsesSubsample) {
  testing::ScopedTempDir dir;
  std::string csv = "id,user,value\n";
  for (int u = 0; u < 200; ++u) {
    for (int r = 0; r < 2; ++r) {
      csv += std::to_string(r) + ",user" + std::to_string(u) + ",app" +
             std::to_string(u % 5) + "\n";
    }
  }
  testing::WriteFile(dir.File("data.csv"), csv);
  DatasetSpec data;
  data.path = dir.File("data.csv");
  data.client_column = 2;
  data.value_column = 3;
  data.reports_per_user = 2;
  auto source = LoadSource(data);
  ASSERT_TRUE(source.ok()) << source.status();
  EXPECT_EQ((*source)->candidates,
            (std::vector<std::string>{"app0", "app1", "app2", "app3", "app4"}));
  ScenarioSpec spec;
  spec.dataset = data;
  spec.source = *source;
  spec.population = 100;
  spec.params = kEpsTen;
  spec.seed = 1;
  auto result = RunScenario(spec);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->decoded.total_reports, 200);
}

TEST(RunGridTest, Arity) {
  GridSpec grid;
  grid.populations = {10000};
  grid.epsilons = {{"10", kEpsTen}};
  grid.seeds = {1, 2, 3};
  grid.threads = 2;
  auto result = RunGrid(grid);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->scenarios.size(), 3u);
  ASSERT_EQ(result->summary.size(), 1u);
  EXPECT_EQ(result->summary[0].seeds, (std::vector<uint64_t>{1, 2, 3}));
  EXPECT_TRUE(result->failures.empty());
}

TEST(RunGridTest, OrderingAndOutputs) {
  testing::ScopedTempDir dir;
  GridSpec grid;
  grid.dataset.num_candidates = 30;
  grid.populations = {500, 1000};
  grid.epsilons = {{"0.1", kEpsPointOne}, {"10", kEpsTen}};
  grid.seeds = {7, 8};
  grid.output_dir = dir.path();
  grid.threads = 3;
  auto result = RunGrid(grid);
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->summary.size(), 4u);
  EXPECT_EQ(result->summary[0].population, 500);
  EXPECT_EQ(result->summary[0].epsilon, "0.1");
  EXPECT_EQ(result->summary[1].epsilon, "10");
  EXPECT_EQ(result->summary[2].population, 1000);
  for (const char* name : {"summary.csv", "plot.csv", "drops.csv",
                           "failures.csv", "N500_eps0.1_seed7/results.csv",
                           "N1000_eps10_seed8/comparison.csv"}) {
    EXPECT_TRUE(fs::exists(dir.File(name))) << name;
  }
  EXPECT_EQ(testing::ReadFile(dir.File("summary.csv")),
            FormatSummaryCsv(result->summary));

  testing::ScopedTempDir again;
  grid.output_dir = again.path();
  grid.threads = 1;
  ASSERT_TRUE(RunGrid(grid).ok());
  EXPECT_EQ(testing::ReadTree(dir.path()), testing::ReadTree(again.path()));
}

TEST(RunGridTest, FailedCellsAreRecorded) {
  testing::ScopedTempDir dir;
  std::string csv = "client,value\n";
  for (int u = 0; u < 50; ++u) {
    csv += "u" + std::to_string(u) + ",v" + std::to_string(u % 3) + "\n";
  }
  testing::WriteFile(dir.File("data.csv"), csv);
  GridSpec grid;
  grid.dataset.path = dir.File("data.csv");
  grid.populations = {20, 100};
  grid.epsilons = {{"10", kEpsTen}};
  grid.seeds = {1};
  grid.output_dir = dir.File("out");
  auto result = RunGrid(grid);
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->failures.size(), 1u);
  EXPECT_EQ(result->failures[0].population, 100);
  EXPECT_TRUE(result->summary[0].seeds.size() == 1);
  EXPECT_TRUE(result->summary[1].seeds.empty());
  const std::string failures = testing::ReadFile(dir.File("out/failures.csv"));
  EXPECT_EQ(failures.rfind("population,epsilon,seed,error\n100,10,1,", 0), 0u)
      << failures;
  EXPECT_EQ(ExportPlotData(result->summary).size(), 1u);
}

TEST(RunGridTest, RejectsEmptyAxes) {
  GridSpec grid;
  grid.populations = {10};
  grid.seeds = {1};
  EXPECT_ERROR_KIND(RunGrid(grid), ErrorKind::kInvalidParams);
}

}  // namespace
}  // namespace rappor
