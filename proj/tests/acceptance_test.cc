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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "rappor/candidate_map.h"
#include "rappor/counts.h"
#include "rappor/csv.h"
#include "rappor/datasets.h"
#include "rappor/decoder.h"
#include "rappor/encoder.h"
#include "rappor/experiment.h"
#include "rappor/nnls.h"
#include "rappor/parallel.h"
#include "rappor/params.h"

namespace rappor {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Reference high, medium and low privacy settings, h = 2.
const RapporParams kEpsPointOne{.k = 32, .h = 2, .m = 64, .f = 0.75, .p = 0.5,
                                .q = 0.55};
const RapporParams kEpsOne{.k = 32, .h = 2, .m = 64, .f = 0.5, .p = 0.5,
                           .q = 0.75};
const RapporParams kEpsTen{.k = 32, .h = 2, .m = 64, .f = 0.01, .p = 0.05,
                           .q = 0.9};

constexpr double kKktTolerance = 1e-8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Largest KKT violation over every decoder run in the suite.
double g_worst_kkt = 0;
int g_decoder_runs = 0;

void RecordKkt(const DecodedDistribution& decoded) {
  g_worst_kkt = std::max(g_worst_kkt, decoded.kkt_violation);
  ++g_decoder_runs;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::map<std::string, std::string> ReadTree(const std::string& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), root).string()] =
        ReadFile(entry.path().string());
  }
  return files;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    const char* base = std::getenv("TMPDIR");
    path_ = fs::path(base != nullptr ? base : "/tmp") /
            absl::StrCat("rappor_acceptance_", name, "_", ::getpid());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

// 1. Epsilon calculator against reference values.
Outcome EpsilonTable() {
  const std::vector<std::pair<RapporParams, double>> rows = {
      {kEpsPointOne, 0.1003}, {kEpsOne, 1.0743}, {kEpsTen, 10.018}};
  Outcome out{true, ""};
  for (const auto& [params, expected] : rows) {
    auto eps = EpsilonOne(params);
    const bool ok = eps.ok() && std::abs(*eps - expected) <= 5e-3;
    out.pass &= ok;
    absl::StrAppend(&out.detail, out.detail.empty() ? "" : "; ",
                    absl::StrFormat("eps1(f=%g,p=%g,q=%g)=%.4f vs %g",
                                    params.f, params.p, params.q,
                                    eps.ok() ? *eps : NAN, expected));
  }
  return out;
}

// 2. P(irr=1 | bloom bit) against q* and p*.
Outcome RandomizationLaws() {
  constexpr int kSamples = 100000;
  Outcome out{true, ""};
  const std::vector<RapporParams> settings = {kEpsPointOne, kEpsOne, kEpsTen};
  for (size_t set = 0; set < settings.size(); ++set) {
    const RapporParams& params = settings[set];
    // Independent secrets and draws per parameter set.
    const uint64_t seed = 1000 + set;
    // Bit 1 carries the value, bit 0 does not.
    BitVector bloom(2);
    bloom.Set(1, true);
    int64_t ones_given_one = 0;
    int64_t ones_given_zero = 0;
    for (int s = 0; s < kSamples; ++s) {
      const UserSecret secret =
          DeriveUserSecret(seed, absl::StrCat("client", s));
      Rng rng = ReportRng(seed, static_cast<uint64_t>(s));
      const BitVector prr =
          PermanentRandomizedResponse(bloom, params.f, secret, "value");
      const BitVector irr =
          InstantaneousRandomizedResponse(prr, params.p, params.q, rng);
      ones_given_one += irr.Get(1);
      ones_given_zero += irr.Get(0);
    }
    const EffectiveProbabilities probs = ComputeEffectiveProbabilities(params);
    const auto z_score = [&](int64_t ones, double expected) {
      const double sigma = std::sqrt(expected * (1 - expected) / kSamples);
      return (static_cast<double>(ones) / kSamples - expected) / sigma;
    };
    const double zq = z_score(ones_given_one, probs.q_star);
    const double zp = z_score(ones_given_zero, probs.p_star);
    out.pass &= std::abs(zq) <= 3 && std::abs(zp) <= 3;
    absl::StrAppend(&out.detail, out.detail.empty() ? "" : "; ",
                    absl::StrFormat("f=%g: z(q*)=%+.2f z(p*)=%+.2f", params.f,
                                    zq, zp));
  }
  return out;
}

// 3. Noise-free pipeline returns the true histogram.
Outcome NoiselessRoundTrip() {
  std::vector<std::string> names;
  for (int i = 1; i <= 150; ++i) names.push_back(SyntheticCandidateName(i));
  RapporParams params{.k = 1024, .h = 1, .m = 1, .f = 0, .p = 0, .q = 1};
  while (!IsCollisionFree(*BuildMap(names, params), params)) params.k *= 2;

  ScenarioSpec spec;
  spec.dataset.num_candidates = 150;
  spec.population = 10000;
  spec.params = params;
  // No IRR draws are needed when p=0, q=1.
  spec.mode = EncoderMode::kBasicOneTime;
  spec.seed = 1;
  spec.threads = ThreadCountFromEnv();
  auto result = RunScenario(spec);
  if (!result.ok()) return {false, std::string(result.status().message())};
  RecordKkt(result->decoded);
  double worst = 0;
  for (const ComparisonRow& row : result->comparison) {
    const double scale = std::max<double>(1, row.true_count);
    worst = std::max(worst, std::abs(row.estimate - row.true_count) / scale);
  }
  const Metrics& m = result->metrics;
  const double ratio =
      static_cast<double>(m.accurate80) / static_cast<double>(m.true_strings);
  return {worst <= 1e-6 && ratio == 1.0,
          absl::StrFormat("k=%d, max relative error %.2e, accurate80/true = "
                          "%d/%d",
                          params.k, worst, m.accurate80, m.true_strings)};
}

Eigen::MatrixXd Dense(const BinaryDesign& design) {
  Eigen::MatrixXd x =
      Eigen::MatrixXd::Zero(design.num_rows, design.num_columns());
  for (int s = 0; s < design.num_columns(); ++s) {
    for (int64_t r : design.columns[s]) x(r, s) = 1;
  }
  return x;
}

// Least squares over every support subset; keeps the best non-negative one.
Eigen::VectorXd ExhaustiveNnls(const Eigen::MatrixXd& x,
                               const Eigen::VectorXd& y) {
  const auto cols = static_cast<int>(x.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(cols);
  double best_rss = y.squaredNorm();
  for (int mask = 1; mask < (1 << cols); ++mask) {
    std::vector<int> support;
    for (int s = 0; s < cols; ++s) {
      if (mask & (1 << s)) support.push_back(s);
    }
    Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(support.size()));
    for (size_t i = 0; i < support.size(); ++i) sub.col(i) = x.col(support[i]);
    const Eigen::VectorXd coef = sub.colPivHouseholderQr().solve(y);
    if (coef.minCoeff() < 0) continue;
    const double rss = (y - sub * coef).squaredNorm();
    if (rss < best_rss - 1e-12) {
      best_rss = rss;
      best.setZero();
      for (size_t i = 0; i < support.size(); ++i) best(support[i]) = coef(i);
    }
  }
  return best;
}

// 4. NNLS against exhaustive enumeration, plus KKT on every decoder run.
Outcome NnlsOracle() {
  std::mt19937_64 rng(20260101);
  std::normal_distribution<double> noise(0.0, 2.0);
  double worst = 0;
  int instances = 0;
  bool solved = true;
  while (instances < 50) {
    const int cols = 1 + static_cast<int>(rng() % 4);
    BinaryDesign design;
    design.num_rows = 12;
    design.columns.resize(cols);
    for (auto& column : design.columns) {
      for (int r = 0; r < 12; ++r) {
        if (rng() % 2) column.push_back(r);
      }
    }
    const Eigen::MatrixXd x = Dense(design);
    // The exhaustive oracle is exact only for full column rank.
    if (Eigen::FullPivLU<Eigen::MatrixXd>(x).rank() != cols) continue;
    Eigen::VectorXd beta(cols);
    for (int s = 0; s < cols; ++s) beta(s) = (rng() % 3 == 0) ? 0 : rng() % 10;
    Eigen::VectorXd y = x * beta;
    for (int r = 0; r < 12; ++r) y(r) += noise(rng);
    auto solution =
        SolveNnls(design, std::vector<double>(y.data(), y.data() + y.size()));
    if (!solution.ok()) {
      solved = false;
      break;
    }
    worst = std::max(
        worst, (solution->coefficients - ExhaustiveNnls(x, y)).cwiseAbs()
                   .maxCoeff());
    ++instances;
  }
  const bool pass = solved && worst <= 1e-6 && g_worst_kkt <= kKktTolerance &&
                    g_decoder_runs > 0;
  return {pass, absl::StrFormat("%d instances, max |diff| %.2e; %d decoder "
                                "runs, max KKT violation %.2e",
                                instances, worst, g_decoder_runs,
                                g_worst_kkt)};
}

// 5. Mean debiased count over seeded trials.
Outcome DebiasUnbiasedness() {
  constexpr int kTrials = 200;
  constexpr int kReports = 100000;
  constexpr int kTrueSet = 30000;
  const RapporParams params{.k = 1, .h = 1, .m = 1, .f = kEpsOne.f,
                            .p = kEpsOne.p, .q = kEpsOne.q};
  std::vector<double> estimates(kTrials);
  ParallelFor(kTrials, ThreadCountFromEnv(), [&](size_t begin, size_t end) {
    BitVector one(1);
    one.Set(0, true);
    const BitVector zero(1);
    for (size_t trial = begin; trial < end; ++trial) {
      CountsMatrix counts(1, 1);
      Rng rng = ReportRng(trial, 0);
      for (int r = 0; r < kReports; ++r) {
        const UserSecret secret =
            DeriveUserSecret(trial, absl::StrCat("u", r));
        const BitVector prr = PermanentRandomizedResponse(
            r < kTrueSet ? one : zero, params.f, secret, "v");
        counts.AddReport(
            0, InstantaneousRandomizedResponse(prr, params.p, params.q, rng));
      }
      estimates[trial] = Debias(counts, params)->y[0];
    }
  });
  double mean = 0;
  for (double e : estimates) mean += e;
  mean /= kTrials;
  const EffectiveProbabilities probs = ComputeEffectiveProbabilities(params);
  const double var_c = kTrueSet * probs.q_star * (1 - probs.q_star) +
                       (kReports - kTrueSet) * probs.p_star * (1 - probs.p_star);
  const double sigma = std::sqrt(var_c / kTrials) / (probs.q_star - probs.p_star);
  const double z = (mean - kTrueSet) / sigma;
  return {std::abs(z) <= 3,
          absl::StrFormat("mean %.1f vs %d, sigma %.1f, z=%+.2f", mean,
                          kTrueSet, sigma, z)};
}

const SummaryRow* FindRow(const GridResult& grid, int64_t population,
                          const std::string& epsilon) {
  for (const SummaryRow& row : grid.summary) {
    if (row.population == population && row.epsilon == epsilon) return &row;
  }
  return nullptr;
}

void RecordGridKkt(const GridResult& grid) {
  for (const auto& scenario : grid.scenarios) {
    if (scenario.ok()) RecordKkt(scenario->decoded);
  }
}

// 6. Coarse grid ordering, floor and accuracy level.
Outcome CoarseGrid() {
  const auto start = Clock::now();
  GridSpec spec;
  spec.populations = {10000, 100000};
  spec.epsilons = {{"0.1", kEpsPointOne}, {"1.0743", kEpsOne},
                   {"10.018", kEpsTen}};
  spec.seeds = {1, 2, 3, 4, 5};
  spec.threads = ThreadCountFromEnv();
  auto grid = RunGrid(spec);
  if (!grid.ok()) return {false, std::string(grid.status().message())};
  RecordGridKkt(*grid);
  const double seconds = Seconds(start);

  bool pass = grid->failures.empty();
  std::string table;
  for (int64_t n : spec.populations) {
    for (size_t e = 0; e < spec.epsilons.size(); ++e) {
      const SummaryRow* row = FindRow(*grid, n, spec.epsilons[e].label);
      absl::StrAppend(&table, table.empty() ? "" : " ",
                      absl::StrFormat("(%d,%s)=%g", n, row->epsilon,
                                      row->accurate80));
      if (e > 0) {
        pass &= row->accurate80 >=
                FindRow(*grid, n, spec.epsilons[e - 1].label)->accurate80;
      }
    }
  }
  for (const EpsilonSetting& eps : spec.epsilons) {
    pass &= FindRow(*grid, 100000, eps.label)->accurate80 >=
            FindRow(*grid, 10000, eps.label)->accurate80;
  }
  pass &= FindRow(*grid, 10000, "0.1")->accurate80 == 0;
  const SummaryRow* top = FindRow(*grid, 100000, "10.018");
  const double proportion = top->proportion.value_or(0);
  pass &= proportion >= 0.5;
  pass &= seconds < 120;
  return {pass, absl::StrFormat("median accurate80 %s; proportion at "
                                "(100000,10.018)=%.3f; %.1fs",
                                table, proportion, seconds)};
}

// Average ranks, ties share the mean rank.
std::vector<double> Ranks(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = (i + j) / 2.0 + 1;
    i = j + 1;
  }
  return ranks;
}

double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = Ranks(a);
  const std::vector<double> rb = Ranks(b);
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += ra[i] / n;
    mb += rb[i] / n;
  }
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  return va > 0 && vb > 0 ? cov / std::sqrt(va * vb) : 0;
}

// 7. Fine epsilon sweep at N = 100000.
Outcome FineSweep() {
  const auto start = Clock::now();
  TempDir dir("sweep");
  GridSpec spec;
  spec.populations = {100000};
  // f and p stay at the medium-privacy values; q moves to hit each target.
  ParamGrid search;
  search.f_min = search.f_max = 0.5;
  search.p_min = search.p_max = 0.5;
  search.q_min = 0.5;
  search.q_step = 0.001;
  std::vector<double> targets;
  std::string resolved;
  for (int tenth = 5; tenth <= 10; ++tenth) {
    const double target = tenth / 10.0;
    auto matches = FindParams(target, search, 0.01);
    if (!matches.ok()) return {false, std::string(matches.status().message())};
    spec.epsilons.push_back(
        {absl::StrFormat("%.1f", target), matches->front().params});
    targets.push_back(target);
    absl::StrAppend(&resolved, resolved.empty() ? "" : ",",
                    absl::StrFormat("q=%g", matches->front().params.q));
  }
  spec.seeds = {1, 2, 3, 4, 5};
  spec.threads = ThreadCountFromEnv();
  spec.output_dir = dir.File("grid");
  spec.retain_audit = false;
  auto grid = RunGrid(spec);
  if (!grid.ok()) return {false, std::string(grid.status().message())};
  RecordGridKkt(*grid);
  const double seconds = Seconds(start);

  std::vector<double> medians;
  std::string table;
  for (const SummaryRow& row : grid->summary) {
    medians.push_back(row.accurate80);
    absl::StrAppend(&table, table.empty() ? "" : ",", row.accurate80);
  }
  const double rho = Spearman(targets, medians);

  bool plot_ok = true;
  std::vector<std::string> lines =
      absl::StrSplit(ReadFile(dir.File("grid/plot.csv")), '\n',
                     absl::SkipEmpty());
  plot_ok &= lines.size() == targets.size() + 1;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = absl::StrSplit(lines[i], ',');
    auto value = fields.size() == 3 ? ParseDouble(fields[2])
                                    : std::optional<double>();
    plot_ok &= value.has_value() && *value >= 0 && *value <= 1;
  }
  const bool pass =
      grid->failures.empty() && rho > 0 && plot_ok && seconds < 180;
  return {pass, absl::StrFormat("%s; median accurate80 [%s]; Spearman %.3f; "
                                "plot.csv in [0,1]: %s; %.1fs",
                                resolved, table, rho,
                                plot_ok ? "yes" : "no", seconds)};
}

// Every read(write(x)) round trip on freshly generated artifacts.
std::string RoundTripFailures(const std::string& dir) {
  std::string failures;
  const auto check = [&](bool ok, const char* name) {
    if (!ok) absl::StrAppend(&failures, failures.empty() ? "" : ",", name);
  };
  const RapporParams params = kEpsOne;
  check(WriteParamsCsv(params, dir + "/p.csv").ok() &&
            *ReadParamsCsv(dir + "/p.csv") == params,
        "params");
  auto population = SynthZipf(30, 2000, 1.2, 11);
  check(WriteDatasetCsv(population->dataset, dir + "/d.csv").ok() &&
            ReadDatasetCsv(dir + "/d.csv")->records ==
                population->dataset.records,
        "dataset");
  check(WriteUniques(population->candidates, dir + "/u.txt").ok() &&
            *LoadCandidates(dir + "/u.txt") == population->candidates,
        "uniques");
  auto reports = EncodeRecords(population->dataset.records, params,
                               EncoderMode::kStandard, 5);
  check(WriteReportsCsv(*reports, dir + "/r.csv").ok() &&
            *ReadReportsCsv(dir + "/r.csv", params) == *reports,
        "reports");
  auto counts = Accumulate(*reports, params);
  check(WriteCountsCsv(*counts, dir + "/c.csv").ok() &&
            *ReadCountsCsv(dir + "/c.csv", params) == *counts,
        "counts");
  auto map = BuildMap(population->candidates, params);
  check(WriteMapCsv(*map, dir + "/m.csv").ok() &&
            *ReadMapCsv(dir + "/m.csv", params) == *map,
        "map");
  auto decoded = Decode(*counts, *map, params);
  RecordKkt(*decoded);
  check(WriteResultsCsv(*decoded, dir + "/res.csv").ok() &&
            *ReadResultsCsv(dir + "/res.csv") ==
                SortedByEstimate(decoded->estimates),
        "results");
  const auto rows = BuildComparison(*decoded, population->histogram, 0.2);
  std::ofstream(dir + "/cmp.csv") << FormatComparisonCsv(rows);
  check(*ReadComparisonCsv(dir + "/cmp.csv") == rows, "comparison");
  return failures;
}

// 8. Byte-identical reruns across thread counts, and format round trips.
Outcome Determinism() {
  TempDir dir("determinism");
  GridSpec spec;
  spec.dataset.num_candidates = 40;
  spec.populations = {3000};
  spec.epsilons = {{"1.0743", kEpsOne}, {"10.018", kEpsTen}};
  spec.seeds = {1, 2};
  spec.write_secrets = true;
  const std::vector<std::string> thread_settings = {"1", "4", "1"};
  std::vector<std::map<std::string, std::string>> trees;
  for (size_t i = 0; i < thread_settings.size(); ++i) {
    setenv("RAPPOR_THREADS", thread_settings[i].c_str(), 1);
    spec.threads = ThreadCountFromEnv();
    spec.output_dir = dir.File(absl::StrCat("run", i));
    auto grid = RunGrid(spec);
    if (!grid.ok()) return {false, std::string(grid.status().message())};
    RecordGridKkt(*grid);
    trees.push_back(ReadTree(spec.output_dir));
  }
  unsetenv("RAPPOR_THREADS");
  bool identical = trees[0] == trees[1] && trees[0] == trees[2];
  int files = 0;
  for (const auto& [name, content] : trees[0]) {
    for (const char* kind : {"params.csv", "reports.csv", "counts.csv",
                             "map.csv", "results.csv", "comparison.csv",
                             "summary.csv"}) {
      files += name.ends_with(kind);
    }
  }
  // 4 scenarios x 6 files + summary.csv.
  identical &= files == 25;
  const std::string round_trip = RoundTripFailures(dir.File(""));
  return {identical && round_trip.empty(),
          absl::StrFormat("%d files byte-identical across RAPPOR_THREADS=1,4,1:"
                          " %s; round-trip failures: %s",
                          files, identical ? "yes" : "no",
                          round_trip.empty() ? "none" : round_trip)};
}

// 9. 1.2M reports through encode, aggregate and decode.
Outcome ScaleSmoke() {
  constexpr int64_t kReports = 1200000;
  auto population = SynthZipf(150, kReports, 1.2, 99);
  if (!population.ok()) return {false, "synthesis failed"};
  const int threads = ThreadCountFromEnv();
  const RapporParams params = kEpsOne;
  const auto start = Clock::now();
  auto reports = EncodeRecords(population->dataset.records, params,
                               EncoderMode::kStandard, 99,
                               {.retain_audit = false, .threads = threads});
  if (!reports.ok()) return {false, std::string(reports.status().message())};
  const double encode_s = Seconds(start);
  auto counts = Accumulate(*reports, params, threads);
  auto map = BuildMap(population->candidates, params, threads);
  if (!counts.ok() || !map.ok()) return {false, "aggregate or map failed"};
  DecodeConfig config;
  config.threads = threads;
  auto decoded = Decode(*counts, *map, params, config);
  if (!decoded.ok()) return {false, std::string(decoded.status().message())};
  RecordKkt(*decoded);
  const double total_s = Seconds(start);
  int detected = 0;
  for (const auto& e : decoded->estimates) detected += e.detected;
  return {counts->total_reports() == kReports && total_s < 300,
          absl::StrFormat("%d reports, %d threads: encode %.1fs, total %.1fs, "
                          "%d detected",
                          counts->total_reports(), threads, encode_s, total_s,
                          detected)};
}

}  // namespace
}  // namespace rappor

int main() {
  using rappor::Outcome;
  // Criterion 4 also audits KKT over every other decoder run, so it goes last.
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, rappor::EpsilonTable},       {2, rappor::RandomizationLaws},
      {3, rappor::NoiselessRoundTrip}, {5, rappor::DebiasUnbiasedness},
      {6, rappor::CoarseGrid},         {7, rappor::FineSweep},
      {8, rappor::Determinism},        {9, rappor::ScaleSmoke},
      {4, rappor::NnlsOracle},
  };
  std::map<int, Outcome> outcomes;
  for (const auto& [id, run] : criteria) {
    const auto start = rappor::Clock::now();
    outcomes[id] = run();
    std::fprintf(stderr, "[criterion %d finished in %.1fs]\n", id,
                 rappor::Seconds(start));
  }
  bool all = true;
  for (const auto& [id, outcome] : outcomes) {
    std::printf("criterion %d: %s - %s\n", id, outcome.pass ? "PASS" : "FAIL",
                outcome.detail.c_str());
    all &= outcome.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
