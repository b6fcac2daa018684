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

// Command-line front end: params, synth, subsample, encode, aggregate, map,
// decode and experiment subcommands.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "rappor/candidate_map.h"
#include "rappor/counts.h"
#include "rappor/csv.h"
#include "rappor/datasets.h"
#include "rappor/decoder.h"
#include "rappor/encoder.h"
#include "rappor/experiment.h"
#include "rappor/grid_config.h"
#include "rappor/parallel.h"
#include "rappor/params.h"
#include "rappor/status.h"

namespace rappor {
namespace {

namespace fs = std::filesystem;

absl::Status EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return MakeError(ErrorKind::kIo, absl::StrCat(dir, ": ", ec.message()));
  return absl::OkStatus();
}

std::string Join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

struct ParamsArgs {
  RapporParams params;
  double target_eps = 0;
  double tolerance = 0.1;
  double step = 0.05;
  int limit = 10;
  std::string out;
};

absl::Status RunParams(const ParamsArgs& args) {
  if (args.target_eps > 0) {
    ParamGrid grid;
    grid.f_step = grid.p_step = grid.q_step = args.step;
    grid.h = args.params.h;
    grid.k = args.params.k;
    grid.m = args.params.m;
    RAPPOR_ASSIGN_OR_RETURN(std::vector<ParamMatch> matches,
                            FindParams(args.target_eps, grid, args.tolerance));
    std::cout << "f,p,q,h,epsilon\n";
    const size_t shown = std::min(matches.size(), static_cast<size_t>(args.limit));
    for (size_t i = 0; i < shown; ++i) {
      const RapporParams& p = matches[i].params;
      std::cout << FormatDouble(p.f) << "," << FormatDouble(p.p) << ","
                << FormatDouble(p.q) << "," << p.h << ","
                << FormatDouble(matches[i].epsilon) << "\n";
    }
    if (!args.out.empty()) {
      return WriteParamsCsv(matches.front().params, args.out);
    }
    return absl::OkStatus();
  }
  RAPPOR_ASSIGN_OR_RETURN(RapporParams params, Validate(args.params));
  const PrivacyProfile profile = ComputePrivacyProfile(params);
  std::cout << "p_star," << FormatDouble(profile.p_star) << "\n"
            << "q_star," << FormatDouble(profile.q_star) << "\n"
            << "epsilon_one," << FormatDouble(profile.epsilon_one) << "\n"
            << "epsilon_infinity," << FormatDouble(profile.epsilon_infinity)
            << "\n";
  if (!args.out.empty()) return WriteParamsCsv(params, args.out);
  return absl::OkStatus();
}

struct SynthArgs {
  int candidates = 150;
  int64_t n = 10000;
  double exponent = 1.2;
  uint64_t seed = 1;
  std::string out;
};

absl::Status RunSynth(const SynthArgs& args) {
  RAPPOR_ASSIGN_OR_RETURN(
      SyntheticPopulation population,
      SynthZipf(args.candidates, args.n, args.exponent, args.seed));
  RAPPOR_RETURN_IF_ERROR(EnsureDir(args.out));
  RAPPOR_RETURN_IF_ERROR(
      WriteDatasetCsv(population.dataset, Join(args.out, "dataset.csv")));
  return WriteUniques(population.candidates, Join(args.out, "uniques.txt"));
}

struct SubsampleArgs {
  std::string dataset;
  int client_column = 1;
  int value_column = 2;
  bool no_header = false;
  int64_t users = 0;
  int reports_per_user = 1;
  uint64_t seed = 1;
  std::string out;
};

absl::Status RunSubsample(const SubsampleArgs& args) {
  RAPPOR_ASSIGN_OR_RETURN(Dataset source,
                          IngestCsv(args.dataset, args.client_column,
                                    args.value_column, !args.no_header));
  RAPPOR_ASSIGN_OR_RETURN(Dataset sample,
                          Subsample(source, args.users, args.reports_per_user,
                                    args.seed));
  RAPPOR_RETURN_IF_ERROR(EnsureDir(args.out));
  RAPPOR_RETURN_IF_ERROR(WriteDatasetCsv(sample, Join(args.out, "dataset.csv")));
  const TrueHistogram truth = ComputeTrueHistogram(sample);
  std::vector<std::string> uniques;
  for (const auto& [value, count] : truth.counts) uniques.push_back(value);
  return WriteUniques(uniques, Join(args.out, "uniques.txt"));
}

struct EncodeArgs {
  std::string dataset;
  std::string params;
  std::string mode = "standard";
  uint64_t seed = 1;
  bool no_audit = false;
  std::string out;
};

absl::Status RunEncode(const EncodeArgs& args) {
  RAPPOR_ASSIGN_OR_RETURN(RapporParams raw, ReadParamsCsv(args.params));
  RAPPOR_ASSIGN_OR_RETURN(RapporParams params, Validate(raw));
  RAPPOR_ASSIGN_OR_RETURN(EncoderMode mode, ParseEncoderMode(args.mode));
  RAPPOR_RETURN_IF_ERROR(CheckModeConstraints(params, mode));
  RAPPOR_ASSIGN_OR_RETURN(Dataset data, ReadDatasetCsv(args.dataset));
  BatchOptions batch;
  batch.retain_audit = !args.no_audit;
  batch.threads = ThreadCountFromEnv();
  RAPPOR_ASSIGN_OR_RETURN(
      std::vector<Report> reports,
      EncodeRecords(data.records, params, mode, args.seed, batch));
  RAPPOR_RETURN_IF_ERROR(EnsureDir(args.out));
  RAPPOR_RETURN_IF_ERROR(WriteParamsCsv(EffectiveParams(params, mode),
                                        Join(args.out, "params.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteReportsCsv(reports, Join(args.out, "reports.csv")));
  RAPPOR_RETURN_IF_ERROR(WriteTrueValuesCsv(reports, data.records,
                                            Join(args.out, "true_values.csv")));
  return WriteSecretsCsv(data.records, args.seed,
                         Join(args.out, "secrets.csv"));
}

absl::Status RunAggregate(const std::string& reports_path,
                          const std::string& params_path,
                          const std::string& out) {
  RAPPOR_ASSIGN_OR_RETURN(RapporParams params, ReadParamsCsv(params_path));
  RAPPOR_ASSIGN_OR_RETURN(std::vector<Report> reports,
                          ReadReportsCsv(reports_path, params));
  RAPPOR_ASSIGN_OR_RETURN(CountsMatrix counts,
                          Accumulate(reports, params, ThreadCountFromEnv()));
  return WriteCountsCsv(counts, out);
}

absl::Status RunMap(const std::string& candidates_path,
                    const std::string& params_path, const std::string& out) {
  RAPPOR_ASSIGN_OR_RETURN(RapporParams params, ReadParamsCsv(params_path));
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> candidates,
                          LoadCandidates(candidates_path));
  RAPPOR_ASSIGN_OR_RETURN(CandidateMap map,
                          BuildMap(candidates, params, ThreadCountFromEnv()));
  return WriteMapCsv(map, out);
}

struct DecodeArgs {
  std::string counts;
  std::string map;
  std::string params;
  double alpha = 0.05;
  int64_t min_reports = 1;
  std::string scaling = "uniform";
  std::string out;
};

absl::Status RunDecode(const DecodeArgs& args) {
  RAPPOR_ASSIGN_OR_RETURN(RapporParams params, ReadParamsCsv(args.params));
  RAPPOR_ASSIGN_OR_RETURN(CountsMatrix counts,
                          ReadCountsCsv(args.counts, params));
  RAPPOR_ASSIGN_OR_RETURN(CandidateMap map, ReadMapCsv(args.map, params));
  DecodeConfig config;
  config.alpha = args.alpha;
  config.min_reports = args.min_reports;
  config.scaling = args.scaling == "per-cohort"
                       ? CohortScaling::kPerCohortWeighted
                       : CohortScaling::kUniform;
  config.threads = ThreadCountFromEnv();
  RAPPOR_ASSIGN_OR_RETURN(DecodedDistribution decoded,
                          Decode(counts, map, params, config));
  int detected = 0;
  for (const CandidateEstimate& e : decoded.estimates) detected += e.detected;
  std::cerr << "decoded " << decoded.estimates.size() << " candidates, "
            << detected << " detected\n";
  return WriteResultsCsv(decoded, args.out);
}

struct ExperimentArgs {
  std::string grid_config;
  std::string seeds;
  std::string out;
};

absl::Status RunExperiment(const ExperimentArgs& args) {
  RAPPOR_ASSIGN_OR_RETURN(GridSpec grid, LoadGridConfig(args.grid_config));
  if (!args.seeds.empty()) {
    RAPPOR_ASSIGN_OR_RETURN(grid.seeds, ParseSeedList(args.seeds));
  }
  grid.output_dir = args.out;
  grid.threads = ThreadCountFromEnv();
  RAPPOR_RETURN_IF_ERROR(EnsureDir(args.out));
  RAPPOR_ASSIGN_OR_RETURN(GridResult result, RunGrid(grid));
  std::cout << FormatSummaryCsv(result.summary);
  for (const CellFailure& f : result.failures) {
    std::cerr << "failed: " << ScenarioDirName(f.population, f.epsilon, f.seed)
              << ": " << f.error << "\n";
  }
  return absl::OkStatus();
}

int ExitCode(const absl::Status& status) {
  if (status.ok()) return 0;
  std::cerr << "error: " << status.message() << "\n";
  return 1;
}

}  // namespace
}  // namespace rappor

int main(int argc, char** argv) {
  using namespace rappor;
  CLI::App app{"Randomized response telemetry toolkit"};
  app.require_subcommand(1);

  ParamsArgs params_args;
  auto* params_cmd =
      app.add_subcommand("params", "Privacy profile or parameter search");
  // --h is the hash count here, so help is long-form only.
  params_cmd->set_help_flag("--help", "Print this help message and exit");
  params_cmd->add_option("--f", params_args.params.f, "PRR noise f");
  params_cmd->add_option("--p", params_args.params.p, "IRR p");
  params_cmd->add_option("--q", params_args.params.q, "IRR q");
  params_cmd->add_option("--h", params_args.params.h, "Hash functions");
  params_cmd->add_option("--k", params_args.params.k, "Bloom filter bits");
  params_cmd->add_option("--m", params_args.params.m, "Cohorts");
  params_cmd->add_option("--target-eps", params_args.target_eps,
                         "Search a grid for this eps_1");
  params_cmd->add_option("--tolerance", params_args.tolerance,
                         "Search tolerance");
  params_cmd->add_option("--step", params_args.step, "Search grid step");
  params_cmd->add_option("--limit", params_args.limit, "Matches to print");
  params_cmd->add_option("--out", params_args.out, "Write params.csv");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Synthetic Zipf dataset");
  synth_cmd->add_option("--candidates", synth_args.candidates);
  synth_cmd->add_option("--n", synth_args.n)->required();
  synth_cmd->add_option("--exponent", synth_args.exponent);
  synth_cmd->add_option("--seed", synth_args.seed);
  synth_cmd->add_option("--out", synth_args.out)->required();

  SubsampleArgs subsample_args;
  auto* subsample_cmd =
      app.add_subcommand("subsample", "Sub-sample users from a CSV file");
  subsample_cmd->add_option("--dataset", subsample_args.dataset)->required();
  subsample_cmd->add_option("--client-column", subsample_args.client_column);
  subsample_cmd->add_option("--value-column", subsample_args.value_column);
  subsample_cmd->add_flag("--no-header", subsample_args.no_header);
  subsample_cmd->add_option("--users", subsample_args.users)->required();
  subsample_cmd->add_option("--reports-per-user",
                            subsample_args.reports_per_user);
  subsample_cmd->add_option("--seed", subsample_args.seed);
  subsample_cmd->add_option("--out", subsample_args.out)->required();

  EncodeArgs encode_args;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a dataset");
  encode_cmd->add_option("--dataset", encode_args.dataset)->required();
  encode_cmd->add_option("--params", encode_args.params)->required();
  encode_cmd->add_option("--mode", encode_args.mode,
                         "standard | one-time | basic | basic-one-time");
  encode_cmd->add_option("--seed", encode_args.seed);
  encode_cmd->add_flag("--no-audit", encode_args.no_audit,
                       "Leave bloom and prr columns empty");
  encode_cmd->add_option("--out", encode_args.out)->required();

  std::string agg_reports, agg_params, agg_out;
  auto* aggregate_cmd =
      app.add_subcommand("aggregate", "Fold reports into counts.csv");
  aggregate_cmd->add_option("--reports", agg_reports)->required();
  aggregate_cmd->add_option("--params", agg_params)->required();
  aggregate_cmd->add_option("--out", agg_out)->required();

  std::string map_candidates, map_params, map_out;
  auto* map_cmd = app.add_subcommand("map", "Build map.csv for candidates");
  map_cmd->add_option("--candidates", map_candidates)->required();
  map_cmd->add_option("--params", map_params)->required();
  map_cmd->add_option("--out", map_out)->required();

  DecodeArgs decode_args;
  auto* decode_cmd = app.add_subcommand("decode", "Estimate frequencies");
  decode_cmd->add_option("--counts", decode_args.counts)->required();
  decode_cmd->add_option("--map", decode_args.map)->required();
  decode_cmd->add_option("--params", decode_args.params)->required();
  decode_cmd->add_option("--alpha", decode_args.alpha);
  decode_cmd->add_option("--min-reports", decode_args.min_reports);
  decode_cmd->add_option("--scaling", decode_args.scaling)
      ->check(CLI::IsMember({"uniform", "per-cohort"}));
  decode_cmd->add_option("--out", decode_args.out)->required();

  ExperimentArgs experiment_args;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Run a population x epsilon grid");
  experiment_cmd->add_option("--grid-config", experiment_args.grid_config)
      ->required();
  experiment_cmd->add_option("--seeds", experiment_args.seeds,
                             "Comma-separated seeds, overrides the config");
  experiment_cmd->add_option("--out", experiment_args.out)->required();

  CLI11_PARSE(app, argc, argv);

  if (params_cmd->parsed()) return ExitCode(RunParams(params_args));
  if (synth_cmd->parsed()) return ExitCode(RunSynth(synth_args));
  if (subsample_cmd->parsed()) return ExitCode(RunSubsample(subsample_args));
  if (encode_cmd->parsed()) return ExitCode(RunEncode(encode_args));
  if (aggregate_cmd->parsed()) {
    return ExitCode(RunAggregate(agg_reports, agg_params, agg_out));
  }
  if (map_cmd->parsed()) {
    return ExitCode(RunMap(map_candidates, map_params, map_out));
  }
  if (decode_cmd->parsed()) return ExitCode(RunDecode(decode_args));
  if (experiment_cmd->parsed()) return ExitCode(RunExperiment(experiment_args));
  return 1;
}
