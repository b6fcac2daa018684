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

#ifndef RAPPOR_DATASETS_H_
#define RAPPOR_DATASETS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace rappor {

// One (client, value) observation. The client column is the user key; any
// identifier works (timestamps, UUIDs).
struct Record {
  std::string client;
  std::string value;

  bool operator==(const Record&) const = default;
};

struct Dataset {
  std::vector<Record> records;
  std::string provenance;
  uint64_t seed = 0;
};

struct TrueHistogram {
  std::map<std::string, int64_t> counts;
  int64_t total = 0;

  // Number of values seen at least once.
  size_t distinct() const { return counts.size(); }
};

// Extracts two columns (1-based, like awk's $2,$5) from a comma-separated
// file. Blank lines are skipped and the first non-blank line is dropped when
// `has_header` is set. Errors: MalformedRow (with line number) for short rows
// or empty fields, EmptyDataset when nothing remains.
absl::StatusOr<Dataset> IngestCsv(const std::string& path, int client_column,
                                  int value_column, bool has_header);

struct SubsampleOptions {
  // When set, clients with fewer than reports_per_user records are not
  // eligible for selection. When cleared, they may be picked and the call
  // fails with InsufficientReports.
  bool skip_short_clients = true;
};

// Picks `num_users` distinct clients uniformly without replacement (clients
// are sorted lexicographically first, so the result depends only on the seed)
// and then `reports_per_user` of each client's records uniformly. Output is
// grouped by client in lexicographic order.
absl::StatusOr<Dataset> Subsample(const Dataset& dataset, int64_t num_users,
                                  int reports_per_user, uint64_t seed,
                                  const SubsampleOptions& options = {});

struct SyntheticPopulation {
  Dataset dataset;
  TrueHistogram histogram;
  // All candidate names in rank order, including ones never drawn.
  std::vector<std::string> candidates;
};

// "cand_0001" for rank 1. Wider ranks keep their digits.
std::string SyntheticCandidateName(int rank);

// N records, one synthetic client each, values i.i.d. Zipf(exponent) over
// num_candidates ranked names.
absl::StatusOr<SyntheticPopulation> SynthZipf(int num_candidates, int64_t n,
                                              double exponent, uint64_t seed);

TrueHistogram ComputeTrueHistogram(const Dataset& dataset);

// dataset.csv with header "client,value".
absl::Status WriteDatasetCsv(const Dataset& dataset, const std::string& path);
absl::StatusOr<Dataset> ReadDatasetCsv(const std::string& path);

// uniques.txt: one candidate per line.
absl::Status WriteUniques(const std::vector<std::string>& candidates,
                          const std::string& path);

}  // namespace rappor

#endif  // RAPPOR_DATASETS_H_
