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

#include "rappor/datasets.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rappor/csv.h"
#include "rappor/status.h"

namespace rappor {

absl::StatusOr<Dataset> IngestCsv(const std::string& path, int client_column,
                                  int value_column, bool has_header) {
  if (client_column < 1 || value_column < 1) {
    return MakeError(ErrorKind::kInvalidParams,
                     "columns: indices are 1-based");
  }
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));

  Dataset dataset;
  dataset.provenance = path;
  bool header_pending = has_header;
  const size_t needed =
      static_cast<size_t>(std::max(client_column, value_column));
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = SplitFields(line);
    if (fields.size() < needed) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: expected at least %d columns",
                                       i + 1, needed));
    }
    Record record{std::string(fields[client_column - 1]),
                  std::string(fields[value_column - 1])};
    if (record.client.empty() || record.value.empty()) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: empty client or value", i + 1));
    }
    dataset.records.push_back(std::move(record));
  }
  if (dataset.records.empty()) {
    return MakeError(ErrorKind::kEmptyDataset, absl::StrCat(path, " is empty"));
  }
  return dataset;
}

absl::StatusOr<Dataset> Subsample(const Dataset& dataset, int64_t num_users,
                                  int reports_per_user, uint64_t seed,
                                  const SubsampleOptions& options) {
  if (num_users < 1 || reports_per_user < 1) {
    return MakeError(ErrorKind::kInvalidParams,
                     "num_users and reports_per_user must be positive");
  }
  std::map<std::string, std::vector<size_t>> by_client;
  for (size_t i = 0; i < dataset.records.size(); ++i) {
    by_client[dataset.records[i].client].push_back(i);
  }

  std::vector<const std::string*> eligible;
  eligible.reserve(by_client.size());
  for (const auto& [client, rows] : by_client) {
    if (!options.skip_short_clients ||
        rows.size() >= static_cast<size_t>(reports_per_user)) {
      eligible.push_back(&client);
    }
  }
  if (eligible.size() < static_cast<size_t>(num_users)) {
    return MakeError(ErrorKind::kInsufficientUsers,
                     absl::StrFormat("need %d users, %d eligible", num_users,
                                     eligible.size()));
  }

  std::mt19937_64 rng(seed);
  std::vector<const std::string*> chosen;
  chosen.reserve(static_cast<size_t>(num_users));
  std::sample(eligible.begin(), eligible.end(), std::back_inserter(chosen),
              num_users, rng);

  Dataset out;
  out.provenance = absl::StrCat(dataset.provenance, " subsample(", num_users,
                                "x", reports_per_user, ")");
  out.seed = seed;
  out.records.reserve(static_cast<size_t>(num_users) *
                      static_cast<size_t>(reports_per_user));
  std::vector<size_t> picked;
  for (const std::string* client : chosen) {
    const auto& rows = by_client.at(*client);
    if (rows.size() < static_cast<size_t>(reports_per_user)) {
      return MakeError(ErrorKind::kInsufficientReports,
                       absl::StrFormat("client %s has %d records, need %d",
                                       *client, rows.size(), reports_per_user));
    }
    picked.clear();
    std::sample(rows.begin(), rows.end(), std::back_inserter(picked),
                reports_per_user, rng);
    for (size_t row : picked) out.records.push_back(dataset.records[row]);
  }
  return out;
}

std::string SyntheticCandidateName(int rank) {
  return absl::StrFormat("cand_%04d", rank);
}

absl::StatusOr<SyntheticPopulation> SynthZipf(int num_candidates, int64_t n,
                                              double exponent, uint64_t seed) {
  if (num_candidates < 1 || n < 1 || !(exponent > 0)) {
    return MakeError(ErrorKind::kInvalidParams,
                     "synthetic population needs num_candidates >= 1, N >= 1 "
                     "and exponent > 0");
  }
  SyntheticPopulation population;
  population.candidates.reserve(static_cast<size_t>(num_candidates));
  std::vector<double> weights;
  weights.reserve(static_cast<size_t>(num_candidates));
  for (int rank = 1; rank <= num_candidates; ++rank) {
    population.candidates.push_back(SyntheticCandidateName(rank));
    weights.push_back(std::pow(static_cast<double>(rank), -exponent));
  }

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> zipf(weights.begin(), weights.end());
  Dataset& dataset = population.dataset;
  dataset.provenance = absl::StrFormat("zipf(%d,%d,%g)", num_candidates, n,
                                       exponent);
  dataset.seed = seed;
  dataset.records.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    dataset.records.push_back(
        {absl::StrFormat("u%08d", i + 1),
         population.candidates[static_cast<size_t>(zipf(rng))]});
  }
  population.histogram = ComputeTrueHistogram(dataset);
  return population;
}

TrueHistogram ComputeTrueHistogram(const Dataset& dataset) {
  TrueHistogram histogram;
  for (const Record& record : dataset.records) {
    ++histogram.counts[record.value];
  }
  histogram.total = static_cast<int64_t>(dataset.records.size());
  return histogram;
}

absl::Status WriteDatasetCsv(const Dataset& dataset, const std::string& path) {
  std::string content = "client,value\n";
  for (const Record& record : dataset.records) {
    absl::StrAppend(&content, record.client, ",", record.value, "\n");
  }
  return WriteTextFile(path, content);
}

absl::StatusOr<Dataset> ReadDatasetCsv(const std::string& path) {
  return IngestCsv(path, 1, 2, /*has_header=*/true);
}

absl::Status WriteUniques(const std::vector<std::string>& candidates,
                          const std::string& path) {
  std::string content;
  for (const std::string& c : candidates) absl::StrAppend(&content, c, "\n");
  return WriteTextFile(path, content);
}

}  // namespace rappor
