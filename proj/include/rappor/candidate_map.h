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

#ifndef RAPPOR_CANDIDATE_MAP_H_
#define RAPPOR_CANDIDATE_MAP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rappor/params.h"

namespace rappor {

// Candidate strings and the Bloom bits each one sets in every cohort. This is
// the column structure of the decoder's design matrix.
struct CandidateMap {
  std::vector<std::string> candidates;
  // positions[s] holds m*h global positions for candidate s, cohort-major and
  // then by hash index: position = cohort * k + bit_index + 1. Colliding
  // hashes repeat a position.
  std::vector<std::vector<int64_t>> positions;

  bool operator==(const CandidateMap&) const = default;
};

// Reads uniques.txt. Blank lines and a literal "PackageName" header line are
// dropped; order is kept. Errors: DuplicateCandidate, EmptyCandidateList,
// MalformedRow for lines containing a comma.
absl::StatusOr<std::vector<std::string>> LoadCandidates(
    const std::string& path);
absl::StatusOr<std::vector<std::string>> ParseCandidateLines(
    const std::vector<std::string>& lines);

absl::StatusOr<CandidateMap> BuildMap(const std::vector<std::string>& candidates,
                                      const RapporParams& params,
                                      int threads = 1);

// True when, in every cohort, each candidate's h bits are distinct and no two
// candidates share a bit.
bool IsCollisionFree(const CandidateMap& map, const RapporParams& params);

// map.csv: headerless, one row per candidate: the string then m*h positions.
std::string FormatMapCsv(const CandidateMap& map);
absl::Status WriteMapCsv(const CandidateMap& map, const std::string& path);
absl::StatusOr<CandidateMap> ReadMapCsv(const std::string& path,
                                        const RapporParams& params);
absl::StatusOr<CandidateMap> ParseMapLines(
    const std::vector<std::string>& lines, const RapporParams& params);

}  // namespace rappor

#endif  // RAPPOR_CANDIDATE_MAP_H_
