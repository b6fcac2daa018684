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

#include "rappor/candidate_map.h"

#include <algorithm>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rappor/csv.h"
#include "rappor/encoder.h"
#include "rappor/parallel.h"
#include "rappor/status.h"

namespace rappor {

absl::StatusOr<std::vector<std::string>> ParseCandidateLines(
    const std::vector<std::string>& lines) {
  std::vector<std::string> candidates;
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line == "PackageName") continue;
    if (line.find(',') != std::string::npos) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: candidates cannot contain ','",
                                       i + 1));
    }
    if (!seen.insert(line).second) {
      return MakeError(ErrorKind::kDuplicateCandidate, line);
    }
    candidates.push_back(line);
  }
  if (candidates.empty()) {
    return MakeError(ErrorKind::kEmptyCandidateList, "no candidates");
  }
  return candidates;
}

absl::StatusOr<std::vector<std::string>> LoadCandidates(
    const std::string& path) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  return ParseCandidateLines(lines);
}

absl::StatusOr<CandidateMap> BuildMap(const std::vector<std::string>& candidates,
                                      const RapporParams& params,
                                      int threads) {
  if (candidates.empty()) {
    return MakeError(ErrorKind::kEmptyCandidateList, "no candidates");
  }
  CandidateMap map;
  map.candidates = candidates;
  map.positions.resize(candidates.size());
  std::vector<absl::Status> errors(candidates.size());

  ParallelFor(candidates.size(), threads, [&](size_t begin, size_t end) {
    for (size_t s = begin; s < end; ++s) {
      auto& row = map.positions[s];
      row.reserve(static_cast<size_t>(params.m) *
                  static_cast<size_t>(params.h));
      for (int cohort = 0; cohort < params.m; ++cohort) {
        auto indices =
            BloomBitIndices(candidates[s], cohort, params.k, params.h);
        if (!indices.ok()) {
          errors[s] = Annotate(indices.status(),
                               absl::StrCat("candidate ", s + 1));
          return;
        }
        for (int bit : *indices) {
          row.push_back(static_cast<int64_t>(cohort) * params.k + bit + 1);
        }
      }
    }
  });
  for (const absl::Status& error : errors) {
    if (!error.ok()) return error;
  }
  return map;
}

bool IsCollisionFree(const CandidateMap& map, const RapporParams& params) {
  std::unordered_set<int64_t> used;
  for (const auto& row : map.positions) {
    for (size_t c = 0; c < static_cast<size_t>(params.m); ++c) {
      std::vector<int64_t> bits(
          row.begin() + static_cast<std::ptrdiff_t>(c * params.h),
          row.begin() + static_cast<std::ptrdiff_t>((c + 1) * params.h));
      std::sort(bits.begin(), bits.end());
      if (std::adjacent_find(bits.begin(), bits.end()) != bits.end()) {
        return false;
      }
      for (int64_t position : bits) {
        if (!used.insert(position).second) return false;
      }
    }
  }
  return true;
}

std::string FormatMapCsv(const CandidateMap& map) {
  std::string content;
  for (size_t s = 0; s < map.candidates.size(); ++s) {
    content.append(map.candidates[s]);
    for (int64_t position : map.positions[s]) {
      absl::StrAppend(&content, ",", position);
    }
    content.push_back('\n');
  }
  return content;
}

absl::Status WriteMapCsv(const CandidateMap& map, const std::string& path) {
  return WriteTextFile(path, FormatMapCsv(map));
}

absl::StatusOr<CandidateMap> ParseMapLines(
    const std::vector<std::string>& lines, const RapporParams& params) {
  const size_t arity =
      static_cast<size_t>(params.m) * static_cast<size_t>(params.h);
  const int64_t max_position = static_cast<int64_t>(params.m) * params.k;
  CandidateMap map;
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t line_no = i + 1;
    const auto fields = SplitFields(lines[i]);
    if (fields.size() != arity + 1) {
      return MakeError(
          ErrorKind::kMalformedRow,
          absl::StrFormat("line %d: expected %d positions, found %d", line_no,
                          arity, fields.size() - 1));
    }
    if (fields[0].empty()) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: empty candidate", line_no));
    }
    std::vector<int64_t> row;
    row.reserve(arity);
    for (size_t j = 1; j < fields.size(); ++j) {
      auto position = ParseInt64(fields[j]);
      if (!position || *position < 1 || *position > max_position) {
        return MakeError(
            ErrorKind::kMalformedRow,
            absl::StrFormat("line %d: position '%s' not in [1,%d]", line_no,
                            std::string(fields[j]), max_position));
      }
      row.push_back(*position);
    }
    map.candidates.emplace_back(fields[0]);
    map.positions.push_back(std::move(row));
  }
  if (map.candidates.empty()) {
    return MakeError(ErrorKind::kEmptyCandidateList, "map has no rows");
  }
  return map;
}

absl::StatusOr<CandidateMap> ReadMapCsv(const std::string& path,
                                        const RapporParams& params) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  return ParseMapLines(lines, params);
}

}  // namespace rappor
