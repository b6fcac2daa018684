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

#include "rappor/counts.h"

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rappor/csv.h"
#include "rappor/parallel.h"
#include "rappor/status.h"

namespace rappor {

CountsMatrix::CountsMatrix(int k, int m)
    : k_(k),
      m_(m),
      report_counts_(static_cast<size_t>(m), 0),
      bit_counts_(static_cast<size_t>(m) * static_cast<size_t>(k), 0) {}

absl::StatusOr<CountsMatrix> CountsMatrix::FromData(
    int k, int m, std::vector<int64_t> report_counts,
    std::vector<int64_t> bit_counts) {
  if (k < 1 || m < 1 || report_counts.size() != static_cast<size_t>(m) ||
      bit_counts.size() != static_cast<size_t>(m) * static_cast<size_t>(k)) {
    return MakeError(ErrorKind::kShapeMismatch,
                     absl::StrFormat("expected %d cohorts of %d bits", m, k));
  }
  for (int j = 0; j < m; ++j) {
    const int64_t n = report_counts[j];
    if (n < 0) {
      return MakeError(ErrorKind::kInvariantViolation,
                       absl::StrFormat("cohort %d: negative report count", j));
    }
    for (int i = 0; i < k; ++i) {
      const int64_t c = bit_counts[static_cast<size_t>(j) * k + i];
      if (c < 0 || c > n) {
        return MakeError(
            ErrorKind::kInvariantViolation,
            absl::StrFormat("cohort %d bit %d: count %d outside [0,%d]", j, i,
                            c, n));
      }
    }
  }
  CountsMatrix counts;
  counts.k_ = k;
  counts.m_ = m;
  counts.report_counts_ = std::move(report_counts);
  counts.bit_counts_ = std::move(bit_counts);
  return counts;
}

int64_t CountsMatrix::total_reports() const {
  return std::accumulate(report_counts_.begin(), report_counts_.end(),
                         int64_t{0});
}

void CountsMatrix::AddReport(int cohort, const BitVector& irr) {
  ++report_counts_[cohort];
  int64_t* row = &bit_counts_[static_cast<size_t>(cohort) * k_];
  for (int i = 0; i < k_; ++i) row[i] += irr.Get(i) ? 1 : 0;
}

void CountsMatrix::AddAll(const CountsMatrix& other) {
  for (size_t j = 0; j < report_counts_.size(); ++j) {
    report_counts_[j] += other.report_counts_[j];
  }
  for (size_t i = 0; i < bit_counts_.size(); ++i) {
    bit_counts_[i] += other.bit_counts_[i];
  }
}

absl::StatusOr<CountsMatrix> Accumulate(std::span<const Report> reports,
                                        const RapporParams& params,
                                        int threads) {
  for (size_t r = 0; r < reports.size(); ++r) {
    if (reports[r].cohort < 0 || reports[r].cohort >= params.m) {
      return MakeError(ErrorKind::kCohortOutOfRange,
                       absl::StrFormat("report %d: cohort %d not in [0,%d)",
                                       r + 1, reports[r].cohort, params.m));
    }
    if (reports[r].irr.size() != params.k) {
      return MakeError(ErrorKind::kBitLengthMismatch,
                       absl::StrFormat("report %d: %d bits, expected %d", r + 1,
                                       reports[r].irr.size(), params.k));
    }
  }

  const size_t shards = static_cast<size_t>(std::max(threads, 1));
  std::vector<CountsMatrix> partial(shards, CountsMatrix(params.k, params.m));
  const size_t chunk = (reports.size() + shards - 1) / std::max<size_t>(shards, 1);
  ParallelFor(shards, threads, [&](size_t begin, size_t end) {
    for (size_t shard = begin; shard < end; ++shard) {
      const size_t lo = shard * chunk;
      const size_t hi = std::min(reports.size(), lo + chunk);
      for (size_t r = lo; r < hi; ++r) {
        partial[shard].AddReport(reports[r].cohort, reports[r].irr);
      }
    }
  });
  CountsMatrix total(params.k, params.m);
  for (const CountsMatrix& shard : partial) total.AddAll(shard);
  return total;
}

absl::StatusOr<CountsMatrix> Merge(const CountsMatrix& a,
                                   const CountsMatrix& b) {
  if (a.k() != b.k() || a.m() != b.m()) {
    return MakeError(ErrorKind::kShapeMismatch,
                     absl::StrFormat("(k=%d,m=%d) vs (k=%d,m=%d)", a.k(), a.m(),
                                     b.k(), b.m()));
  }
  CountsMatrix sum = a;
  sum.AddAll(b);
  return sum;
}

std::string FormatCountsCsv(const CountsMatrix& counts) {
  std::string content;
  for (int j = 0; j < counts.m(); ++j) {
    absl::StrAppend(&content, counts.report_count(j));
    for (int i = 0; i < counts.k(); ++i) {
      absl::StrAppend(&content, ",", counts.bit_count(j, i));
    }
    content.push_back('\n');
  }
  return content;
}

absl::Status WriteCountsCsv(const CountsMatrix& counts,
                            const std::string& path) {
  return WriteTextFile(path, FormatCountsCsv(counts));
}

absl::StatusOr<CountsMatrix> ParseCountsLines(
    const std::vector<std::string>& lines, const RapporParams& params) {
  if (lines.size() != static_cast<size_t>(params.m)) {
    return MakeError(ErrorKind::kMalformedRow,
                     absl::StrFormat("expected %d rows, found %d", params.m,
                                     lines.size()));
  }
  std::vector<int64_t> report_counts;
  std::vector<int64_t> bit_counts;
  report_counts.reserve(static_cast<size_t>(params.m));
  bit_counts.reserve(static_cast<size_t>(params.m) * params.k);
  for (size_t j = 0; j < lines.size(); ++j) {
    const auto fields = SplitFields(lines[j]);
    if (fields.size() != static_cast<size_t>(params.k) + 1) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: expected %d columns, found %d",
                                       j + 1, params.k + 1, fields.size()));
    }
    for (size_t i = 0; i < fields.size(); ++i) {
      auto value = ParseInt64(fields[i]);
      if (!value) {
        return MakeError(ErrorKind::kMalformedRow,
                         absl::StrFormat("line %d: bad integer '%s'", j + 1,
                                         std::string(fields[i])));
      }
      (i == 0 ? report_counts : bit_counts).push_back(*value);
    }
  }
  return CountsMatrix::FromData(params.k, params.m, std::move(report_counts),
                                std::move(bit_counts));
}

absl::StatusOr<CountsMatrix> ReadCountsCsv(const std::string& path,
                                           const RapporParams& params) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  return ParseCountsLines(lines, params);
}

}  // namespace rappor
