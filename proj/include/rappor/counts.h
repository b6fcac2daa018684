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

#ifndef RAPPOR_COUNTS_H_
#define RAPPOR_COUNTS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rappor/bit_vector.h"
#include "rappor/encoder.h"
#include "rappor/params.h"

namespace rappor {

// Per-cohort report totals n_j and set-bit counts c[j][i].
// Invariant: 0 <= c[j][i] <= n_j.
class CountsMatrix {
 public:
  CountsMatrix() = default;
  CountsMatrix(int k, int m);

  // InvariantViolation if any count is negative or exceeds its cohort total;
  // ShapeMismatch if the vectors do not have m and m*k entries.
  static absl::StatusOr<CountsMatrix> FromData(
      int k, int m, std::vector<int64_t> report_counts,
      std::vector<int64_t> bit_counts);

  int k() const { return k_; }
  int m() const { return m_; }

  int64_t report_count(int cohort) const { return report_counts_[cohort]; }
  int64_t bit_count(int cohort, int bit) const {
    return bit_counts_[static_cast<size_t>(cohort) * k_ + bit];
  }
  int64_t total_reports() const;

  const std::vector<int64_t>& report_counts() const { return report_counts_; }
  // Row-major m x k.
  const std::vector<int64_t>& bit_counts() const { return bit_counts_; }

  // Caller guarantees cohort < m and irr.size() == k.
  void AddReport(int cohort, const BitVector& irr);

  // Elementwise sum; caller guarantees equal shapes.
  void AddAll(const CountsMatrix& other);

  bool operator==(const CountsMatrix&) const = default;

 private:
  int k_ = 0;
  int m_ = 0;
  std::vector<int64_t> report_counts_;
  std::vector<int64_t> bit_counts_;
};

// Errors: CohortOutOfRange, BitLengthMismatch. Workers fold private matrices
// that are summed at the end, so the result does not depend on `threads`.
absl::StatusOr<CountsMatrix> Accumulate(std::span<const Report> reports,
                                        const RapporParams& params,
                                        int threads = 1);

// ShapeMismatch unless both share (k, m).
absl::StatusOr<CountsMatrix> Merge(const CountsMatrix& a,
                                   const CountsMatrix& b);

// counts.csv: headerless, m rows of k+1 integers (n_j then c[j][0..k)).
std::string FormatCountsCsv(const CountsMatrix& counts);
absl::Status WriteCountsCsv(const CountsMatrix& counts,
                            const std::string& path);
absl::StatusOr<CountsMatrix> ParseCountsLines(
    const std::vector<std::string>& lines, const RapporParams& params);
absl::StatusOr<CountsMatrix> ReadCountsCsv(const std::string& path,
                                           const RapporParams& params);

}  // namespace rappor

#endif  // RAPPOR_COUNTS_H_
