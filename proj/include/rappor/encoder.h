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

// Client side of RAPPOR: cohort assignment, Bloom filter encoding, the
// permanent randomized response (PRR) and the instantaneous randomized
// response (IRR).
//
// All hashing is SHA-256 over fixed byte layouts (0x1F separates fields,
// integers are little-endian) so that any implementation reproduces the same
// cohorts, Bloom bits and PRR bits:
//
//   cohort  = LE32(SHA-256("cohort" 1F client))                     mod m
//   bit[t]  = LE32(SHA-256(LE32(cohort) 1F LE32(t) 1F value))       mod k
//   u_i     = LE64(SHA-256(secret 00 value 00 LE32(i))) / 2^64
//
// The PRR is a pure function of (secret, value), so a client reporting the
// same value twice reuses the same PRR without storing it. Anyone holding a
// client's secret can run candidate values through it, so secrets must stay
// on the device.

#ifndef RAPPOR_ENCODER_H_
#define RAPPOR_ENCODER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rappor/bit_vector.h"
#include "rappor/datasets.h"
#include "rappor/params.h"

namespace rappor {

enum class EncoderMode {
  kStandard,
  // Single report per client: the IRR stage is skipped (p=0, q=1).
  kOneTime,
  // One hash per value (h must be 1).
  kBasic,
  kBasicOneTime,
};

absl::StatusOr<EncoderMode> ParseEncoderMode(std::string_view name);
std::string_view EncoderModeName(EncoderMode mode);

bool SkipsIrr(EncoderMode mode);

// Parameters as seen by the aggregator: one-time modes report p=0, q=1.
RapporParams EffectiveParams(const RapporParams& params, EncoderMode mode);

// InvalidParams when a basic mode is combined with h != 1.
absl::Status CheckModeConstraints(const RapporParams& params,
                                  EncoderMode mode);

using UserSecret = std::array<uint8_t, 16>;
using Rng = std::mt19937_64;

int AssignCohort(std::string_view client, int m);

// The h bit indices (with repeats on collision) that `value` sets in
// `cohort`'s filter. EmptyValue for "".
absl::StatusOr<std::vector<int>> BloomBitIndices(std::string_view value,
                                                 int cohort, int k, int h);

absl::StatusOr<BitVector> BloomEncode(std::string_view value, int cohort,
                                      int k, int h);

// Bit i becomes 1 when u_i < f/2, 0 when f/2 <= u_i < f, and bloom[i]
// otherwise.
BitVector PermanentRandomizedResponse(const BitVector& bloom, double f,
                                      std::span<const uint8_t> user_secret,
                                      std::string_view value);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double UniformDouble(Rng& rng);

// Each bit is 1 with probability q when the PRR bit is set and p otherwise.
// Draws exactly prr.size() numbers from rng, in bit order.
BitVector InstantaneousRandomizedResponse(const BitVector& prr, double p,
                                          double q, Rng& rng);

struct Report {
  std::string client;
  int cohort = 0;
  std::optional<BitVector> bloom;  // Audit only.
  std::optional<BitVector> prr;    // Audit only.
  BitVector irr;

  bool operator==(const Report&) const = default;
};

// Full client pipeline. `params` must already be validated.
absl::StatusOr<Report> EncodeReport(std::string_view client,
                                    std::string_view value,
                                    const RapporParams& params,
                                    EncoderMode mode,
                                    std::span<const uint8_t> user_secret,
                                    Rng& rng, bool retain_audit = true);

// Per-client secret derived from the run's master seed:
// first 16 bytes of SHA-256("secret" 1F LE64(seed) 1F client).
UserSecret DeriveUserSecret(uint64_t master_seed, std::string_view client);

// Independent IRR stream for report `index` of a run.
Rng ReportRng(uint64_t master_seed, uint64_t index);

struct BatchOptions {
  bool retain_audit = true;
  int threads = 1;
};

// Encodes every record. Report i depends only on (record i, master seed, i),
// so the output is identical for any thread count.
absl::StatusOr<std::vector<Report>> EncodeRecords(
    std::span<const Record> records, const RapporParams& params,
    EncoderMode mode, uint64_t master_seed, const BatchOptions& options = {});

// reports.csv: header "client,cohort,bloom,prr,irr". Audit columns are empty
// when not retained.
std::string FormatReportsCsv(std::span<const Report> reports);
absl::Status WriteReportsCsv(std::span<const Report> reports,
                             const std::string& path);
// BitLengthMismatch / CohortOutOfRange when rows disagree with `params`.
absl::StatusOr<std::vector<Report>> ReadReportsCsv(const std::string& path,
                                                   const RapporParams& params);

// true_values.csv: header "client,cohort,value".
absl::Status WriteTrueValuesCsv(std::span<const Report> reports,
                                std::span<const Record> records,
                                const std::string& path);

// secrets.csv: header "client,secret" with the secret in hex, one row per
// distinct client in first-seen order.
absl::Status WriteSecretsCsv(std::span<const Record> records,
                             uint64_t master_seed, const std::string& path);

}  // namespace rappor

#endif  // RAPPOR_ENCODER_H_
