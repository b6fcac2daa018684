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

#include "rappor/encoder.h"

#include <algorithm>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rappor/csv.h"
#include "rappor/hashing.h"
#include "rappor/parallel.h"
#include "rappor/status.h"

namespace rappor {
namespace {

constexpr std::array<std::pair<EncoderMode, std::string_view>, 4> kModeNames =
    {{
        {EncoderMode::kStandard, "standard"},
        {EncoderMode::kOneTime, "one-time"},
        {EncoderMode::kBasic, "basic"},
        {EncoderMode::kBasicOneTime, "basic-one-time"},
    }};

// Exact test of LE64(digest) / 2^64 < threshold. long double holds every
// 64-bit integer exactly on the platforms we build for.
bool FractionBelow(uint64_t draw, double threshold) {
  return static_cast<long double>(draw) * 0x1p-64L <
         static_cast<long double>(threshold);
}

}  // namespace

absl::StatusOr<EncoderMode> ParseEncoderMode(std::string_view name) {
  for (const auto& [mode, mode_name] : kModeNames) {
    if (mode_name == name) return mode;
  }
  return MakeError(ErrorKind::kInvalidParams,
                   absl::StrCat("mode: unknown mode '", std::string(name),
                                "' (standard, one-time, basic, basic-one-time)"));
}

std::string_view EncoderModeName(EncoderMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "standard";
}

bool SkipsIrr(EncoderMode mode) {
  return mode == EncoderMode::kOneTime || mode == EncoderMode::kBasicOneTime;
}

RapporParams EffectiveParams(const RapporParams& params, EncoderMode mode) {
  RapporParams effective = params;
  if (SkipsIrr(mode)) {
    effective.p = 0.0;
    effective.q = 1.0;
  }
  return effective;
}

absl::Status CheckModeConstraints(const RapporParams& params,
                                  EncoderMode mode) {
  const bool basic =
      mode == EncoderMode::kBasic || mode == EncoderMode::kBasicOneTime;
  if (basic && params.h != 1) {
    return MakeError(ErrorKind::kInvalidParams,
                     "h: basic modes map each value to a single bit (h = 1)");
  }
  return absl::OkStatus();
}

int AssignCohort(std::string_view client, int m) {
  std::string preimage = "cohort";
  preimage.push_back(kUnitSeparator);
  preimage.append(client);
  return static_cast<int>(DigestLe32(Sha256(preimage)) %
                          static_cast<uint32_t>(m));
}

absl::StatusOr<std::vector<int>> BloomBitIndices(std::string_view value,
                                                 int cohort, int k, int h) {
  if (value.empty()) {
    return MakeError(ErrorKind::kEmptyValue, "cannot encode an empty string");
  }
  std::string preimage;
  preimage.reserve(value.size() + 10);
  AppendLe32(&preimage, static_cast<uint32_t>(cohort));
  preimage.push_back(kUnitSeparator);
  const size_t hash_offset = preimage.size();
  AppendLe32(&preimage, 0);
  preimage.push_back(kUnitSeparator);
  preimage.append(value);

  std::vector<int> indices;
  indices.reserve(static_cast<size_t>(h));
  for (int t = 0; t < h; ++t) {
    for (int b = 0; b < 4; ++b) {
      preimage[hash_offset + b] = static_cast<char>((t >> (8 * b)) & 0xff);
    }
    indices.push_back(static_cast<int>(DigestLe32(Sha256(preimage)) %
                                       static_cast<uint32_t>(k)));
  }
  return indices;
}

absl::StatusOr<BitVector> BloomEncode(std::string_view value, int cohort,
                                      int k, int h) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<int> indices,
                          BloomBitIndices(value, cohort, k, h));
  BitVector bloom(k);
  for (int index : indices) bloom.Set(index, true);
  return bloom;
}

BitVector PermanentRandomizedResponse(const BitVector& bloom, double f,
                                      std::span<const uint8_t> user_secret,
                                      std::string_view value) {
  if (f <= 0.0) return bloom;
  const double half_f = 0.5 * f;

  std::string preimage(user_secret.begin(), user_secret.end());
  preimage.push_back('\0');
  preimage.append(value);
  preimage.push_back('\0');
  const size_t index_offset = preimage.size();
  AppendLe32(&preimage, 0);

  BitVector out(bloom.size());
  for (int i = 0; i < bloom.size(); ++i) {
    for (int b = 0; b < 4; ++b) {
      preimage[index_offset + b] = static_cast<char>((i >> (8 * b)) & 0xff);
    }
    const uint64_t draw = DigestLe64(Sha256(preimage));
    if (FractionBelow(draw, half_f)) {
      out.Set(i, true);
    } else if (FractionBelow(draw, f)) {
      out.Set(i, false);
    } else {
      out.Set(i, bloom.Get(i));
    }
  }
  return out;
}

double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

BitVector InstantaneousRandomizedResponse(const BitVector& prr, double p,
                                          double q, Rng& rng) {
  BitVector out(prr.size());
  for (int i = 0; i < prr.size(); ++i) {
    const double u = UniformDouble(rng);
    out.Set(i, u < (prr.Get(i) ? q : p));
  }
  return out;
}

absl::StatusOr<Report> EncodeReport(std::string_view client,
                                    std::string_view value,
                                    const RapporParams& params,
                                    EncoderMode mode,
                                    std::span<const uint8_t> user_secret,
                                    Rng& rng, bool retain_audit) {
  RAPPOR_RETURN_IF_ERROR(CheckModeConstraints(params, mode));
  Report report;
  report.client = std::string(client);
  report.cohort = AssignCohort(client, params.m);
  RAPPOR_ASSIGN_OR_RETURN(
      BitVector bloom, BloomEncode(value, report.cohort, params.k, params.h));
  BitVector prr =
      PermanentRandomizedResponse(bloom, params.f, user_secret, value);
  report.irr = SkipsIrr(mode) ? prr
                              : InstantaneousRandomizedResponse(
                                    prr, params.p, params.q, rng);
  if (retain_audit) {
    report.bloom = std::move(bloom);
    report.prr = std::move(prr);
  }
  return report;
}

UserSecret DeriveUserSecret(uint64_t master_seed, std::string_view client) {
  std::string preimage = "secret";
  preimage.push_back(kUnitSeparator);
  AppendLe64(&preimage, master_seed);
  preimage.push_back(kUnitSeparator);
  preimage.append(client);
  const Digest digest = Sha256(preimage);
  UserSecret secret;
  std::copy_n(digest.begin(), secret.size(), secret.begin());
  return secret;
}

Rng ReportRng(uint64_t master_seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(master_seed),
                    static_cast<uint32_t>(master_seed >> 32),
                    static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
  return Rng(seq);
}

absl::StatusOr<std::vector<Report>> EncodeRecords(
    std::span<const Record> records, const RapporParams& params,
    EncoderMode mode, uint64_t master_seed, const BatchOptions& options) {
  RAPPOR_RETURN_IF_ERROR(CheckModeConstraints(params, mode));
  std::vector<Report> reports(records.size());
  std::vector<absl::Status> errors(records.size());
  ParallelFor(records.size(), options.threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const Record& record = records[i];
      const UserSecret secret = DeriveUserSecret(master_seed, record.client);
      Rng rng = ReportRng(master_seed, i);
      auto report = EncodeReport(record.client, record.value, params, mode,
                                 secret, rng, options.retain_audit);
      if (report.ok()) {
        reports[i] = std::move(report).value();
      } else {
        errors[i] = report.status();
      }
    }
  });
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].ok()) {
      return Annotate(errors[i], absl::StrCat("record ", i + 1));
    }
  }
  return reports;
}

std::string FormatReportsCsv(std::span<const Report> reports) {
  std::string content = "client,cohort,bloom,prr,irr\n";
  for (const Report& r : reports) {
    absl::StrAppend(&content, r.client, ",", r.cohort, ",",
                    r.bloom ? r.bloom->ToString() : "", ",",
                    r.prr ? r.prr->ToString() : "", ",", r.irr.ToString(),
                    "\n");
  }
  return content;
}

absl::Status WriteReportsCsv(std::span<const Report> reports,
                             const std::string& path) {
  return WriteTextFile(path, FormatReportsCsv(reports));
}

absl::StatusOr<std::vector<Report>> ReadReportsCsv(
    const std::string& path, const RapporParams& params) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  if (lines.empty() || lines[0] != "client,cohort,bloom,prr,irr") {
    return MakeError(ErrorKind::kMalformedRow,
                     "line 1: expected header client,cohort,bloom,prr,irr");
  }
  std::vector<Report> reports;
  reports.reserve(lines.size() - 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = SplitFields(lines[i]);
    const size_t line_no = i + 1;
    if (fields.size() != 5) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: expected 5 fields", line_no));
    }
    Report report;
    report.client = std::string(fields[0]);
    auto cohort = ParseInt64(fields[1]);
    if (!cohort) {
      return MakeError(ErrorKind::kMalformedRow,
                       absl::StrFormat("line %d: bad cohort", line_no));
    }
    if (*cohort < 0 || *cohort >= params.m) {
      return MakeError(ErrorKind::kCohortOutOfRange,
                       absl::StrFormat("line %d: cohort %d not in [0,%d)",
                                       line_no, *cohort, params.m));
    }
    report.cohort = static_cast<int>(*cohort);

    auto parse_bits = [&](std::string_view text) -> absl::StatusOr<BitVector> {
      auto bits = BitVector::FromString(text);
      if (!bits.ok()) {
        return MakeError(ErrorKind::kMalformedRow,
                         absl::StrFormat("line %d: bad bit string", line_no));
      }
      if (bits->size() != params.k) {
        return MakeError(ErrorKind::kBitLengthMismatch,
                         absl::StrFormat("line %d: %d bits, expected %d",
                                         line_no, bits->size(), params.k));
      }
      return bits;
    };
    if (!fields[2].empty()) {
      RAPPOR_ASSIGN_OR_RETURN(report.bloom, parse_bits(fields[2]));
    }
    if (!fields[3].empty()) {
      RAPPOR_ASSIGN_OR_RETURN(report.prr, parse_bits(fields[3]));
    }
    RAPPOR_ASSIGN_OR_RETURN(report.irr, parse_bits(fields[4]));
    reports.push_back(std::move(report));
  }
  return reports;
}

absl::Status WriteTrueValuesCsv(std::span<const Report> reports,
                                std::span<const Record> records,
                                const std::string& path) {
  if (reports.size() != records.size()) {
    return MakeError(ErrorKind::kShapeMismatch,
                     "reports and records differ in length");
  }
  std::string content = "client,cohort,value\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    absl::StrAppend(&content, reports[i].client, ",", reports[i].cohort, ",",
                    records[i].value, "\n");
  }
  return WriteTextFile(path, content);
}

absl::Status WriteSecretsCsv(std::span<const Record> records,
                             uint64_t master_seed, const std::string& path) {
  std::string content = "client,secret\n";
  std::unordered_set<std::string_view> seen;
  for (const Record& record : records) {
    if (!seen.insert(record.client).second) continue;
    const UserSecret secret = DeriveUserSecret(master_seed, record.client);
    absl::StrAppend(
        &content, record.client, ",",
        HexEncode(std::string_view(reinterpret_cast<const char*>(secret.data()),
                                   secret.size())),
        "\n");
  }
  return WriteTextFile(path, content);
}

}  // namespace rappor
