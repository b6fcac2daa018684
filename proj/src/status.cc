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

#include "rappor/status.h"

#include <array>
#include <utility>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace rappor {
namespace {

constexpr std::array<std::pair<ErrorKind, std::string_view>, 18> kNames = {{
    {ErrorKind::kNone, "None"},
    {ErrorKind::kInvalidParams, "InvalidParams"},
    {ErrorKind::kDegenerateNoise, "DegenerateNoise"},
    {ErrorKind::kNoMatch, "NoMatch"},
    {ErrorKind::kEmptyValue, "EmptyValue"},
    {ErrorKind::kDuplicateCandidate, "DuplicateCandidate"},
    {ErrorKind::kEmptyCandidateList, "EmptyCandidateList"},
    {ErrorKind::kMalformedRow, "MalformedRow"},
    {ErrorKind::kCohortOutOfRange, "CohortOutOfRange"},
    {ErrorKind::kBitLengthMismatch, "BitLengthMismatch"},
    {ErrorKind::kShapeMismatch, "ShapeMismatch"},
    {ErrorKind::kInvariantViolation, "InvariantViolation"},
    {ErrorKind::kMaxIterations, "MaxIterations"},
    {ErrorKind::kEmptyDataset, "EmptyDataset"},
    {ErrorKind::kInsufficientUsers, "InsufficientUsers"},
    {ErrorKind::kInsufficientReports, "InsufficientReports"},
    {ErrorKind::kIo, "Io"},
    {ErrorKind::kUnknown, "Unknown"},
}};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNone:
      return absl::StatusCode::kOk;
    case ErrorKind::kDegenerateNoise:
    case ErrorKind::kInsufficientUsers:
    case ErrorKind::kInsufficientReports:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kNoMatch:
      return absl::StatusCode::kNotFound;
    case ErrorKind::kMaxIterations:
    case ErrorKind::kUnknown:
      return absl::StatusCode::kInternal;
    case ErrorKind::kIo:
      return absl::StatusCode::kUnavailable;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, std::string_view detail) {
  if (kind == ErrorKind::kNone) return absl::OkStatus();
  const std::string name(ErrorKindName(kind));
  absl::Status status(CodeFor(kind),
                      absl::StrCat(name, ": ", std::string(detail)));
  status.SetPayload(kErrorKindUrl, absl::Cord(name));
  return status;
}

absl::Status Annotate(const absl::Status& status, std::string_view context) {
  if (status.ok()) return status;
  absl::Status annotated(
      status.code(),
      absl::StrCat(std::string(context), ": ", status.message()));
  if (auto payload = status.GetPayload(kErrorKindUrl); payload.has_value()) {
    annotated.SetPayload(kErrorKindUrl, *payload);
  }
  return annotated;
}

ErrorKind GetErrorKind(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kNone;
  auto payload = status.GetPayload(kErrorKindUrl);
  if (!payload.has_value()) return ErrorKind::kUnknown;
  const std::string name(*payload);
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return ErrorKind::kUnknown;
}

}  // namespace rappor
