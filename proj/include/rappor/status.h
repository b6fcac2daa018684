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

#ifndef RAPPOR_STATUS_H_
#define RAPPOR_STATUS_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace rappor {

// Every error produced by this library is an absl::Status whose payload under
// kErrorKindUrl names one of the kinds below. The message is prefixed with
// "<Kind>: " so command-line users see the same name.
enum class ErrorKind {
  kNone,
  kInvalidParams,
  kDegenerateNoise,
  kNoMatch,
  kEmptyValue,
  kDuplicateCandidate,
  kEmptyCandidateList,
  kMalformedRow,
  kCohortOutOfRange,
  kBitLengthMismatch,
  kShapeMismatch,
  kInvariantViolation,
  kMaxIterations,
  kEmptyDataset,
  kInsufficientUsers,
  kInsufficientReports,
  kIo,
  kUnknown,
};

inline constexpr char kErrorKindUrl[] = "rappor.error";

std::string_view ErrorKindName(ErrorKind kind);

// Builds a status of the given kind. The absl status code is picked from the
// kind (kInvalidArgument for bad inputs, kFailedPrecondition for numerical
// degeneracy, kNotFound for empty searches, kInternal for solver failures).
absl::Status MakeError(ErrorKind kind, std::string_view detail);

// Prepends context to the message, keeping the code and the error kind.
absl::Status Annotate(const absl::Status& status, std::string_view context);

// Returns kNone for OK statuses and kUnknown for statuses created elsewhere.
ErrorKind GetErrorKind(const absl::Status& status);

}  // namespace rappor

#define RAPPOR_STATUS_CONCAT_INNER_(a, b) a##b
#define RAPPOR_STATUS_CONCAT_(a, b) RAPPOR_STATUS_CONCAT_INNER_(a, b)

#define RAPPOR_RETURN_IF_ERROR(expr)          \
  do {                                        \
    absl::Status rappor_status_ = (expr);     \
    if (!rappor_status_.ok()) {               \
      return rappor_status_;                  \
    }                                         \
  } while (false)

#define RAPPOR_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) {                                    \
    return tmp.status();                              \
  }                                                   \
  lhs = std::move(tmp).value()

#define RAPPOR_ASSIGN_OR_RETURN(lhs, expr) \
  RAPPOR_ASSIGN_OR_RETURN_IMPL_(           \
      RAPPOR_STATUS_CONCAT_(rappor_statusor_, __LINE__), lhs, expr)

#endif  // RAPPOR_STATUS_H_
