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

#ifndef RAPPOR_CSV_H_
#define RAPPOR_CSV_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace rappor {

// Small text helpers shared by every CSV reader and writer. Files are plain
// comma-separated text with LF line endings and no quoting.

// Reads a whole file and splits it into lines. A trailing CR on a line is
// dropped; a final empty line after the last LF is not reported.
absl::StatusOr<std::vector<std::string>> ReadLines(const std::string& path);

absl::Status WriteTextFile(const std::string& path, std::string_view content);

std::vector<std::string_view> SplitFields(std::string_view line);

// Shortest decimal form that parses back to the same double ("0.75", "1e-09",
// "inf").
std::string FormatDouble(double value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<int64_t> ParseInt64(std::string_view text);
std::optional<uint64_t> ParseUint64(std::string_view text);

}  // namespace rappor

#endif  // RAPPOR_CSV_H_
