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

#ifndef RAPPOR_GRID_CONFIG_H_
#define RAPPOR_GRID_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rappor/experiment.h"

namespace rappor {

// Grid configuration, one `key = value` per line, '#' starts a comment.
//
// Top-level keys:
//   populations      comma list of population sizes (required)
//   seeds            comma list of seeds (default 1,2,3,4,5)
//   epsilons         comma list of target eps_1 values, each resolved with
//                    FindParams over the search_* axes
//   k, h, m          filter shape (defaults 32, 2, 64)
//   mode             standard | one-time | basic | basic-one-time
//   alpha, min_reports, scaling (uniform | per-cohort), margin
//   candidates, zipf_exponent              synthetic data (150, 1.2)
//   dataset, client_column, value_column, has_header, reports_per_user,
//   uniques                                file data instead of synthetic
//   secrets, audit   booleans controlling secrets.csv and audit columns
//   search_f, search_p, search_q           "value" or "min:max:step"
//                                          (default 0:1:0.05)
//   search_tolerance                       default 0.1
//
// `[scenario]` blocks list explicit settings instead of `epsilons`:
//   epsilon          label (required)
//   f, p, q, h, k, m explicit values, defaulting to the top-level shape
//   params_file      params.csv to load instead
//
// Relative paths are resolved against `base_dir`.
absl::StatusOr<GridSpec> ParseGridConfig(const std::string& text,
                                         const std::string& base_dir);
absl::StatusOr<GridSpec> LoadGridConfig(const std::string& path);

// "1,2,3".
absl::StatusOr<std::vector<uint64_t>> ParseSeedList(const std::string& text);

}  // namespace rappor

#endif  // RAPPOR_GRID_CONFIG_H_
