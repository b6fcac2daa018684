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

#include "rappor/grid_config.h"

#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "rappor/csv.h"
#include "rappor/status.h"

namespace rappor {
namespace {

struct Entry {
  std::string value;
  size_t line = 0;
};

using Section = std::map<std::string, Entry>;

absl::Status LineError(size_t line, const std::string& detail) {
  return MakeError(ErrorKind::kInvalidParams,
                   absl::StrCat("line ", line, ": ", detail));
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  for (absl::string_view piece : absl::StrSplit(text, ',')) {
    std::string item(absl::StripAsciiWhitespace(piece));
    if (!item.empty()) items.push_back(std::move(item));
  }
  return items;
}

class Reader {
 public:
  explicit Reader(const Section& section) : section_(section) {}

  const Entry* Find(const std::string& key) const {
    auto it = section_.find(key);
    return it == section_.end() ? nullptr : &it->second;
  }

  absl::Status Double(const std::string& key, double* out) const {
    const Entry* e = Find(key);
    if (e == nullptr) return absl::OkStatus();
    auto v = ParseDouble(e->value);
    if (!v) return LineError(e->line, absl::StrCat(key, ": not a number"));
    *out = *v;
    return absl::OkStatus();
  }

  absl::Status Int(const std::string& key, int* out) const {
    int64_t wide = *out;
    RAPPOR_RETURN_IF_ERROR(Int64(key, &wide));
    *out = static_cast<int>(wide);
    return absl::OkStatus();
  }

  absl::Status Int64(const std::string& key, int64_t* out) const {
    const Entry* e = Find(key);
    if (e == nullptr) return absl::OkStatus();
    auto v = ParseInt64(e->value);
    if (!v) {
      return LineError(e->line, absl::StrCat(key, ": not an integer"));
    }
    *out = *v;
    return absl::OkStatus();
  }

  absl::Status Bool(const std::string& key, bool* out) const {
    const Entry* e = Find(key);
    if (e == nullptr) return absl::OkStatus();
    if (e->value == "true" || e->value == "1") {
      *out = true;
    } else if (e->value == "false" || e->value == "0") {
      *out = false;
    } else {
      return LineError(e->line, absl::StrCat(key, ": expected true or false"));
    }
    return absl::OkStatus();
  }

 private:
  const Section& section_;
};

// "value" or "min:max:step".
absl::Status ParseAxis(const Reader& reader, const std::string& key,
                       double* min, double* max, double* step) {
  const Entry* e = reader.Find(key);
  if (e == nullptr) return absl::OkStatus();
  std::vector<std::string> parts = absl::StrSplit(e->value, ':');
  std::vector<double> values;
  for (const std::string& part : parts) {
    auto v = ParseDouble(std::string(absl::StripAsciiWhitespace(part)));
    if (!v) return LineError(e->line, absl::StrCat(key, ": bad axis"));
    values.push_back(*v);
  }
  if (values.size() == 1) {
    *min = *max = values[0];
  } else if (values.size() == 3 && values[2] > 0 && values[0] <= values[1]) {
    *min = values[0];
    *max = values[1];
    *step = values[2];
  } else {
    return LineError(e->line, absl::StrCat(key, ": expected v or min:max:step"));
  }
  return absl::OkStatus();
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

const std::set<std::string>& TopLevelKeys() {
  static const auto* keys = new std::set<std::string>{
      "populations", "seeds", "epsilons", "k", "h", "m", "mode", "alpha",
      "min_reports", "scaling", "margin", "candidates", "zipf_exponent",
      "dataset", "client_column", "value_column", "has_header",
      "reports_per_user", "uniques", "secrets", "audit", "search_f",
      "search_p", "search_q", "search_tolerance"};
  return *keys;
}

const std::set<std::string>& ScenarioKeys() {
  static const auto* keys = new std::set<std::string>{
      "epsilon", "f", "p", "q", "h", "k", "m", "params_file"};
  return *keys;
}

}  // namespace

absl::StatusOr<std::vector<uint64_t>> ParseSeedList(const std::string& text) {
  std::vector<uint64_t> seeds;
  for (const std::string& item : SplitList(text)) {
    auto v = ParseUint64(item);
    if (!v) {
      return MakeError(ErrorKind::kInvalidParams,
                       absl::StrCat("bad seed '", item, "'"));
    }
    seeds.push_back(*v);
  }
  if (seeds.empty()) {
    return MakeError(ErrorKind::kInvalidParams, "empty seed list");
  }
  return seeds;
}

absl::StatusOr<GridSpec> ParseGridConfig(const std::string& text,
                                         const std::string& base_dir) {
  Section top;
  std::vector<Section> scenarios;
  size_t line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    std::string line(raw);
    if (const size_t hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    line = std::string(absl::StripAsciiWhitespace(line));
    if (line.empty()) continue;
    if (line == "[scenario]") {
      scenarios.emplace_back();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      return LineError(line_no, "expected key = value");
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    const bool in_scenario = !scenarios.empty();
    const auto& allowed = in_scenario ? ScenarioKeys() : TopLevelKeys();
    if (!allowed.count(key)) {
      return LineError(line_no, absl::StrCat("unknown key '", key, "'"));
    }
    Section& section = in_scenario ? scenarios.back() : top;
    if (section.count(key)) {
      return LineError(line_no, absl::StrCat("duplicate key '", key, "'"));
    }
    section[key] = {value, line_no};
  }

  GridSpec grid;
  const Reader reader(top);

  const Entry* populations = reader.Find("populations");
  if (populations == nullptr) {
    return MakeError(ErrorKind::kInvalidParams, "populations is required");
  }
  for (const std::string& item : SplitList(populations->value)) {
    auto v = ParseInt64(item);
    if (!v || *v < 1) {
      return LineError(populations->line, absl::StrCat("bad population '",
                                                       item, "'"));
    }
    grid.populations.push_back(*v);
  }
  if (const Entry* seeds = reader.Find("seeds")) {
    auto parsed = ParseSeedList(seeds->value);
    if (!parsed.ok()) return Annotate(parsed.status(), "seeds");
    grid.seeds = *parsed;
  } else {
    grid.seeds = {1, 2, 3, 4, 5};
  }

  RapporParams shape;
  RAPPOR_RETURN_IF_ERROR(reader.Int("k", &shape.k));
  RAPPOR_RETURN_IF_ERROR(reader.Int("h", &shape.h));
  RAPPOR_RETURN_IF_ERROR(reader.Int("m", &shape.m));

  if (const Entry* mode = reader.Find("mode")) {
    auto parsed = ParseEncoderMode(mode->value);
    if (!parsed.ok()) return LineError(mode->line, "unknown mode");
    grid.mode = *parsed;
  }
  RAPPOR_RETURN_IF_ERROR(reader.Double("alpha", &grid.decode.alpha));
  RAPPOR_RETURN_IF_ERROR(reader.Int64("min_reports", &grid.decode.min_reports));
  if (const Entry* scaling = reader.Find("scaling")) {
    if (scaling->value == "uniform") {
      grid.decode.scaling = CohortScaling::kUniform;
    } else if (scaling->value == "per-cohort") {
      grid.decode.scaling = CohortScaling::kPerCohortWeighted;
    } else {
      return LineError(scaling->line, "scaling: uniform or per-cohort");
    }
  }
  RAPPOR_RETURN_IF_ERROR(reader.Double("margin", &grid.margin));
  RAPPOR_RETURN_IF_ERROR(reader.Int("candidates", &grid.dataset.num_candidates));
  RAPPOR_RETURN_IF_ERROR(
      reader.Double("zipf_exponent", &grid.dataset.zipf_exponent));
  if (const Entry* dataset = reader.Find("dataset")) {
    grid.dataset.path = Resolve(base_dir, dataset->value);
  }
  if (const Entry* uniques = reader.Find("uniques")) {
    grid.dataset.uniques_path = Resolve(base_dir, uniques->value);
  }
  RAPPOR_RETURN_IF_ERROR(
      reader.Int("client_column", &grid.dataset.client_column));
  RAPPOR_RETURN_IF_ERROR(reader.Int("value_column", &grid.dataset.value_column));
  RAPPOR_RETURN_IF_ERROR(reader.Bool("has_header", &grid.dataset.has_header));
  RAPPOR_RETURN_IF_ERROR(
      reader.Int("reports_per_user", &grid.dataset.reports_per_user));
  RAPPOR_RETURN_IF_ERROR(reader.Bool("secrets", &grid.write_secrets));
  RAPPOR_RETURN_IF_ERROR(reader.Bool("audit", &grid.retain_audit));

  const Entry* epsilons = reader.Find("epsilons");
  if (epsilons != nullptr && !scenarios.empty()) {
    return LineError(epsilons->line,
                     "use either epsilons or [scenario] blocks, not both");
  }
  if (epsilons == nullptr && scenarios.empty()) {
    return MakeError(ErrorKind::kInvalidParams,
                     "no epsilons and no [scenario] blocks");
  }

  if (epsilons != nullptr) {
    ParamGrid search;
    search.k = shape.k;
    search.h = shape.h;
    search.m = shape.m;
    RAPPOR_RETURN_IF_ERROR(ParseAxis(reader, "search_f", &search.f_min,
                                     &search.f_max, &search.f_step));
    RAPPOR_RETURN_IF_ERROR(ParseAxis(reader, "search_p", &search.p_min,
                                     &search.p_max, &search.p_step));
    RAPPOR_RETURN_IF_ERROR(ParseAxis(reader, "search_q", &search.q_min,
                                     &search.q_max, &search.q_step));
    double tolerance = 0.1;
    RAPPOR_RETURN_IF_ERROR(reader.Double("search_tolerance", &tolerance));
    for (const std::string& label : SplitList(epsilons->value)) {
      auto target = ParseDouble(label);
      if (!target || !(*target > 0)) {
        return LineError(epsilons->line,
                         absl::StrCat("bad epsilon '", label, "'"));
      }
      auto matches = FindParams(*target, search, tolerance);
      if (!matches.ok()) {
        return Annotate(matches.status(), absl::StrCat("epsilon ", label));
      }
      grid.epsilons.push_back({label, matches->front().params});
    }
  }

  for (const Section& section : scenarios) {
    const Reader block(section);
    const Entry* label = block.Find("epsilon");
    if (label == nullptr) {
      const size_t line = section.empty() ? line_no : section.begin()->second.line;
      return LineError(line, "[scenario] needs an epsilon label");
    }
    RapporParams params = shape;
    if (const Entry* file = block.Find("params_file")) {
      for (const char* key : {"f", "p", "q", "h", "k", "m"}) {
        if (block.Find(key)) {
          return LineError(file->line,
                           "params_file cannot be combined with f/p/q/h/k/m");
        }
      }
      auto loaded = ReadParamsCsv(Resolve(base_dir, file->value));
      if (!loaded.ok()) return Annotate(loaded.status(), file->value);
      params = *loaded;
    } else {
      RAPPOR_RETURN_IF_ERROR(block.Double("f", &params.f));
      RAPPOR_RETURN_IF_ERROR(block.Double("p", &params.p));
      RAPPOR_RETURN_IF_ERROR(block.Double("q", &params.q));
      RAPPOR_RETURN_IF_ERROR(block.Int("h", &params.h));
      RAPPOR_RETURN_IF_ERROR(block.Int("k", &params.k));
      RAPPOR_RETURN_IF_ERROR(block.Int("m", &params.m));
    }
    auto valid = Validate(params);
    if (!valid.ok()) {
      return Annotate(valid.status(), absl::StrCat("line ", label->line));
    }
    grid.epsilons.push_back({label->value, params});
  }
  return grid;
}

absl::StatusOr<GridSpec> LoadGridConfig(const std::string& path) {
  RAPPOR_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadLines(path));
  std::string text;
  for (const std::string& line : lines) absl::StrAppend(&text, line, "\n");
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();
  auto grid = ParseGridConfig(text, base_dir);
  if (!grid.ok()) return Annotate(grid.status(), path);
  return grid;
}

}  // namespace rappor
