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

#include "rappor/bit_vector.h"

#include <bit>

#include "rappor/status.h"

namespace rappor {

BitVector::BitVector(int size)
    : size_(size), words_(static_cast<size_t>((size + 63) / 64), 0) {}

int BitVector::Popcount() const {
  int total = 0;
  for (uint64_t word : words_) total += std::popcount(word);
  return total;
}

std::string BitVector::ToString() const {
  std::string text(static_cast<size_t>(size_), '0');
  for (int i = 0; i < size_; ++i) {
    if (Get(i)) text[static_cast<size_t>(size_ - 1 - i)] = '1';
  }
  return text;
}

absl::StatusOr<BitVector> BitVector::FromString(std::string_view text) {
  BitVector bits(static_cast<int>(text.size()));
  const int n = bits.size();
  for (int pos = 0; pos < n; ++pos) {
    const char c = text[static_cast<size_t>(pos)];
    if (c != '0' && c != '1') {
      return MakeError(ErrorKind::kMalformedRow,
                       "bit strings may only contain '0' and '1'");
    }
    if (c == '1') bits.Set(n - 1 - pos, true);
  }
  return bits;
}

}  // namespace rappor
