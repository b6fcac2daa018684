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

#ifndef RAPPOR_BIT_VECTOR_H_
#define RAPPOR_BIT_VECTOR_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/container/inlined_vector.h"
#include "absl/status/statusor.h"

namespace rappor {

// Fixed-length bit array. Filters of up to 64 bits live inline.
//
// Text form is big-endian: the leftmost character is bit size()-1 and the
// rightmost is bit 0.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(int size);

  int size() const { return size_; }

  bool Get(int index) const {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void Set(int index, bool value) {
    const uint64_t mask = uint64_t{1} << (index & 63);
    if (value) {
      words_[index >> 6] |= mask;
    } else {
      words_[index >> 6] &= ~mask;
    }
  }

  int Popcount() const;

  std::string ToString() const;
  static absl::StatusOr<BitVector> FromString(std::string_view text);

  bool operator==(const BitVector& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }

 private:
  int size_ = 0;
  absl::InlinedVector<uint64_t, 1> words_;
};

}  // namespace rappor

#endif  // RAPPOR_BIT_VECTOR_H_
