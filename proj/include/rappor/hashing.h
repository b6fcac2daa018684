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

#ifndef RAPPOR_HASHING_H_
#define RAPPOR_HASHING_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace rappor {

using Digest = std::array<uint8_t, 32>;

// Field separator used inside hash preimages.
inline constexpr char kUnitSeparator = '\x1f';

Digest Sha256(std::string_view bytes);

void AppendLe32(std::string* out, uint32_t value);
void AppendLe64(std::string* out, uint64_t value);

// Little-endian integer read from the first 4 / 8 bytes of a digest.
uint32_t DigestLe32(const Digest& digest);
uint64_t DigestLe64(const Digest& digest);

// Independent 64-bit seed for a named sub-stream of `seed`:
// LE64(SHA-256(tag || 0x1F || LE64(seed))).
uint64_t DeriveSeed(uint64_t seed, std::string_view tag);

std::string HexEncode(std::string_view bytes);

}  // namespace rappor

#endif  // RAPPOR_HASHING_H_
