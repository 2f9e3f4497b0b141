// Copyright 2026 The Spanlink Authors.
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

#ifndef SPANLINK_TEXT_H_
#define SPANLINK_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spanlink {

// Letters, digits and any byte of a multi-byte UTF-8 sequence.
inline bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline bool IsSpaceByte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string AsciiLower(std::string_view s);

// Canonical form shared by the lexicon and the matcher: ASCII lowercase,
// every non-word byte turned into a separator, runs of separators collapsed
// into one space, no leading or trailing space.
std::string NormalizeName(std::string_view s);

std::vector<std::string> Split(std::string_view s, char sep);

std::string_view Trim(std::string_view s);

uint64_t Fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL);

std::string HexDigest(uint64_t h);

}  // namespace spanlink

#endif  // SPANLINK_TEXT_H_
