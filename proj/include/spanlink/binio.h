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

#ifndef SPANLINK_BINIO_H_
#define SPANLINK_BINIO_H_

// Little-endian binary streams used by the index, checkpoint and embedding
// file formats.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spanlink {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream &out) : out_(out) {}

  void Magic(std::string_view magic) { Raw(magic.data(), magic.size()); }
  void U32(uint32_t v) { Raw(&v, sizeof(v)); }
  void U64(uint64_t v) { Raw(&v, sizeof(v)); }
  void F64(double v) { Raw(&v, sizeof(v)); }
  void String(std::string_view s);
  void Doubles(std::span<const double> v);
  void Floats(std::span<const float> v);
  void Raw(const void *data, size_t size);

 private:
  std::ostream &out_;
};

// Throws DataError on truncated input or a wrong magic.
class BinaryReader {
 public:
  BinaryReader(std::istream &in, std::string what)
      : in_(in), what_(std::move(what)) {}

  void ExpectMagic(std::string_view magic);
  uint32_t U32();
  uint64_t U64();
  double F64();
  std::string String();
  std::vector<double> Doubles();
  std::vector<float> Floats();
  void Raw(void *data, size_t size);
  bool AtEof();

 private:
  std::istream &in_;
  std::string what_;
};

}  // namespace spanlink

#endif  // SPANLINK_BINIO_H_
