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

#include "spanlink/binio.h"

#include "spanlink/errors.h"

namespace spanlink {

namespace {
// Upper bound on any single length prefix; guards against garbage headers.
constexpr uint64_t kMaxLength = uint64_t{1} << 34;
}  // namespace

void BinaryWriter::Raw(const void *data, size_t size) {
  out_.write(static_cast<const char *>(data),
             static_cast<std::streamsize>(size));
}

void BinaryWriter::String(std::string_view s) {
  U64(s.size());
  Raw(s.data(), s.size());
}

void BinaryWriter::Doubles(std::span<const double> v) {
  U64(v.size());
  Raw(v.data(), v.size_bytes());
}

void BinaryWriter::Floats(std::span<const float> v) {
  U64(v.size());
  Raw(v.data(), v.size_bytes());
}

void BinaryReader::Raw(void *data, size_t size) {
  in_.read(static_cast<char *>(data), static_cast<std::streamsize>(size));
  if (static_cast<size_t>(in_.gcount()) != size) {
    throw DataError(what_ + ": unexpected end of file");
  }
}

void BinaryReader::ExpectMagic(std::string_view magic) {
  std::string got(magic.size(), '\0');
  Raw(got.data(), got.size());
  if (got != magic) {
    throw DataError(what_ + ": bad magic, expected " + std::string(magic));
  }
}

uint32_t BinaryReader::U32() {
  uint32_t v;
  Raw(&v, sizeof(v));
  return v;
}

uint64_t BinaryReader::U64() {
  uint64_t v;
  Raw(&v, sizeof(v));
  return v;
}

double BinaryReader::F64() {
  double v;
  Raw(&v, sizeof(v));
  return v;
}

std::string BinaryReader::String() {
  uint64_t n = U64();
  if (n > kMaxLength) throw DataError(what_ + ": corrupt string length");
  std::string s(n, '\0');
  Raw(s.data(), n);
  return s;
}

std::vector<double> BinaryReader::Doubles() {
  uint64_t n = U64();
  if (n > kMaxLength / sizeof(double)) {
    throw DataError(what_ + ": corrupt array length");
  }
  std::vector<double> v(n);
  Raw(v.data(), n * sizeof(double));
  return v;
}

std::vector<float> BinaryReader::Floats() {
  uint64_t n = U64();
  if (n > kMaxLength / sizeof(float)) {
    throw DataError(what_ + ": corrupt array length");
  }
  std::vector<float> v(n);
  Raw(v.data(), n * sizeof(float));
  return v;
}

bool BinaryReader::AtEof() {
  return in_.peek() == std::char_traits<char>::eof();
}

}  // namespace spanlink
