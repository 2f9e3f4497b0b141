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

#include "spanlink/encoder.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "spanlink/binio.h"
#include "spanlink/errors.h"
#include "spanlink/kernels.h"
#include "spanlink/text.h"

namespace spanlink {

namespace {

constexpr std::string_view kEmbeddingMagic = "SLEM";
constexpr uint32_t kEmbeddingVersion = 1;

std::string KeyName(const SentenceKey &key) {
  return key.doc_id + "#" + std::to_string(key.sentence_index);
}

// [first, last] neighbourhood of token t.
std::pair<size_t, size_t> Window(size_t t, size_t n, size_t radius) {
  size_t first = t >= radius ? t - radius : 0;
  size_t last = std::min(n - 1, t + radius);
  return {first, last};
}

}  // namespace

HashedSubwordEncoder::HashedSubwordEncoder(const EncoderConfig &config,
                                           uint64_t seed)
    : config_(config), table_(config.buckets, config.dim) {
  if (config.dim == 0 || config.buckets == 0) {
    throw ValidationError("encoder dim and bucket count must be positive");
  }
  if (config.min_ngram < 1 || config.max_ngram < config.min_ngram) {
    throw ValidationError("bad encoder n-gram range");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (double &x : table_.data) x = normal(rng);
}

std::vector<uint32_t> HashedSubwordEncoder::Buckets(
    std::string_view token) const {
  std::string word = "<" + AsciiLower(token) + ">";
  std::vector<uint32_t> ids;
  auto add = [&](std::string_view piece) {
    ids.push_back(static_cast<uint32_t>(Fnv1a64(piece) % config_.buckets));
  };
  add(word);
  for (int n = config_.min_ngram; n <= config_.max_ngram; ++n) {
    size_t len = static_cast<size_t>(n);
    if (word.size() <= len) break;
    for (size_t i = 0; i + len <= word.size(); ++i) {
      add(std::string_view(word).substr(i, len));
    }
  }
  return ids;
}

Matrix HashedSubwordEncoder::Encode(const SentenceKey & /*key*/,
                                    const Sentence &sentence) const {
  const size_t n = sentence.tokens.size();
  const size_t d = config_.dim;
  if (n == 0) throw ValidationError("cannot encode an empty sentence");
  Matrix token_rows(n, d);
  for (size_t t = 0; t < n; ++t) {
    std::vector<uint32_t> ids = Buckets(sentence.tokens[t].text);
    const double scale = 1.0 / static_cast<double>(ids.size());
    for (uint32_t b : ids) kernels::Axpy(scale, table_.row(b), token_rows.row(t));
  }
  const double alpha = config_.self_weight;
  Matrix out(n, d);
  for (size_t t = 0; t < n; ++t) {
    auto [first, last] = Window(t, n, config_.window);
    const double scale = (1.0 - alpha) / static_cast<double>(last - first + 1);
    kernels::Axpy(alpha, token_rows.row(t), out.row(t));
    for (size_t u = first; u <= last; ++u) {
      kernels::Axpy(scale, token_rows.row(u), out.row(t));
    }
  }
  return out;
}

void HashedSubwordEncoder::Backward(const Sentence &sentence,
                                    const Matrix &d_output,
                                    TableGradient *grad) const {
  const size_t n = sentence.tokens.size();
  const size_t d = config_.dim;
  const double alpha = config_.self_weight;
  Matrix d_tokens(n, d);
  for (size_t t = 0; t < n; ++t) {
    auto [first, last] = Window(t, n, config_.window);
    const double scale = (1.0 - alpha) / static_cast<double>(last - first + 1);
    kernels::Axpy(alpha, d_output.row(t), d_tokens.row(t));
    for (size_t u = first; u <= last; ++u) {
      kernels::Axpy(scale, d_output.row(t), d_tokens.row(u));
    }
  }
  for (size_t t = 0; t < n; ++t) {
    std::vector<uint32_t> ids = Buckets(sentence.tokens[t].text);
    const double scale = 1.0 / static_cast<double>(ids.size());
    for (uint32_t b : ids) {
      std::vector<double> &row = (*grad)[b];
      if (row.empty()) row.assign(d, 0.0);
      kernels::Axpy(scale, d_tokens.row(t), row);
    }
  }
}

void EmbeddingStore::Put(const SentenceKey &key, const Matrix &rows) {
  if (rows.cols != dim_) {
    throw ValidationError("embedding width " + std::to_string(rows.cols) +
                          " differs from store width " + std::to_string(dim_));
  }
  std::vector<float> values(rows.data.size());
  for (size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<float>(rows.data[i]);
    if (!std::isfinite(values[i])) {
      throw NumericError("non-finite embedding for " + KeyName(key));
    }
  }
  records_[key] = {rows.rows, std::move(values)};
}

Matrix EmbeddingStore::Get(const SentenceKey &key, size_t expected_rows) const {
  auto it = records_.find(key);
  if (it == records_.end()) {
    throw DataError("no precomputed embeddings for sentence " + KeyName(key));
  }
  const auto &[rows, values] = it->second;
  if (rows != expected_rows) {
    throw DataError("precomputed embeddings for sentence " + KeyName(key) +
                    " have " + std::to_string(rows) + " rows but the sentence has " +
                    std::to_string(expected_rows) + " tokens");
  }
  Matrix m(rows, dim_);
  for (size_t i = 0; i < values.size(); ++i) m.data[i] = values[i];
  return m;
}

void EmbeddingStore::Write(std::ostream &out) const {
  BinaryWriter w(out);
  w.Magic(kEmbeddingMagic);
  w.U32(kEmbeddingVersion);
  w.U32(static_cast<uint32_t>(dim_));
  w.U64(records_.size());
  for (const auto &[key, record] : records_) {
    w.String(key.doc_id);
    w.U32(static_cast<uint32_t>(key.sentence_index));
    w.U32(static_cast<uint32_t>(record.first));
    w.Raw(record.second.data(), record.second.size() * sizeof(float));
  }
}

EmbeddingStore EmbeddingStore::Read(std::istream &in) {
  BinaryReader r(in, "embedding file");
  r.ExpectMagic(kEmbeddingMagic);
  uint32_t version = r.U32();
  if (version != kEmbeddingVersion) {
    throw DataError("embedding file version " + std::to_string(version) +
                    " is not supported");
  }
  EmbeddingStore store(r.U32());
  if (store.dim_ == 0) throw DataError("embedding file has zero width");
  uint64_t count = r.U64();
  for (uint64_t i = 0; i < count; ++i) {
    SentenceKey key;
    key.doc_id = r.String();
    key.sentence_index = r.U32();
    size_t rows = r.U32();
    std::vector<float> values(rows * store.dim_);
    r.Raw(values.data(), values.size() * sizeof(float));
    store.records_[key] = {rows, std::move(values)};
  }
  return store;
}

}  // namespace spanlink
