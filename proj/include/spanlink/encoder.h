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

#ifndef SPANLINK_ENCODER_H_
#define SPANLINK_ENCODER_H_

// Token encoders producing one d-dimensional row per sentence token.
//
// HashedSubwordEncoder is a small trainable stand-in for a pretrained
// transformer: a token is the mean of hashed character n-gram embeddings and
// each output row mixes that token with the mean of its +-w neighbours.
// PrecomputedEncoder serves externally produced vectors (for example pooled
// BERT outputs) from an embedding file.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spanlink/corpus.h"
#include "spanlink/tensor.h"

namespace spanlink {

struct SentenceKey {
  std::string doc_id;
  size_t sentence_index = 0;

  auto operator<=>(const SentenceKey &) const = default;
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual size_t dim() const = 0;
  // sentence.tokens must be non-empty.
  virtual Matrix Encode(const SentenceKey &key,
                        const Sentence &sentence) const = 0;
};

struct EncoderConfig {
  size_t dim = 64;
  size_t window = 2;
  size_t buckets = size_t{1} << 16;
  int min_ngram = 3;
  int max_ngram = 5;
  // Share of the token's own embedding in its output row.
  double self_weight = 0.5;
};

// Sparse gradient for the embedding table, keyed by bucket.
using TableGradient = std::map<uint32_t, std::vector<double>>;

class HashedSubwordEncoder : public Encoder {
 public:
  HashedSubwordEncoder() = default;
  HashedSubwordEncoder(const EncoderConfig &config, uint64_t seed);

  size_t dim() const override { return config_.dim; }
  Matrix Encode(const SentenceKey &key,
                const Sentence &sentence) const override;

  // Bucket ids of a token, with multiplicity.
  std::vector<uint32_t> Buckets(std::string_view token) const;

  // Accumulates d(loss)/d(table) given d(loss)/d(Encode output).
  void Backward(const Sentence &sentence, const Matrix &d_output,
                TableGradient *grad) const;

  const EncoderConfig &config() const { return config_; }
  Matrix &table() { return table_; }
  const Matrix &table() const { return table_; }

 private:
  EncoderConfig config_;
  Matrix table_;
};

// Keyed sentence embeddings. File layout (little-endian): "SLEM", u32
// version, u32 dim, u64 record count, then per record a length-prefixed
// doc id, u32 sentence index, u32 row count and row-major float32 values.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(size_t dim = 0) : dim_(dim) {}

  size_t dim() const { return dim_; }
  size_t size() const { return records_.size(); }

  // Values are narrowed to float32.
  void Put(const SentenceKey &key, const Matrix &rows);

  // Throws DataError if the key is absent or the row count differs.
  Matrix Get(const SentenceKey &key, size_t expected_rows) const;

  void Write(std::ostream &out) const;
  static EmbeddingStore Read(std::istream &in);

 private:
  size_t dim_;
  std::map<SentenceKey, std::pair<size_t, std::vector<float>>> records_;
};

class PrecomputedEncoder : public Encoder {
 public:
  explicit PrecomputedEncoder(EmbeddingStore store)
      : store_(std::move(store)) {}

  size_t dim() const override { return store_.dim(); }
  Matrix Encode(const SentenceKey &key,
                const Sentence &sentence) const override {
    return store_.Get(key, sentence.tokens.size());
  }

 private:
  EmbeddingStore store_;
};

}  // namespace spanlink

#endif  // SPANLINK_ENCODER_H_
