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

#ifndef SPANLINK_SPANMODEL_H_
#define SPANLINK_SPANMODEL_H_

// Span scorer. Every span s = [start, end) of a sentence with at most
// max_width tokens gets a representation
//
//   g  = [h_start, h_last, attention-pooled h, width embedding]
//   g' = GELU(A g + b)
//
// and a score for every label c (concepts plus Null):
//
//   score(s, c) = g' . W_c + lambda * dict(s, c),   dict(s, Null) = 0.
//
// The label of a span is the argmax; Null wins ties, then the lowest index.

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "spanlink/abbrev.h"
#include "spanlink/corpus.h"
#include "spanlink/encoder.h"
#include "spanlink/matcher.h"
#include "spanlink/tensor.h"

namespace spanlink {

struct SpanCandidate {
  size_t start = 0;
  size_t end = 0;  // exclusive

  size_t width() const { return end - start; }
  bool Overlaps(const SpanCandidate &o) const {
    return start < o.end && o.start < end;
  }
  auto operator<=>(const SpanCandidate &) const = default;
};

// All spans of width 1..max_width in lexicographic (start, end) order.
std::vector<SpanCandidate> EnumerateSpans(size_t num_tokens, size_t max_width);

// tanh approximation.
double Gelu(double x);
double GeluDerivative(double x);

struct AttentionResult {
  std::vector<double> weights;  // softmax over the span's tokens
  std::vector<double> pooled;
};

// Softmax(attention . h_t) weighted sum of rows [start, end) of `h`.
AttentionResult AttentionPool(const Matrix &h, size_t start, size_t end,
                              std::span<const double> attention);

struct ScorerConfig {
  size_t max_span_width = 10;
  size_t width_dim = 16;
  size_t hidden = 64;
  double lambda = 0.9;
  // Score with g instead of g' (the FFNN output).
  bool score_on_raw_g = false;
};

struct ScorerParams {
  std::vector<double> attention;  // d
  Matrix width_table;             // max_span_width x width_dim
  Matrix ffnn_weight;             // hidden x (3d + width_dim)
  std::vector<double> ffnn_bias;  // hidden
  Matrix concept_weight;          // num_labels x feature width, Null last

  bool operator==(const ScorerParams &) const = default;
};

// Same shapes as ScorerParams, zero-initialized.
ScorerParams ZeroLike(const ScorerParams &params);

// Intermediate values of one span, kept for the backward pass.
struct SpanForward {
  SpanCandidate span;
  AttentionResult attention;
  std::vector<double> g;
  std::vector<double> pre_activation;
  std::vector<double> g_prime;
};

class SpanModel {
 public:
  SpanModel() = default;
  // Attention, width table and FFNN drawn from a scaled normal; concept
  // weights start at zero.
  SpanModel(const ScorerConfig &config, size_t token_dim, size_t num_labels,
            uint64_t seed);

  const ScorerConfig &config() const { return config_; }
  ScorerConfig &mutable_config() { return config_; }
  ScorerParams &params() { return params_; }
  const ScorerParams &params() const { return params_; }

  size_t token_dim() const { return token_dim_; }
  size_t num_labels() const { return params_.concept_weight.rows; }
  size_t null_index() const { return num_labels() - 1; }
  size_t representation_dim() const {
    return 3 * token_dim_ + config_.width_dim;
  }
  size_t feature_dim() const {
    return config_.score_on_raw_g ? representation_dim() : config_.hidden;
  }

  SpanForward Forward(const Matrix &h, SpanCandidate span) const;
  std::span<const double> Features(const SpanForward &f) const {
    return config_.score_on_raw_g ? f.g : f.g_prime;
  }

  // W f for every label; `out` has num_labels() entries.
  void ContextScores(const SpanForward &f, std::span<double> out) const;

  // ctx + lambda * dict; `dict` has num_labels() - 1 entries.
  void CombineScores(std::span<const double> context,
                     std::span<const double> dict,
                     std::span<double> out) const;

  // Backpropagates d(loss)/d(context scores) into `grad` and `d_h`.
  void Backward(const Matrix &h, const SpanForward &f,
                std::span<const double> d_scores, ScorerParams *grad,
                Matrix *d_h) const;

  void Save(std::ostream &out) const;
  static SpanModel Load(std::istream &in);

 private:
  ScorerConfig config_;
  size_t token_dim_ = 0;
  ScorerParams params_;
};

struct LabelDecision {
  size_t label;
  double score;
};

// Argmax over labels; Null (the last entry) wins ties, then lower indices.
LabelDecision ClassifyScores(std::span<const double> combined);

// A sentence ready for scoring.
struct PreparedSentence {
  SentenceKey key;
  Sentence sentence;
  std::vector<Expansion> expansions;
};

struct Prediction {
  SpanCandidate span;
  size_t concept_index = 0;
  double combined = 0.0;
  double context = 0.0;
  double dict = 0.0;
  size_t char_start = 0;
  size_t char_end = 0;
};

// Scores one span against every label.
struct SpanScores {
  std::vector<double> context;
  std::vector<double> dict;
  std::vector<double> combined;
};

SpanScores ScoreSpan(const SpanModel &model, const Matrix &h,
                     const SynonymIndex &index, const PreparedSentence &input,
                     SpanCandidate span);

// Classifies every span, keeps non-Null ones and greedily selects
// non-overlapping spans by descending combined score (span order breaks
// ties).
std::vector<Prediction> DecodeSentence(const SpanModel &model,
                                       const Encoder &encoder,
                                       const SynonymIndex &index,
                                       const PreparedSentence &input);

}  // namespace spanlink

#endif  // SPANLINK_SPANMODEL_H_
