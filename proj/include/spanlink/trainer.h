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

#ifndef SPANLINK_TRAINER_H_
#define SPANLINK_TRAINER_H_

// Mini-batch training of the span scorer (and the baseline encoder, when it
// is the one in use). Each sampled span contributes a softmax cross-entropy
// term over all labels, computed on the combined score; dictionary scores
// are constants. Gold spans carry their first concept, other spans are
// Null, and negatives are subsampled per sentence.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "spanlink/encoder.h"
#include "spanlink/kernels.h"
#include "spanlink/matcher.h"
#include "spanlink/spanmodel.h"

namespace spanlink {

struct LabeledSpan {
  SpanCandidate span;
  size_t label = 0;
};

struct TrainingSentence {
  PreparedSentence input;
  std::vector<LabeledSpan> gold;
  // Gold spans without a resolvable concept: never sampled as Null.
  std::vector<SpanCandidate> ignore;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  size_t batch_size = 32;  // sentences per step
  size_t epochs = 10;
  uint64_t seed = 13;
  size_t negative_ratio = 20;
  // Loss weight of Null-labelled spans relative to concept spans.
  double null_weight = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct SampledSentence {
  size_t sentence = 0;
  std::vector<LabeledSpan> spans;
};
using SampledBatch = std::vector<SampledSentence>;

struct Gradients {
  ScorerParams scorer;
  TableGradient encoder;
};

struct TrainStats {
  std::vector<double> epoch_loss;
  size_t steps = 0;
};

class Trainer {
 public:
  // `trainable_encoder` is the same object as `encoder` when the encoder is
  // trained, nullptr when it is frozen.
  Trainer(SpanModel &model, const Encoder &encoder,
          HashedSubwordEncoder *trainable_encoder, const SynonymIndex &index,
          const std::vector<TrainingSentence> &data, const TrainConfig &config);

  // Gold spans plus up to negative_ratio * max(1, #gold) random Null spans
  // for each listed sentence.
  SampledBatch Sample(std::span<const size_t> sentences,
                      std::mt19937_64 &rng) const;

  // Weighted mean cross-entropy of the batch; accumulates gradients when
  // `grad` is non-null. Throws NumericError on a non-finite loss.
  double Loss(const SampledBatch &batch, Gradients *grad) const;

  // One Adam update; returns the loss before the update.
  double Step(const SampledBatch &batch);

  TrainStats Run();

 private:
  struct AdamBuffers {
    std::vector<double> m;
    std::vector<double> v;
  };

  void ApplyAdam(std::span<double> param, std::span<const double> grad,
                 AdamBuffers *state, const kernels::AdamStep &step);

  SpanModel &model_;
  const Encoder &encoder_;
  HashedSubwordEncoder *trainable_encoder_;
  const SynonymIndex &index_;
  const std::vector<TrainingSentence> &data_;
  TrainConfig config_;
  size_t step_count_ = 0;
  std::vector<AdamBuffers> scorer_state_;
  Matrix encoder_m_;
  Matrix encoder_v_;
};

// Softmax cross-entropy of `scores` against `label` with max subtraction.
// Writes softmax probabilities into `probs` when non-empty.
double SoftmaxCrossEntropy(std::span<const double> scores, size_t label,
                           std::span<double> probs);

}  // namespace spanlink

#endif  // SPANLINK_TRAINER_H_
