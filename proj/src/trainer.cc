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

#include "spanlink/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spanlink/errors.h"
#include "spanlink/kernels.h"

namespace spanlink {

double SoftmaxCrossEntropy(std::span<const double> scores, size_t label,
                           std::span<double> probs) {
  double max_score = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double s : scores) total += std::exp(s - max_score);
  double log_z = max_score + std::log(total);
  if (!probs.empty()) {
    for (size_t c = 0; c < scores.size(); ++c) {
      probs[c] = std::exp(scores[c] - log_z);
    }
  }
  return log_z - scores[label];
}

Trainer::Trainer(SpanModel &model, const Encoder &encoder,
                 HashedSubwordEncoder *trainable_encoder,
                 const SynonymIndex &index,
                 const std::vector<TrainingSentence> &data,
                 const TrainConfig &config)
    : model_(model),
      encoder_(encoder),
      trainable_encoder_(trainable_encoder),
      index_(index),
      data_(data),
      config_(config) {
  if (config.batch_size == 0) throw ValidationError("batch size must be >= 1");
  if (!(config.learning_rate > 0.0)) {
    throw ValidationError("learning rate must be positive");
  }
  if (index.num_concepts() + 1 != model.num_labels()) {
    throw ValidationError("synonym index and model disagree on label count");
  }
  if (encoder.dim() != model.token_dim()) {
    throw ValidationError("encoder width differs from the model's token width");
  }
  if (trainable_encoder_ != nullptr) {
    encoder_m_ = Matrix(trainable_encoder_->table().rows,
                        trainable_encoder_->table().cols);
    encoder_v_ = encoder_m_;
  }
}

SampledBatch Trainer::Sample(std::span<const size_t> sentences,
                             std::mt19937_64 &rng) const {
  SampledBatch batch;
  const size_t max_width = model_.config().max_span_width;
  for (size_t id : sentences) {
    const TrainingSentence &ts = data_[id];
    const size_t n_tokens = ts.input.sentence.tokens.size();
    if (n_tokens == 0) continue;
    SampledSentence sample;
    sample.sentence = id;
    std::vector<SpanCandidate> taken;
    for (const LabeledSpan &g : ts.gold) {
      if (g.span.width() > max_width) continue;
      sample.spans.push_back(g);
      taken.push_back(g.span);
    }
    taken.insert(taken.end(), ts.ignore.begin(), ts.ignore.end());
    std::vector<SpanCandidate> pool;
    for (SpanCandidate s : EnumerateSpans(n_tokens, max_width)) {
      if (std::find(taken.begin(), taken.end(), s) == taken.end()) {
        pool.push_back(s);
      }
    }
    size_t want = config_.negative_ratio *
                  std::max<size_t>(1, sample.spans.size());
    want = std::min(want, pool.size());
    // Partial Fisher-Yates.
    for (size_t i = 0; i < want; ++i) {
      std::uniform_int_distribution<size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      sample.spans.push_back({pool[i], model_.null_index()});
    }
    if (!sample.spans.empty()) batch.push_back(std::move(sample));
  }
  return batch;
}

double Trainer::Loss(const SampledBatch &batch, Gradients *grad) const {
  const size_t n_labels = model_.num_labels();
  const size_t null_index = model_.null_index();
  double total_weight = 0.0;
  for (const SampledSentence &s : batch) {
    for (const LabeledSpan &ls : s.spans) {
      total_weight += ls.label == null_index ? config_.null_weight : 1.0;
    }
  }
  if (total_weight <= 0.0) return 0.0;

  double loss = 0.0;
  std::vector<double> context(n_labels), dict(n_labels - 1),
      combined(n_labels), probs(n_labels);
  for (const SampledSentence &s : batch) {
    const TrainingSentence &ts = data_[s.sentence];
    Matrix h = encoder_.Encode(ts.input.key, ts.input.sentence);
    Matrix d_h(h.rows, h.cols);
    for (const LabeledSpan &ls : s.spans) {
      SpanForward f = model_.Forward(h, ls.span);
      model_.ContextScores(f, context);
      index_.ScoreAll(index_.vocab().Vectorize(MatchText(
                          ts.input.sentence, ts.input.expansions,
                          ls.span.start, ls.span.end)),
                      dict);
      model_.CombineScores(context, dict, combined);
      const double weight =
          (ls.label == null_index ? config_.null_weight : 1.0) / total_weight;
      double ce = SoftmaxCrossEntropy(combined, ls.label,
                                      grad != nullptr ? std::span<double>(probs)
                                                      : std::span<double>());
      if (!std::isfinite(ce)) {
        std::ostringstream msg;
        msg << "non-finite loss at step " << step_count_ << " in sentence "
            << ts.input.key.doc_id << "#" << ts.input.key.sentence_index
            << " span [" << ls.span.start << "," << ls.span.end << ")";
        throw NumericError(msg.str());
      }
      loss += weight * ce;
      if (grad != nullptr) {
        for (double &p : probs) p *= weight;
        probs[ls.label] -= weight;
        model_.Backward(h, f, probs, &grad->scorer, &d_h);
      }
    }
    if (grad != nullptr && trainable_encoder_ != nullptr) {
      trainable_encoder_->Backward(ts.input.sentence, d_h, &grad->encoder);
    }
  }
  return loss;
}

void Trainer::ApplyAdam(std::span<double> param, std::span<const double> grad,
                        AdamBuffers *state, const kernels::AdamStep &step) {
  if (state->m.empty()) {
    state->m.assign(param.size(), 0.0);
    state->v.assign(param.size(), 0.0);
  }
  kernels::Active().adam(param.data(), grad.data(), state->m.data(),
                         state->v.data(), param.size(), step);
}

double Trainer::Step(const SampledBatch &batch) {
  Gradients grad;
  grad.scorer = ZeroLike(model_.params());
  double loss = Loss(batch, &grad);

  ++step_count_;
  kernels::AdamStep step;
  step.learning_rate = config_.learning_rate;
  step.beta1 = config_.beta1;
  step.beta2 = config_.beta2;
  step.epsilon = config_.epsilon;
  step.bias_correction1 =
      1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  step.bias_correction2 =
      1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));

  ScorerParams &p = model_.params();
  scorer_state_.resize(5);
  ApplyAdam(p.attention, grad.scorer.attention, &scorer_state_[0], step);
  ApplyAdam(p.width_table.data, grad.scorer.width_table.data, &scorer_state_[1],
            step);
  ApplyAdam(p.ffnn_weight.data, grad.scorer.ffnn_weight.data, &scorer_state_[2],
            step);
  ApplyAdam(p.ffnn_bias, grad.scorer.ffnn_bias, &scorer_state_[3], step);
  ApplyAdam(p.concept_weight.data, grad.scorer.concept_weight.data,
            &scorer_state_[4], step);

  if (trainable_encoder_ != nullptr) {
    // Lazy update: only rows that received a gradient in this batch.
    Matrix &table = trainable_encoder_->table();
    for (const auto &[row, g] : grad.encoder) {
      kernels::Active().adam(table.row(row).data(), g.data(),
                             encoder_m_.row(row).data(),
                             encoder_v_.row(row).data(), table.cols, step);
    }
  }
  return loss;
}

TrainStats Trainer::Run() {
  if (data_.empty()) throw ValidationError("training set is empty");
  TrainStats stats;
  std::mt19937_64 rng(config_.seed);
  std::vector<size_t> order(data_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    size_t batches = 0;
    for (size_t b = 0; b < order.size(); b += config_.batch_size) {
      size_t e = std::min(order.size(), b + config_.batch_size);
      SampledBatch batch =
          Sample(std::span<const size_t>(order).subspan(b, e - b), rng);
      if (batch.empty()) continue;
      epoch_loss += Step(batch);
      ++batches;
      ++stats.steps;
    }
    stats.epoch_loss.push_back(batches > 0 ? epoch_loss / batches : 0.0);
  }
  return stats;
}

}  // namespace spanlink
