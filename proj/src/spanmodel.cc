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

#include "spanlink/spanmodel.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "spanlink/binio.h"
#include "spanlink/errors.h"
#include "spanlink/kernels.h"

namespace spanlink {

namespace {

constexpr std::string_view kModelMagic = "SLSM";
constexpr uint32_t kModelVersion = 1;

const double kGeluScale = std::sqrt(2.0 / std::numbers::pi);
constexpr double kGeluCubic = 0.044715;

size_t WidthBucket(size_t width, size_t max_width) {
  return std::min(width, max_width) - 1;
}

void WriteMatrix(BinaryWriter &w, const Matrix &m) {
  w.U64(m.rows);
  w.U64(m.cols);
  w.Doubles(m.data);
}

Matrix ReadMatrix(BinaryReader &r) {
  Matrix m;
  m.rows = r.U64();
  m.cols = r.U64();
  m.data = r.Doubles();
  if (m.data.size() != m.rows * m.cols) throw DataError("corrupt matrix");
  return m;
}

}  // namespace

std::vector<SpanCandidate> EnumerateSpans(size_t num_tokens,
                                          size_t max_width) {
  std::vector<SpanCandidate> spans;
  for (size_t i = 0; i < num_tokens; ++i) {
    for (size_t j = i + 1; j <= num_tokens && j - i <= max_width; ++j) {
      spans.push_back({i, j});
    }
  }
  return spans;
}

double Gelu(double x) {
  double inner = kGeluScale * (x + kGeluCubic * x * x * x);
  return 0.5 * x * (1.0 + std::tanh(inner));
}

double GeluDerivative(double x) {
  double inner = kGeluScale * (x + kGeluCubic * x * x * x);
  double t = std::tanh(inner);
  double d_inner = kGeluScale * (1.0 + 3.0 * kGeluCubic * x * x);
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner;
}

AttentionResult AttentionPool(const Matrix &h, size_t start, size_t end,
                              std::span<const double> attention) {
  AttentionResult r;
  const size_t n = end - start;
  r.weights.resize(n);
  double max_logit = -INFINITY;
  for (size_t t = 0; t < n; ++t) {
    r.weights[t] = kernels::Dot(attention, h.row(start + t));
    max_logit = std::max(max_logit, r.weights[t]);
  }
  double total = 0.0;
  for (double &w : r.weights) {
    w = std::exp(w - max_logit);
    total += w;
  }
  for (double &w : r.weights) w /= total;
  r.pooled.assign(h.cols, 0.0);
  for (size_t t = 0; t < n; ++t) {
    kernels::Axpy(r.weights[t], h.row(start + t), r.pooled);
  }
  return r;
}

ScorerParams ZeroLike(const ScorerParams &p) {
  ScorerParams z;
  z.attention.assign(p.attention.size(), 0.0);
  z.width_table = Matrix(p.width_table.rows, p.width_table.cols);
  z.ffnn_weight = Matrix(p.ffnn_weight.rows, p.ffnn_weight.cols);
  z.ffnn_bias.assign(p.ffnn_bias.size(), 0.0);
  z.concept_weight = Matrix(p.concept_weight.rows, p.concept_weight.cols);
  return z;
}

SpanModel::SpanModel(const ScorerConfig &config, size_t token_dim,
                     size_t num_labels, uint64_t seed)
    : config_(config), token_dim_(token_dim) {
  if (token_dim == 0 || config.max_span_width == 0 || config.hidden == 0) {
    throw ValidationError("span model dimensions must be positive");
  }
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
    throw ValidationError("lambda must be a finite non-negative number");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> small(0.0, 0.1);
  params_.attention.resize(token_dim);
  for (double &x : params_.attention) x = small(rng);
  params_.width_table = Matrix(config.max_span_width, config.width_dim);
  for (double &x : params_.width_table.data) x = small(rng);
  const size_t rep = representation_dim();
  params_.ffnn_weight = Matrix(config.hidden, rep);
  std::normal_distribution<double> ffnn(0.0,
                                        1.0 / std::sqrt(static_cast<double>(rep)));
  for (double &x : params_.ffnn_weight.data) x = ffnn(rng);
  params_.ffnn_bias.assign(config.hidden, 0.0);
  params_.concept_weight = Matrix(num_labels, feature_dim());
}

SpanForward SpanModel::Forward(const Matrix &h, SpanCandidate span) const {
  const size_t d = token_dim_;
  SpanForward f;
  f.span = span;
  f.attention = AttentionPool(h, span.start, span.end, params_.attention);
  f.g.resize(representation_dim());
  std::copy_n(h.row(span.start).begin(), d, f.g.begin());
  std::copy_n(h.row(span.end - 1).begin(), d, f.g.begin() + d);
  std::copy_n(f.attention.pooled.begin(), d, f.g.begin() + 2 * d);
  auto width_row =
      params_.width_table.row(WidthBucket(span.width(), config_.max_span_width));
  std::copy(width_row.begin(), width_row.end(), f.g.begin() + 3 * d);
  if (!config_.score_on_raw_g) {
    f.pre_activation.resize(config_.hidden);
    kernels::Active().gemv(params_.ffnn_weight.data.data(),
                           params_.ffnn_weight.rows, params_.ffnn_weight.cols,
                           f.g.data(), f.pre_activation.data());
    f.g_prime.resize(config_.hidden);
    for (size_t k = 0; k < config_.hidden; ++k) {
      f.pre_activation[k] += params_.ffnn_bias[k];
      f.g_prime[k] = Gelu(f.pre_activation[k]);
    }
  }
  return f;
}

void SpanModel::ContextScores(const SpanForward &f,
                              std::span<double> out) const {
  std::span<const double> feats = Features(f);
  kernels::Active().gemv(params_.concept_weight.data.data(),
                         params_.concept_weight.rows,
                         params_.concept_weight.cols, feats.data(), out.data());
}

void SpanModel::CombineScores(std::span<const double> context,
                              std::span<const double> dict,
                              std::span<double> out) const {
  const size_t n = num_labels();
  for (size_t c = 0; c + 1 < n; ++c) {
    out[c] = context[c] + config_.lambda * dict[c];
  }
  out[n - 1] = context[n - 1];
}

void SpanModel::Backward(const Matrix &h, const SpanForward &f,
                         std::span<const double> d_scores, ScorerParams *grad,
                         Matrix *d_h) const {
  const kernels::KernelTable &k = kernels::Active();
  const size_t d = token_dim_;
  std::span<const double> feats = Features(f);
  const Matrix &w = params_.concept_weight;
  k.ger(1.0, d_scores.data(), w.rows, feats.data(), w.cols,
        grad->concept_weight.data.data());
  std::vector<double> d_feats(w.cols, 0.0);
  k.gemv_t_acc(w.data.data(), w.rows, w.cols, d_scores.data(), d_feats.data());

  std::vector<double> d_g;
  if (config_.score_on_raw_g) {
    d_g = std::move(d_feats);
  } else {
    std::vector<double> d_pre(config_.hidden);
    for (size_t j = 0; j < config_.hidden; ++j) {
      d_pre[j] = d_feats[j] * GeluDerivative(f.pre_activation[j]);
      grad->ffnn_bias[j] += d_pre[j];
    }
    const Matrix &a = params_.ffnn_weight;
    k.ger(1.0, d_pre.data(), a.rows, f.g.data(), a.cols,
          grad->ffnn_weight.data.data());
    d_g.assign(a.cols, 0.0);
    k.gemv_t_acc(a.data.data(), a.rows, a.cols, d_pre.data(), d_g.data());
  }

  const SpanCandidate s = f.span;
  std::span<const double> dg(d_g);
  kernels::Axpy(1.0, dg.subspan(0, d), d_h->row(s.start));
  kernels::Axpy(1.0, dg.subspan(d, d), d_h->row(s.end - 1));
  kernels::Axpy(1.0, dg.subspan(3 * d, config_.width_dim),
                grad->width_table.row(
                    WidthBucket(s.width(), config_.max_span_width)));

  // Attention pooling.
  std::span<const double> d_pooled = dg.subspan(2 * d, d);
  const std::vector<double> &alpha = f.attention.weights;
  const size_t n = alpha.size();
  std::vector<double> d_alpha(n);
  double mean = 0.0;
  for (size_t t = 0; t < n; ++t) {
    d_alpha[t] = kernels::Dot(d_pooled, h.row(s.start + t));
    mean += alpha[t] * d_alpha[t];
  }
  for (size_t t = 0; t < n; ++t) {
    double d_logit = alpha[t] * (d_alpha[t] - mean);
    kernels::Axpy(d_logit, h.row(s.start + t), grad->attention);
    kernels::Axpy(alpha[t], d_pooled, d_h->row(s.start + t));
    kernels::Axpy(d_logit, params_.attention, d_h->row(s.start + t));
  }
}

void SpanModel::Save(std::ostream &out) const {
  BinaryWriter w(out);
  w.Magic(kModelMagic);
  w.U32(kModelVersion);
  w.U64(config_.max_span_width);
  w.U64(config_.width_dim);
  w.U64(config_.hidden);
  w.F64(config_.lambda);
  w.U32(config_.score_on_raw_g ? 1 : 0);
  w.U64(token_dim_);
  w.Doubles(params_.attention);
  WriteMatrix(w, params_.width_table);
  WriteMatrix(w, params_.ffnn_weight);
  w.Doubles(params_.ffnn_bias);
  WriteMatrix(w, params_.concept_weight);
}

SpanModel SpanModel::Load(std::istream &in) {
  BinaryReader r(in, "span model");
  r.ExpectMagic(kModelMagic);
  uint32_t version = r.U32();
  if (version != kModelVersion) {
    throw DataError("span model version " + std::to_string(version) +
                    " is not supported");
  }
  SpanModel m;
  m.config_.max_span_width = r.U64();
  m.config_.width_dim = r.U64();
  m.config_.hidden = r.U64();
  m.config_.lambda = r.F64();
  m.config_.score_on_raw_g = r.U32() != 0;
  m.token_dim_ = r.U64();
  m.params_.attention = r.Doubles();
  m.params_.width_table = ReadMatrix(r);
  m.params_.ffnn_weight = ReadMatrix(r);
  m.params_.ffnn_bias = r.Doubles();
  m.params_.concept_weight = ReadMatrix(r);
  if (m.params_.attention.size() != m.token_dim_ ||
      m.params_.concept_weight.cols != m.feature_dim() ||
      m.params_.concept_weight.rows == 0) {
    throw DataError("span model tensors have inconsistent shapes");
  }
  return m;
}

LabelDecision ClassifyScores(std::span<const double> combined) {
  const size_t null_index = combined.size() - 1;
  LabelDecision best{null_index, combined[null_index]};
  for (size_t c = 0; c < null_index; ++c) {
    if (combined[c] > best.score) best = {c, combined[c]};
  }
  return best;
}

SpanScores ScoreSpan(const SpanModel &model, const Matrix &h,
                     const SynonymIndex &index, const PreparedSentence &input,
                     SpanCandidate span) {
  SpanScores s;
  const size_t n = model.num_labels();
  s.context.resize(n);
  model.ContextScores(model.Forward(h, span), s.context);
  s.dict.assign(n - 1, 0.0);
  index.ScoreAll(index.vocab().Vectorize(MatchText(
                     input.sentence, input.expansions, span.start, span.end)),
                 s.dict);
  s.combined.resize(n);
  model.CombineScores(s.context, s.dict, s.combined);
  return s;
}

std::vector<Prediction> DecodeSentence(const SpanModel &model,
                                       const Encoder &encoder,
                                       const SynonymIndex &index,
                                       const PreparedSentence &input) {
  std::vector<Prediction> candidates;
  const Sentence &sentence = input.sentence;
  if (sentence.tokens.empty()) return candidates;
  if (index.num_concepts() + 1 != model.num_labels()) {
    throw ValidationError("synonym index and model disagree on label count");
  }
  Matrix h = encoder.Encode(input.key, sentence);
  for (SpanCandidate span :
       EnumerateSpans(sentence.tokens.size(), model.config().max_span_width)) {
    SpanScores scores = ScoreSpan(model, h, index, input, span);
    LabelDecision decision = ClassifyScores(scores.combined);
    if (!std::isfinite(decision.score)) {
      throw NumericError("non-finite span score in " + input.key.doc_id);
    }
    if (decision.label == model.null_index()) continue;
    Prediction p;
    p.span = span;
    p.concept_index = decision.label;
    p.combined = decision.score;
    p.context = scores.context[decision.label];
    p.dict = scores.dict[decision.label];
    p.char_start = sentence.tokens[span.start].char_start;
    p.char_end = sentence.tokens[span.end - 1].char_end;
    candidates.push_back(p);
  }
  // Stable: equal scores keep enumeration order.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Prediction &a, const Prediction &b) {
                     return a.combined > b.combined;
                   });
  std::vector<Prediction> kept;
  for (const Prediction &p : candidates) {
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const Prediction &k) {
      return k.span.Overlaps(p.span);
    });
    if (!clash) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Prediction &a, const Prediction &b) { return a.span < b.span; });
  return kept;
}

}  // namespace spanlink
