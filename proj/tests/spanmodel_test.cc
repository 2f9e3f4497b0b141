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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gradcheck.h"
#include "spanlink/errors.h"
#include "spanlink/lexicon.h"

namespace spanlink {
namespace {

size_t BruteSpanCount(size_t t, size_t w) {
  size_t n = 0;
  for (size_t i = 0; i < t; ++i) {
    for (size_t j = i; j < t; ++j) n += (j - i + 1 <= w);
  }
  return n;
}

TEST(EnumerateSpansTest, CountMatchesClosedForm) {
  for (size_t t = 0; t <= 60; ++t) {
    const size_t w = 10;
    size_t n = EnumerateSpans(t, w).size();
    EXPECT_EQ(n, BruteSpanCount(t, w)) << t;
    if (t >= w) EXPECT_EQ(n, t * w - w * (w - 1) / 2) << t;
  }
}

TEST(EnumerateSpansTest, OrderAndBounds) {
  auto spans = EnumerateSpans(3, 2);
  std::vector<SpanCandidate> expected = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(spans, expected);
  EXPECT_TRUE(std::is_sorted(spans.begin(), spans.end()));
}

TEST(GeluTest, KnownValuesAndDerivative) {
  EXPECT_EQ(Gelu(0.0), 0.0);
  EXPECT_NEAR(Gelu(1.0), 0.8411919906082768, 1e-15);
  EXPECT_NEAR(Gelu(-1.0), -0.15880800939172324, 1e-15);
  for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5}) {
    double fd = (Gelu(x + 1e-6) - Gelu(x - 1e-6)) / 2e-6;
    EXPECT_NEAR(GeluDerivative(x), fd, 1e-8);
  }
}

TEST(AttentionPoolTest, UniformWhenAttentionIsZero) {
  Matrix h(3, 2);
  h.data = {1, 2, 3, 4, 5, 6};
  std::vector<double> a = {0.0, 0.0};
  AttentionResult r = AttentionPool(h, 0, 3, a);
  for (double w : r.weights) EXPECT_NEAR(w, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.pooled[0], 3.0, 1e-14);
  EXPECT_NEAR(r.pooled[1], 4.0, 1e-14);
}

TEST(AttentionPoolTest, HandComputedWeights) {
  Matrix h(2, 1);
  h.data = {0.0, std::log(3.0)};
  std::vector<double> a = {1.0};
  AttentionResult r = AttentionPool(h, 0, 2, a);
  EXPECT_NEAR(r.weights[0], 0.25, 1e-15);
  EXPECT_NEAR(r.weights[1], 0.75, 1e-15);
  EXPECT_NEAR(r.pooled[0], 0.75 * std::log(3.0), 1e-15);
}

TEST(SpanModelTest, ContextScoreFixture) {
  // Raw-g scoring: g = [h_start, h_end, pooled, width] with d = 1 and a
  // single-token span of value 1 gives g = [1, 1, 1, w].
  ScorerConfig sc;
  sc.max_span_width = 2;
  sc.width_dim = 1;
  sc.hidden = 1;
  sc.score_on_raw_g = true;
  SpanModel m(sc, 1, 2, 1);
  m.params().width_table.data = {-1.0, 0.0};
  m.params().concept_weight.data = {0.5, 0.25, 0.0, 0.0,  // concept 0
                                    0.0, 0.0, 0.0, 1.0};  // Null
  Matrix h(1, 1);
  h.data = {1.0};
  SpanForward f = m.Forward(h, {0, 1});
  EXPECT_EQ(f.g, (std::vector<double>{1.0, 1.0, 1.0, -1.0}));
  std::vector<double> ctx(2);
  m.ContextScores(f, ctx);
  EXPECT_DOUBLE_EQ(ctx[0], 0.75);
  EXPECT_DOUBLE_EQ(ctx[1], -1.0);
}

TEST(SpanModelTest, FfnnContextFixture) {
  // g' = GELU(A g + b) with A and b chosen so that g' = [GELU(1), GELU(-1)],
  // W_c = [0.5, 0.25].
  ScorerConfig sc;
  sc.max_span_width = 1;
  sc.width_dim = 1;
  sc.hidden = 2;
  SpanModel m(sc, 1, 2, 1);
  m.params().width_table.data = {0.0};
  m.params().ffnn_weight.data = {1, 0, 0, 0, 0, -1, 0, 0};
  m.params().ffnn_bias = {0.0, 0.0};
  m.params().concept_weight.data = {0.5, 0.25, 0.0, 0.0};
  Matrix h(1, 1);
  h.data = {1.0};
  SpanForward f = m.Forward(h, {0, 1});
  std::vector<double> ctx(2);
  m.ContextScores(f, ctx);
  EXPECT_NEAR(ctx[0], 0.5 * Gelu(1.0) + 0.25 * Gelu(-1.0), 1e-15);
  EXPECT_EQ(ctx[1], 0.0);
}

TEST(SpanModelTest, CombineAddsDictionaryExceptForNull) {
  ScorerConfig sc;
  sc.lambda = 0.9;
  SpanModel m(sc, 2, 3, 1);
  std::vector<double> ctx = {0.1, 0.2, 0.3}, dict = {1.0, 0.5}, out(3);
  m.CombineScores(ctx, dict, out);
  EXPECT_DOUBLE_EQ(out[0], 0.1 + 0.9 * 1.0);
  EXPECT_DOUBLE_EQ(out[1], 0.2 + 0.9 * 0.5);
  EXPECT_DOUBLE_EQ(out[2], 0.3);
}

TEST(SpanModelTest, LambdaZeroIgnoresDictionary) {
  ScorerConfig sc;
  sc.lambda = 0.0;
  SpanModel m(sc, 2, 2, 1);
  std::vector<double> ctx = {-0.25, 0.5}, dict = {1.0}, out(2);
  m.CombineScores(ctx, dict, out);
  EXPECT_EQ(out[0], -0.25);
}

TEST(SpanModelTest, RejectsBadConfig) {
  ScorerConfig sc;
  sc.lambda = -1.0;
  EXPECT_THROW(SpanModel(sc, 2, 2, 1), ValidationError);
  sc.lambda = 0.5;
  EXPECT_THROW(SpanModel(sc, 0, 2, 1), ValidationError);
}

TEST(ClassifyScoresTest, TiesGoToNullThenLowestIndex) {
  std::vector<double> tie_null = {1.0, 0.5, 1.0};
  EXPECT_EQ(ClassifyScores(tie_null).label, 2u);
  std::vector<double> tie_concepts = {0.5, 2.0, 2.0, 1.0};
  EXPECT_EQ(ClassifyScores(tie_concepts).label, 1u);
  std::vector<double> only_null = {3.0};
  EXPECT_EQ(ClassifyScores(only_null).label, 0u);
}

TEST(SpanModelTest, SaveLoadRoundTrip) {
  ScorerConfig sc;
  sc.hidden = 3;
  sc.width_dim = 2;
  sc.max_span_width = 4;
  SpanModel m(sc, 5, 7, 42);
  m.params().concept_weight.data[3] = 0.125;
  std::stringstream buf;
  m.Save(buf);
  SpanModel back = SpanModel::Load(buf);
  EXPECT_EQ(back.params(), m.params());
  EXPECT_EQ(back.config().max_span_width, 4u);
  EXPECT_EQ(back.token_dim(), 5u);
  std::stringstream bad(std::string("SLSM\x09\0\0\0", 8));
  EXPECT_THROW(SpanModel::Load(bad), DataError);
}

TEST(SpanModelTest, GradientsMatchFiniteDifferences) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    gradcheck::Result r = gradcheck::CheckInstance(seed);
    EXPECT_LT(r.max_relative_error, 1e-4) << "seed " << seed << " " << r.worst;
    EXPECT_GT(r.checked, 0u);
  }
}

// Encoder returning fixed rows regardless of key.
class FixedEncoder : public Encoder {
 public:
  explicit FixedEncoder(Matrix h) : h_(std::move(h)) {}
  size_t dim() const override { return h_.cols; }
  Matrix Encode(const SentenceKey &, const Sentence &) const override {
    return h_;
  }

 private:
  Matrix h_;
};

Sentence Words(const std::vector<std::string> &words) {
  Sentence s;
  size_t pos = 0;
  for (const std::string &w : words) {
    s.tokens.push_back({w, pos, pos + w.size()});
    pos += w.size() + 1;
  }
  return s;
}

TEST(DecodeSentenceTest, DictionaryAloneProducesNonOverlappingMentions) {
  ConceptInventory inv;
  inv.Add({"MESH:D010488", "Polyarteritis Nodosa", {"Polyarteritis Nodosa"}, {}});
  inv.Add({"MESH:D006073", "Gout", {"Gout"}, {}});
  std::vector<std::string> names = DictionaryNames(inv, {});
  SynonymIndex index = SynonymIndex::Build(inv, NgramVocabulary::Fit(names));

  ScorerConfig sc;
  sc.lambda = 0.9;
  sc.max_span_width = 3;
  SpanModel model(sc, 2, inv.num_labels(), 3);
  // Context prefers Null by 0.5 everywhere: only strong dictionary matches
  // survive.
  std::fill(model.params().concept_weight.data.begin(),
            model.params().concept_weight.data.end(), 0.0);
  model.params().ffnn_bias.assign(sc.hidden, 1.0);
  model.params().ffnn_weight.data.assign(model.params().ffnn_weight.data.size(),
                                         0.0);
  auto null_row = model.params().concept_weight.row(model.null_index());
  null_row[0] = 0.5 / Gelu(1.0);

  // Every gram of "of" would be unseen and dropped, tying with the exact
  // span; "rare" shares "ar" with the dictionary.
  PreparedSentence input;
  input.key = {"1", 0};
  input.sentence = Words({"risk", "rare", "polyarteritis", "nodosa", "today"});
  FixedEncoder enc(Matrix(5, 2));
  std::vector<Prediction> preds = DecodeSentence(model, enc, index, input);
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].span, (SpanCandidate{2, 4}));
  EXPECT_EQ(preds[0].concept_index, 0u);
  EXPECT_NEAR(preds[0].dict, 1.0, 1e-12);
  EXPECT_NEAR(preds[0].combined, 0.9, 1e-12);

  // With lambda = 0 nothing beats Null.
  model.mutable_config().lambda = 0.0;
  EXPECT_TRUE(DecodeSentence(model, enc, index, input).empty());
}

TEST(DecodeSentenceTest, GreedyKeepsHigherScoreOnOverlap) {
  ConceptInventory inv;
  inv.Add({"MESH:D000001", "alpha beta", {"alpha beta"}, {}});
  inv.Add({"MESH:D000002", "beta gamma", {"beta gamma"}, {}});
  std::vector<std::string> names = DictionaryNames(inv, {});
  SynonymIndex index = SynonymIndex::Build(inv, NgramVocabulary::Fit(names));
  ScorerConfig sc;
  sc.max_span_width = 2;
  sc.score_on_raw_g = true;
  SpanModel model(sc, 1, inv.num_labels(), 3);
  auto &w = model.params().concept_weight;
  std::fill(w.data.begin(), w.data.end(), 0.0);
  // Null context 0.8; concept 1 gets a small context bonus.
  model.params().width_table.data.assign(model.params().width_table.data.size(),
                                         1.0);
  for (size_t j = 3; j < w.cols; ++j) w.row(2)[j] = 0.8 / sc.width_dim;
  for (size_t j = 3; j < w.cols; ++j) w.row(1)[j] = 0.05 / sc.width_dim;
  PreparedSentence input;
  input.key = {"1", 0};
  input.sentence = Words({"alpha", "beta", "gamma"});
  FixedEncoder enc(Matrix(3, 1));
  auto preds = DecodeSentence(model, enc, index, input);
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].span, (SpanCandidate{1, 3}));
  EXPECT_EQ(preds[0].concept_index, 1u);
}

}  // namespace
}  // namespace spanlink
