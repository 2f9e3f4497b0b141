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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "spanlink/errors.h"
#include "spanlink/lexicon.h"

namespace spanlink {
namespace {

Sentence Words(const std::vector<std::string> &words) {
  Sentence s;
  s.doc_id = "1";
  size_t pos = 0;
  for (const std::string &w : words) {
    s.tokens.push_back({w, pos, pos + w.size()});
    pos += w.size() + 1;
  }
  return s;
}

struct Fixture {
  ConceptInventory inv;
  SynonymIndex index;
  HashedSubwordEncoder encoder;
  SpanModel model;
  std::vector<TrainingSentence> data;

  explicit Fixture(double lambda = 0.9) {
    inv.Add({"MESH:D001249", "Asthma", {"Asthma"}, {}});
    inv.Add({"MESH:D006073", "Gout", {"Gout", "Gouty Arthritis"}, {}});
    inv.Add({"MESH:D006505", "Hepatitis", {"Hepatitis"}, {}});
    std::vector<std::string> names = DictionaryNames(inv, {});
    index = SynonymIndex::Build(inv, NgramVocabulary::Fit(names));
    EncoderConfig ec;
    ec.dim = 8;
    ec.buckets = 512;
    encoder = HashedSubwordEncoder(ec, 1);
    ScorerConfig sc;
    sc.hidden = 8;
    sc.width_dim = 4;
    sc.max_span_width = 4;
    sc.lambda = lambda;
    model = SpanModel(sc, ec.dim, inv.num_labels(), 2);
  }

  void Add(const std::vector<std::string> &words,
           std::vector<LabeledSpan> gold) {
    TrainingSentence ts;
    ts.input.key = {"1", data.size()};
    ts.input.sentence = Words(words);
    ts.gold = std::move(gold);
    data.push_back(std::move(ts));
  }
};

TEST(SoftmaxCrossEntropyTest, HandComputed) {
  std::vector<double> scores = {0.0, std::log(3.0)}, probs(2);
  EXPECT_NEAR(SoftmaxCrossEntropy(scores, 1, probs), std::log(4.0 / 3.0), 1e-15);
  EXPECT_NEAR(probs[0], 0.25, 1e-15);
  EXPECT_NEAR(probs[1], 0.75, 1e-15);
  std::vector<double> huge = {1000.0, 0.0};
  EXPECT_NEAR(SoftmaxCrossEntropy(huge, 0, {}), 0.0, 1e-15);
  EXPECT_NEAR(SoftmaxCrossEntropy(huge, 1, {}), 1000.0, 1e-9);
}

TEST(TrainerTest, SampleKeepsGoldAndDrawsDisjointNegatives) {
  Fixture f;
  f.Add({"patients", "with", "gouty", "arthritis", "and", "asthma", "today"},
        {{{2, 4}, 1}, {{5, 6}, 0}});
  f.data[0].ignore = {{0, 1}};
  TrainConfig tc;
  tc.negative_ratio = 3;
  Trainer t(f.model, f.encoder, &f.encoder, f.index, f.data, tc);
  std::mt19937_64 rng(1);
  std::vector<size_t> ids = {0};
  for (int rep = 0; rep < 20; ++rep) {
    SampledBatch b = t.Sample(ids, rng);
    ASSERT_EQ(b.size(), 1u);
    const auto &spans = b[0].spans;
    ASSERT_EQ(spans.size(), 2u + 6u);
    EXPECT_EQ(spans[0].span, (SpanCandidate{2, 4}));
    EXPECT_EQ(spans[1].span, (SpanCandidate{5, 6}));
    std::set<SpanCandidate> seen;
    for (size_t i = 2; i < spans.size(); ++i) {
      EXPECT_EQ(spans[i].label, f.model.null_index());
      EXPECT_NE(spans[i].span, (SpanCandidate{0, 1}));
      EXPECT_NE(spans[i].span, (SpanCandidate{2, 4}));
      EXPECT_LE(spans[i].span.width(), 4u);
      EXPECT_TRUE(seen.insert(spans[i].span).second);
    }
  }
}

TEST(TrainerTest, NegativesCappedByPool) {
  Fixture f;
  f.Add({"asthma"}, {{{0, 1}, 0}});
  Trainer t(f.model, f.encoder, &f.encoder, f.index, f.data, TrainConfig{});
  std::mt19937_64 rng(1);
  std::vector<size_t> ids = {0};
  EXPECT_EQ(t.Sample(ids, rng)[0].spans.size(), 1u);
}

TEST(TrainerTest, LossDecreasesMonotonicallyOnFixedBatch) {
  Fixture f;
  f.Add({"a", "case", "of", "gout", "in", "men"}, {{{3, 4}, 1}});
  f.Add({"severe", "asthma", "was", "treated"}, {{{1, 2}, 0}});
  TrainConfig tc;
  tc.learning_rate = 1e-3;
  Trainer t(f.model, f.encoder, &f.encoder, f.index, f.data, tc);
  std::mt19937_64 rng(3);
  std::vector<size_t> ids = {0, 1};
  SampledBatch batch = t.Sample(ids, rng);
  double prev = t.Loss(batch, nullptr);
  for (int step = 0; step < 50; ++step) {
    t.Step(batch);
    double now = t.Loss(batch, nullptr);
    EXPECT_LT(now, prev) << "step " << step;
    prev = now;
  }
}

TEST(TrainerTest, RunIsDeterministic) {
  auto run = [] {
    Fixture f;
    f.Add({"a", "case", "of", "gout", "in", "men"}, {{{3, 4}, 1}});
    f.Add({"severe", "asthma", "was", "treated"}, {{{1, 2}, 0}});
    TrainConfig tc;
    tc.epochs = 3;
    tc.batch_size = 1;
    Trainer t(f.model, f.encoder, &f.encoder, f.index, f.data, tc);
    TrainStats s = t.Run();
    return std::make_pair(s.epoch_loss, f.model.params());
  };
  auto a = run(), b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(TrainerTest, OverfitsOneSentence) {
  Fixture f(0.0);
  f.Add({"chronic", "hepatitis", "and", "gouty", "arthritis", "were", "seen"},
        {{{1, 2}, 2}, {{3, 5}, 1}});
  TrainConfig tc;
  tc.learning_rate = 1e-2;
  tc.epochs = 200;
  tc.negative_ratio = 100;  // every span
  Trainer t(f.model, f.encoder, &f.encoder, f.index, f.data, tc);
  t.Run();
  auto preds = DecodeSentence(f.model, f.encoder, f.index, f.data[0].input);
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(preds[0].span, (SpanCandidate{1, 2}));
  EXPECT_EQ(preds[0].concept_index, 2u);
  EXPECT_EQ(preds[1].span, (SpanCandidate{3, 5}));
  EXPECT_EQ(preds[1].concept_index, 1u);
}

TEST(TrainerTest, NonFiniteLossIsNumericError) {
  Fixture f;
  f.Add({"gout"}, {{{0, 1}, 1}});
  f.model.params().ffnn_bias[0] = std::nan("");
  f.model.params().concept_weight.data.assign(
      f.model.params().concept_weight.data.size(), 1.0);
  Trainer t(f.model, f.encoder, &f.encoder, f.index, f.data, TrainConfig{});
  std::mt19937_64 rng(1);
  std::vector<size_t> ids = {0};
  SampledBatch b = t.Sample(ids, rng);
  EXPECT_THROW(t.Loss(b, nullptr), NumericError);
}

TEST(TrainerTest, RejectsMismatchedShapes) {
  Fixture f;
  f.Add({"gout"}, {{{0, 1}, 1}});
  SpanModel wrong(ScorerConfig{}, 8, 2, 1);
  EXPECT_THROW(Trainer(wrong, f.encoder, nullptr, f.index, f.data, TrainConfig{}),
               ValidationError);
  TrainConfig zero_lr;
  zero_lr.learning_rate = 0.0;
  EXPECT_THROW(Trainer(f.model, f.encoder, nullptr, f.index, f.data, zero_lr),
               ValidationError);
}

}  // namespace
}  // namespace spanlink
