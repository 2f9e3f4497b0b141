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


#include "spanlink/pipeline.h"

#include <gtest/gtest.h>

#include <sstream>

#include "spanlink/errors.h"
#include "spanlink/synthetic.h"

namespace spanlink {
namespace {

ConceptInventory SuiteMedic(const SyntheticSuite &suite) {
  std::istringstream in(suite.medic_tsv);
  return ParseMedic(in);
}

TEST(SyntheticSuiteTest, ShapeAndZeroShotProperty) {
  SyntheticSuite s = MakeSyntheticSuite();
  EXPECT_EQ(s.train.size(), 20u);
  EXPECT_EQ(s.test.size(), 10u);
  size_t sentences = 0;
  for (const auto *docs : {&s.train, &s.test}) {
    for (const AnnotatedDocument &d : *docs) {
      sentences += SplitSentences(d.doc).size();
    }
  }
  EXPECT_EQ(sentences, 60u);
  std::set<std::string> train = ConceptSet(AllMentions(s.train));
  ZeroShotSplit split = SplitZeroShot(AllMentions(s.test), train);
  EXPECT_EQ(split.zero_shot_concepts, 10u);
  EXPECT_EQ(s.zero_shot_cuis.size(), 10u);
  ConceptInventory medic = SuiteMedic(s);
  for (const std::string &cui : s.zero_shot_cuis) {
    EXPECT_EQ(train.count(cui), 0u);
    EXPECT_TRUE(medic.Resolve(cui).has_value()) << cui;
  }
  // Serializes to valid PubTator.
  std::stringstream buf;
  WritePubtator(buf, s.train);
  EXPECT_EQ(ParsePubtator(buf).size(), 20u);
}

TEST(SyntheticSuiteTest, Deterministic) {
  std::ostringstream a, b;
  WritePubtator(a, MakeSyntheticSuite().test);
  WritePubtator(b, MakeSyntheticSuite().test);
  EXPECT_EQ(a.str(), b.str());
}

TEST(PrepareDocumentTest, AlignsAndExpandsAbbreviations) {
  AnnotatedDocument d;
  d.doc.doc_id = "42";
  d.doc.title = "Hereditary nonpolyposis colorectal cancer (HNPCC) in adults.";
  d.doc.abstract_text = "HNPCC is inherited.";
  GoldMention m;
  m.doc_id = "42";
  m.char_start = 61;
  m.char_end = 66;
  m.surface = "HNPCC";
  m.type = "Disease";
  m.raw_concept = "D003123";
  m.concept_ids = {"MESH:D003123"};
  d.mentions.push_back(m);
  PreparedDocument p = PrepareDocument(d, nullptr);
  ASSERT_EQ(p.sentences.size(), 2u);
  ASSERT_EQ(p.alignment.aligned.size(), 1u);
  EXPECT_EQ(p.alignment.aligned[0].sentence_index, 1u);
  const PreparedSentence &s = p.sentences[1];
  EXPECT_EQ(s.key.sentence_index, 1u);
  EXPECT_EQ(MatchText(s.sentence, s.expansions, 0, 1), "hereditary nonpolyposis colorectal cancer");

  // An override table replaces the extractor for listed documents.
  AbbreviationTable table;
  table["42"] = {{"HNPCC", "lynch syndrome", AbbreviationPair::kNoOffset}};
  PreparedDocument q = PrepareDocument(d, &table);
  EXPECT_EQ(MatchText(q.sentences[1].sentence, q.sentences[1].expansions, 0, 1),
            "lynch syndrome");
}

TEST(BuildTrainingSentencesTest, LabelsAndUnresolved) {
  SyntheticSuite s = MakeSyntheticSuite();
  Dictionary dict = BuildDictionary(SuiteMedic(s), AllMentions(s.train), {});
  AnnotatedDocument extra = s.train[0];
  extra.mentions[1].concept_ids = {"MESH:D999999"};
  std::vector<AnnotatedDocument> docs = {s.train[1], extra};
  size_t unresolved = 0;
  auto sentences =
      BuildTrainingSentences(PrepareCorpus(docs, nullptr), dict.inventory,
                             &unresolved);
  ASSERT_EQ(sentences.size(), 4u);
  EXPECT_EQ(unresolved, 1u);
  EXPECT_EQ(sentences[3].gold.size(), 0u);
  EXPECT_EQ(sentences[3].ignore.size(), 1u);
  const LabeledSpan &g = sentences[0].gold.at(0);
  EXPECT_EQ(dict.inventory.concept_at(g.label).cui,
            s.train[1].mentions[0].concept_ids[0]);
}

TEST(BuildDictionaryTest, TrainingSurfacesBecomeSynonyms) {
  SyntheticSuite s = MakeSyntheticSuite();
  std::vector<GoldMention> gold = AllMentions(s.train);
  gold[0].surface = "breast carcinoma variant";
  Dictionary dict = BuildDictionary(SuiteMedic(s), gold, {});
  EXPECT_GE(dict.augment.added, 1u);
  size_t c = *dict.inventory.Resolve(gold[0].concept_ids[0]);
  EXPECT_NEAR(dict.index.DictScore("breast carcinoma variant", c), 1.0, 1e-12);
  EXPECT_EQ(dict.index.inventory_hash(), dict.inventory.Hash());
}

TEST(CheckpointTest, RoundTripAndCorruption) {
  SyntheticSuite s = MakeSyntheticSuite();
  Dictionary dict = BuildDictionary(SuiteMedic(s), AllMentions(s.train), {});
  auto sentences = BuildTrainingSentences(PrepareCorpus(s.train, nullptr),
                                          dict.inventory);
  RunConfig config;
  config.epochs = 1;
  config.hash_buckets = 1024;
  TrainResult r = TrainModel(config, sentences, dict.index);
  std::stringstream buf;
  SaveCheckpoint(buf, r.checkpoint);
  std::string bytes = buf.str();
  Checkpoint back = LoadCheckpoint(buf);
  EXPECT_EQ(back.model.params(), r.checkpoint.model.params());
  EXPECT_EQ(back.baseline->table(), r.checkpoint.baseline->table());
  EXPECT_EQ(back.config_hash, ConfigHash(config));
  EXPECT_EQ(back.inventory_hash, dict.index.inventory_hash());
  std::stringstream again;
  SaveCheckpoint(again, back);
  EXPECT_EQ(again.str(), bytes);
  std::stringstream cut(bytes.substr(0, bytes.size() - 10));
  EXPECT_THROW(LoadCheckpoint(cut), DataError);
  EXPECT_THROW(LoadCheckpointFile("/nonexistent/ckpt.bin"), Error);
}

TEST(PipelineTest, DictionaryOnlyPredictionsAndReports) {
  SyntheticSuite s = MakeSyntheticSuite();
  Dictionary dict = BuildDictionary(SuiteMedic(s), AllMentions(s.train), {});
  auto sentences = BuildTrainingSentences(PrepareCorpus(s.train, nullptr),
                                          dict.inventory);
  RunConfig config;
  config.epochs = 1;
  config.hash_buckets = 1024;
  TrainResult r = TrainModel(config, sentences, dict.index);
  auto test = PrepareCorpus(s.test, nullptr);
  auto preds = PredictCorpus(r.checkpoint.model, *r.checkpoint.baseline,
                             dict.index, test);
  ASSERT_EQ(preds.size(), test.size());
  std::ostringstream pub, tsv;
  WritePredictionsPubtator(pub, test, preds, dict.index);
  WriteScoreTsv(tsv, test, preds, dict.index);
  std::istringstream reread(pub.str());
  auto parsed = ParsePubtator(reread);
  EXPECT_EQ(parsed.size(), test.size());
  EXPECT_EQ(tsv.str().substr(0, 6), "doc_id");
  EvaluationReport report =
      Evaluate(ToPredictedMentions(preds, dict.index),
               MapToPrimary(AllMentions(s.test), dict.inventory),
               ConceptSet(AllMentions(s.train)));
  nlohmann::json j = ReportToJson(report);
  EXPECT_EQ(j["split"]["zero_shot_concepts"], 10);
  EXPECT_NE(ReportToTable(report).find("zero-shot"), std::string::npos);
}

TEST(MapToPrimaryTest, RewritesAlternativeIds) {
  ConceptInventory inv;
  inv.Add({"MESH:D003123", "HNPCC", {}, {"OMIM:120435"}});
  GoldMention g;
  g.concept_ids = {"OMIM:120435", "MESH:D1"};
  auto out = MapToPrimary({g}, inv);
  EXPECT_EQ(out[0].concept_ids,
            (std::vector<std::string>{"MESH:D003123", "MESH:D1"}));
}

TEST(ConfigHeaderTest, Format) {
  RunConfig c;
  std::string h = ConfigHeader(c);
  EXPECT_EQ(h.rfind("# config-hash: ", 0), 0u);
  EXPECT_EQ(h.size(), std::string("# config-hash: ").size() + 16);
}

}  // namespace
}  // namespace spanlink
