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

#ifndef SPANLINK_PIPELINE_H_
#define SPANLINK_PIPELINE_H_

// End-to-end wiring used by the command-line tool and the integration
// tests: corpus preparation, dictionary building, training, prediction,
// evaluation and checkpoints.

#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "spanlink/abbrev.h"
#include "spanlink/config.h"
#include "spanlink/corpus.h"
#include "spanlink/encoder.h"
#include "spanlink/eval.h"
#include "spanlink/lexicon.h"
#include "spanlink/matcher.h"
#include "spanlink/spanmodel.h"
#include "spanlink/trainer.h"

#include "json.hpp"

namespace spanlink {

// Reads and concatenates comma-separated PubTator files.
std::vector<AnnotatedDocument> LoadCorpus(const std::string &paths,
                                          PubtatorStats *stats = nullptr);

ConceptInventory LoadMedic(const std::string &path);

using AbbreviationTable = std::map<std::string, std::vector<AbbreviationPair>>;

struct PreparedDocument {
  AnnotatedDocument annotated;
  std::vector<PreparedSentence> sentences;
  AlignmentResult alignment;
  size_t abbreviation_conflicts = 0;
};

// Splits, tokenizes, aligns gold and resolves abbreviations. Pairs from
// `override_table` replace the built-in extractor for documents it lists.
PreparedDocument PrepareDocument(const AnnotatedDocument &doc,
                                 const AbbreviationTable *override_table);

std::vector<PreparedDocument> PrepareCorpus(
    const std::vector<AnnotatedDocument> &docs,
    const AbbreviationTable *override_table);

// Gold spans labelled with the first resolvable CUI of each mention.
std::vector<TrainingSentence> BuildTrainingSentences(
    const std::vector<PreparedDocument> &docs,
    const ConceptInventory &inventory, size_t *unresolved = nullptr);

std::vector<GoldMention> AllMentions(const std::vector<AnnotatedDocument> &docs);

// Replaces alternative ids by the primary id of their concept so that gold
// and predictions share one namespace. Unknown ids are kept.
std::vector<GoldMention> MapToPrimary(std::vector<GoldMention> gold,
                                      const ConceptInventory &inventory);

struct Dictionary {
  ConceptInventory inventory;
  SynonymIndex index;
  AugmentReport augment;
};

// MEDIC merged with training surfaces; IDF fitted on all synonyms plus
// training surfaces.
Dictionary BuildDictionary(ConceptInventory medic,
                           const std::vector<GoldMention> &training_gold,
                           const NgramConfig &ngrams);

NgramConfig NgramConfigFrom(const RunConfig &config);

// Trained parameters plus the encoder they were trained with.
struct Checkpoint {
  std::string config_echo;
  uint64_t config_hash = 0;
  uint64_t inventory_hash = 0;
  std::string encoder_kind;
  SpanModel model;
  std::unique_ptr<HashedSubwordEncoder> baseline;  // null for precomputed
};

void SaveCheckpoint(std::ostream &out, const Checkpoint &checkpoint);
Checkpoint LoadCheckpoint(std::istream &in);
void SaveCheckpointFile(const std::string &path, const Checkpoint &checkpoint);
Checkpoint LoadCheckpointFile(const std::string &path);

struct TrainResult {
  Checkpoint checkpoint;
  TrainStats stats;
};

// `precomputed` must be set when config.encoder == "precomputed".
TrainResult TrainModel(const RunConfig &config,
                       const std::vector<TrainingSentence> &sentences,
                       const SynonymIndex &index,
                       const Encoder *precomputed = nullptr);

struct DocumentPredictions {
  std::string doc_id;
  std::vector<Prediction> predictions;
};

std::vector<DocumentPredictions> PredictCorpus(
    const SpanModel &model, const Encoder &encoder, const SynonymIndex &index,
    const std::vector<PreparedDocument> &docs);

std::vector<PredictedMention> ToPredictedMentions(
    const std::vector<DocumentPredictions> &predictions,
    const SynonymIndex &index);

// PubTator with predicted mentions (type "Disease").
void WritePredictionsPubtator(std::ostream &out,
                              const std::vector<PreparedDocument> &docs,
                              const std::vector<DocumentPredictions> &preds,
                              const SynonymIndex &index);

// doc_id, start, end, surface, cui, combined, context, dict.
void WriteScoreTsv(std::ostream &out,
                   const std::vector<PreparedDocument> &docs,
                   const std::vector<DocumentPredictions> &preds,
                   const SynonymIndex &index);

struct EvaluationReport {
  Scores ner;
  Scores nen;
  Scores nen_standard;
  Scores nen_zero_shot;
  ZeroShotSplit split;
};

EvaluationReport Evaluate(const std::vector<PredictedMention> &predictions,
                          const std::vector<GoldMention> &test_gold,
                          const std::set<std::string> &training_concepts);

nlohmann::json ReportToJson(const EvaluationReport &report);
std::string ReportToTable(const EvaluationReport &report);

// "# config-hash: <hex>" line heading text artifacts.
std::string ConfigHeader(const RunConfig &config);

}  // namespace spanlink

#endif  // SPANLINK_PIPELINE_H_
