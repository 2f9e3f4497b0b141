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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spanlink/binio.h"
#include "spanlink/errors.h"
#include "spanlink/text.h"

namespace spanlink {

namespace {

constexpr std::string_view kCheckpointMagic = "SLCK";
constexpr uint32_t kCheckpointVersion = 1;

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::vector<AnnotatedDocument> LoadCorpus(const std::string &paths,
                                          PubtatorStats *stats) {
  std::vector<AnnotatedDocument> docs;
  PubtatorStats total;
  for (const std::string &raw : Split(paths, ',')) {
    std::string path(Trim(raw));
    if (path.empty()) continue;
    std::ifstream in = OpenInput(path);
    PubtatorStats s;
    std::vector<AnnotatedDocument> part;
    try {
      part = ParsePubtator(in, &s);
    } catch (const DataError &e) {
      throw DataError(path + ": " + e.what());
    }
    docs.insert(docs.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
    total.documents += s.documents;
    total.mentions += s.mentions;
    total.dropped_non_disease += s.dropped_non_disease;
    total.relation_lines += s.relation_lines;
  }
  if (stats != nullptr) *stats = total;
  return docs;
}

ConceptInventory LoadMedic(const std::string &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseMedic(in);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

PreparedDocument PrepareDocument(const AnnotatedDocument &doc,
                                 const AbbreviationTable *override_table) {
  PreparedDocument out;
  out.annotated = doc;
  std::vector<Sentence> sentences = SplitSentences(doc.doc);
  out.alignment = AlignMentions(sentences, doc.mentions);

  std::vector<AbbreviationPair> pairs;
  auto it = override_table != nullptr ? override_table->find(doc.doc.doc_id)
                                      : AbbreviationTable::const_iterator();
  if (override_table != nullptr && it != override_table->end()) {
    pairs = it->second;
  } else {
    pairs = ExtractAbbreviations(doc.doc);
  }
  for (size_t i = 0; i < sentences.size(); ++i) {
    PreparedSentence ps;
    ps.key = SentenceKey{doc.doc.doc_id, i};
    // Conflicts are a property of the document table; count them once.
    ps.expansions = ExpandMentions(sentences[i], pairs,
                                   i == 0 ? &out.abbreviation_conflicts : nullptr);
    ps.sentence = std::move(sentences[i]);
    out.sentences.push_back(std::move(ps));
  }
  return out;
}

std::vector<PreparedDocument> PrepareCorpus(
    const std::vector<AnnotatedDocument> &docs,
    const AbbreviationTable *override_table) {
  std::vector<PreparedDocument> out;
  out.reserve(docs.size());
  for (const AnnotatedDocument &d : docs) {
    out.push_back(PrepareDocument(d, override_table));
  }
  return out;
}

std::vector<TrainingSentence> BuildTrainingSentences(
    const std::vector<PreparedDocument> &docs,
    const ConceptInventory &inventory, size_t *unresolved) {
  std::vector<TrainingSentence> out;
  size_t missing = 0;
  for (const PreparedDocument &doc : docs) {
    std::vector<TrainingSentence> sentences(doc.sentences.size());
    for (size_t i = 0; i < doc.sentences.size(); ++i) {
      sentences[i].input = doc.sentences[i];
    }
    for (const AlignedMention &m : doc.alignment.aligned) {
      TrainingSentence &ts = sentences[m.sentence_index];
      SpanCandidate span{m.token_start, m.token_end};
      bool duplicate = std::any_of(ts.gold.begin(), ts.gold.end(),
                                   [&](const LabeledSpan &g) {
                                     return g.span == span;
                                   });
      if (duplicate) continue;
      std::optional<size_t> label;
      for (const std::string &cui : m.concept_ids) {
        if ((label = inventory.Resolve(cui))) break;
      }
      if (label) {
        ts.gold.push_back({span, *label});
      } else {
        ts.ignore.push_back(span);
        ++missing;
      }
    }
    for (TrainingSentence &ts : sentences) {
      if (!ts.input.sentence.tokens.empty()) out.push_back(std::move(ts));
    }
  }
  if (unresolved != nullptr) *unresolved = missing;
  return out;
}

std::vector<GoldMention> AllMentions(
    const std::vector<AnnotatedDocument> &docs) {
  std::vector<GoldMention> out;
  for (const AnnotatedDocument &d : docs) {
    out.insert(out.end(), d.mentions.begin(), d.mentions.end());
  }
  return out;
}

std::vector<GoldMention> MapToPrimary(std::vector<GoldMention> gold,
                                      const ConceptInventory &inventory) {
  for (GoldMention &m : gold) {
    std::vector<std::string> ids;
    for (const std::string &cui : m.concept_ids) {
      std::optional<size_t> idx = inventory.Resolve(cui);
      std::string mapped = idx ? inventory.concept_at(*idx).cui : cui;
      if (std::find(ids.begin(), ids.end(), mapped) == ids.end()) {
        ids.push_back(std::move(mapped));
      }
    }
    m.concept_ids = std::move(ids);
  }
  return gold;
}

NgramConfig NgramConfigFrom(const RunConfig &config) {
  NgramConfig ngrams;
  ngrams.sizes = ParseNgramSizes(config.ngram_sizes);
  ngrams.binary_tf = config.binary_tf;
  return ngrams;
}

Dictionary BuildDictionary(ConceptInventory medic,
                           const std::vector<GoldMention> &training_gold,
                           const NgramConfig &ngrams) {
  AugmentReport report;
  ConceptInventory inventory =
      AugmentWithTraining(std::move(medic), training_gold, &report);
  std::vector<std::string> names = DictionaryNames(inventory, training_gold);
  NgramVocabulary vocab = NgramVocabulary::Fit(names, ngrams);
  SynonymIndex index = SynonymIndex::Build(inventory, std::move(vocab));
  return Dictionary{std::move(inventory), std::move(index), std::move(report)};
}

void SaveCheckpoint(std::ostream &out, const Checkpoint &c) {
  BinaryWriter w(out);
  w.Magic(kCheckpointMagic);
  w.U32(kCheckpointVersion);
  w.String(c.config_echo);
  w.U64(c.config_hash);
  w.U64(c.inventory_hash);
  w.String(c.encoder_kind);
  if (c.baseline != nullptr) {
    const EncoderConfig &ec = c.baseline->config();
    w.U64(ec.dim);
    w.U64(ec.window);
    w.U64(ec.buckets);
    w.U32(static_cast<uint32_t>(ec.min_ngram));
    w.U32(static_cast<uint32_t>(ec.max_ngram));
    w.F64(ec.self_weight);
    w.Doubles(c.baseline->table().data);
  }
  c.model.Save(out);
}

Checkpoint LoadCheckpoint(std::istream &in) {
  BinaryReader r(in, "checkpoint");
  r.ExpectMagic(kCheckpointMagic);
  uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint version " + std::to_string(version) +
                    " is not supported");
  }
  Checkpoint c;
  c.config_echo = r.String();
  c.config_hash = r.U64();
  c.inventory_hash = r.U64();
  c.encoder_kind = r.String();
  if (c.encoder_kind == "baseline") {
    EncoderConfig ec;
    ec.dim = r.U64();
    ec.window = r.U64();
    ec.buckets = r.U64();
    ec.min_ngram = static_cast<int>(r.U32());
    ec.max_ngram = static_cast<int>(r.U32());
    ec.self_weight = r.F64();
    // Seed is irrelevant: the table is overwritten.
    auto enc = std::make_unique<HashedSubwordEncoder>(ec, 0);
    std::vector<double> table = r.Doubles();
    if (table.size() != enc->table().data.size()) {
      throw DataError("checkpoint encoder table has the wrong size");
    }
    enc->table().data = std::move(table);
    c.baseline = std::move(enc);
  } else if (c.encoder_kind != "precomputed") {
    throw DataError("unknown encoder kind '" + c.encoder_kind + "'");
  }
  c.model = SpanModel::Load(in);
  return c;
}

void SaveCheckpointFile(const std::string &path, const Checkpoint &c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  SaveCheckpoint(out, c);
}

Checkpoint LoadCheckpointFile(const std::string &path) {
  std::ifstream in = OpenInput(path);
  return LoadCheckpoint(in);
}

TrainResult TrainModel(const RunConfig &config,
                       const std::vector<TrainingSentence> &sentences,
                       const SynonymIndex &index, const Encoder *precomputed) {
  ValidateConfig(config);
  if (sentences.empty()) throw ValidationError("training set is empty");
  TrainResult result;
  Checkpoint &c = result.checkpoint;
  c.config_echo = SerializeConfig(config);
  c.config_hash = ConfigHash(config);
  c.inventory_hash = index.inventory_hash();
  c.encoder_kind = config.encoder;

  const Encoder *encoder = precomputed;
  HashedSubwordEncoder *trainable = nullptr;
  if (config.encoder == "baseline") {
    EncoderConfig ec;
    ec.dim = config.embedding_dim;
    ec.window = config.window;
    ec.buckets = config.hash_buckets;
    c.baseline = std::make_unique<HashedSubwordEncoder>(ec, config.seed);
    encoder = c.baseline.get();
    trainable = c.baseline.get();
  } else if (encoder == nullptr) {
    throw ValidationError("precomputed encoder requested without embeddings");
  }

  ScorerConfig sc;
  sc.max_span_width = config.max_span_width;
  sc.width_dim = config.width_dim;
  sc.hidden = config.hidden;
  sc.lambda = config.lambda;
  sc.score_on_raw_g = config.score_on_raw_g;
  c.model = SpanModel(sc, encoder->dim(), index.num_concepts() + 1,
                      config.seed + 1);

  TrainConfig tc;
  tc.learning_rate = config.learning_rate;
  tc.batch_size = config.batch_size;
  tc.epochs = config.epochs;
  tc.seed = config.seed + 2;
  tc.negative_ratio = config.negative_ratio;
  tc.null_weight = config.null_weight;
  Trainer trainer(c.model, *encoder, trainable, index, sentences, tc);
  result.stats = trainer.Run();
  return result;
}

std::vector<DocumentPredictions> PredictCorpus(
    const SpanModel &model, const Encoder &encoder, const SynonymIndex &index,
    const std::vector<PreparedDocument> &docs) {
  std::vector<DocumentPredictions> out;
  for (const PreparedDocument &doc : docs) {
    DocumentPredictions dp;
    dp.doc_id = doc.annotated.doc.doc_id;
    for (const PreparedSentence &s : doc.sentences) {
      std::vector<Prediction> p = DecodeSentence(model, encoder, index, s);
      dp.predictions.insert(dp.predictions.end(), p.begin(), p.end());
    }
    out.push_back(std::move(dp));
  }
  return out;
}

std::vector<PredictedMention> ToPredictedMentions(
    const std::vector<DocumentPredictions> &predictions,
    const SynonymIndex &index) {
  std::vector<PredictedMention> out;
  for (const DocumentPredictions &dp : predictions) {
    for (const Prediction &p : dp.predictions) {
      out.push_back(PredictedMention{dp.doc_id, p.char_start, p.char_end,
                                     index.cui(p.concept_index)});
    }
  }
  return out;
}

void WritePredictionsPubtator(std::ostream &out,
                              const std::vector<PreparedDocument> &docs,
                              const std::vector<DocumentPredictions> &preds,
                              const SynonymIndex &index) {
  std::vector<AnnotatedDocument> annotated;
  for (size_t i = 0; i < docs.size(); ++i) {
    AnnotatedDocument d;
    d.doc = docs[i].annotated.doc;
    const std::string text = d.doc.Text();
    for (const Prediction &p : preds[i].predictions) {
      GoldMention m;
      m.doc_id = d.doc.doc_id;
      m.char_start = p.char_start;
      m.char_end = p.char_end;
      m.surface = text.substr(p.char_start, p.char_end - p.char_start);
      m.type = "Disease";
      m.raw_concept = index.cui(p.concept_index);
      m.concept_ids = {m.raw_concept};
      d.mentions.push_back(std::move(m));
    }
    annotated.push_back(std::move(d));
  }
  WritePubtator(out, annotated);
}

void WriteScoreTsv(std::ostream &out,
                   const std::vector<PreparedDocument> &docs,
                   const std::vector<DocumentPredictions> &preds,
                   const SynonymIndex &index) {
  out << "doc_id\tstart\tend\tsurface\tcui\tcombined\tcontext\tdict\n";
  char buf[96];
  for (size_t i = 0; i < docs.size(); ++i) {
    const std::string text = docs[i].annotated.doc.Text();
    for (const Prediction &p : preds[i].predictions) {
      std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\t%.17g", p.combined,
                    p.context, p.dict);
      out << preds[i].doc_id << '\t' << p.char_start << '\t' << p.char_end
          << '\t' << text.substr(p.char_start, p.char_end - p.char_start)
          << '\t' << index.cui(p.concept_index) << '\t' << buf << '\n';
    }
  }
}

EvaluationReport Evaluate(const std::vector<PredictedMention> &predictions,
                          const std::vector<GoldMention> &test_gold,
                          const std::set<std::string> &training_concepts) {
  EvaluationReport r;
  r.ner = NerF1(predictions, test_gold);
  r.nen = NenF1(predictions, test_gold);
  r.split = SplitZeroShot(test_gold, training_concepts);
  r.nen_standard =
      NenF1(predictions, r.split.standard, [&](const std::string &cui) {
        return training_concepts.count(cui) != 0;
      });
  r.nen_zero_shot =
      NenF1(predictions, r.split.zero_shot, [&](const std::string &cui) {
        return training_concepts.count(cui) == 0;
      });
  return r;
}

namespace {

nlohmann::json ScoreJson(const std::string &metric, const std::string &subset,
                         const Scores &s) {
  return {{"metric", metric},   {"subset", subset}, {"precision", s.precision},
          {"recall", s.recall}, {"f1", s.f1},       {"tp", s.tp},
          {"fp", s.fp},         {"fn", s.fn}};
}

}  // namespace

nlohmann::json ReportToJson(const EvaluationReport &r) {
  nlohmann::json j;
  j["metrics"] = nlohmann::json::array({
      ScoreJson("ner", "all", r.ner),
      ScoreJson("nen", "all", r.nen),
      ScoreJson("nen", "standard", r.nen_standard),
      ScoreJson("nen", "zero_shot", r.nen_zero_shot),
  });
  j["split"] = {
      {"standard_mentions", r.split.standard.size()},
      {"standard_concepts", r.split.standard_concepts},
      {"zero_shot_mentions", r.split.zero_shot.size()},
      {"zero_shot_concepts", r.split.zero_shot_concepts},
      {"unnormalized_mentions", r.split.unnormalized},
  };
  return j;
}

std::string ReportToTable(const EvaluationReport &r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %-10s %9s %9s %9s %7s %7s %7s\n",
                "metric", "subset", "precision", "recall", "f1", "tp", "fp",
                "fn");
  out << line;
  auto row = [&](const char *metric, const char *subset, const Scores &s) {
    std::snprintf(line, sizeof(line),
                  "%-6s %-10s %9.4f %9.4f %9.4f %7zu %7zu %7zu\n", metric,
                  subset, s.precision, s.recall, s.f1, s.tp, s.fp, s.fn);
    out << line;
  };
  row("ner", "all", r.ner);
  row("nen", "all", r.nen);
  row("nen", "standard", r.nen_standard);
  row("nen", "zero-shot", r.nen_zero_shot);
  out << "standard: " << r.split.standard.size() << " mentions / "
      << r.split.standard_concepts << " concepts; zero-shot: "
      << r.split.zero_shot.size() << " mentions / "
      << r.split.zero_shot_concepts << " concepts\n";
  return out.str();
}

std::string ConfigHeader(const RunConfig &config) {
  return "# config-hash: " + HexDigest(ConfigHash(config));
}

}  // namespace spanlink
