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

// Command-line entry points: ingest, build-dict, train, predict, evaluate,
// match, ablate and synth. Exit codes: 0 ok, 1 validation, 2 data error,
// 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "spanlink/config.h"
#include "spanlink/errors.h"
#include "spanlink/pipeline.h"
#include "spanlink/synthetic.h"
#include "spanlink/text.h"

namespace spanlink {
namespace {

using nlohmann::json;

struct Options {
  std::string config_file;
  std::map<std::string, std::string> overrides;
  std::string out;
  std::string input;
  std::string manifest;
  std::string predictions;
  std::string unmapped;
};

// Every config key becomes a --<key> flag on the subcommand.
void AddConfigFlags(CLI::App *cmd, Options *opts) {
  cmd->add_option("--config", opts->config_file, "key=value config file");
  for (const std::string &key : ConfigKeys()) {
    std::string flag = "--" + key;
    for (char &c : flag) {
      if (c == '_') c = '-';
    }
    cmd->add_option_function<std::string>(
        flag, [opts, key](const std::string &v) { opts->overrides[key] = v; },
        "override config key " + key);
  }
}

RunConfig ResolveConfig(const Options &opts) {
  RunConfig config;
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) throw ValidationError("cannot open config '" + opts.config_file + "'");
    ReadConfigFile(in, &config);
  }
  for (const auto &[k, v] : opts.overrides) SetConfigValue(&config, k, v);
  ValidateConfig(config);
  return config;
}

void Require(const std::string &value, const std::string &key) {
  if (value.empty()) throw ValidationError(key + " is required");
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  return out;
}

std::string TrainCorpora(const RunConfig &config) {
  Require(config.train_corpus, "train_corpus");
  std::string paths = config.train_corpus;
  if (config.merge_dev) {
    Require(config.dev_corpus, "dev_corpus");
    paths += "," + config.dev_corpus;
  }
  return paths;
}

std::unique_ptr<AbbreviationTable> LoadAbbreviations(const RunConfig &config) {
  if (config.abbreviations.empty()) return nullptr;
  std::ifstream in(config.abbreviations);
  if (!in) throw ValidationError("cannot open '" + config.abbreviations + "'");
  return std::make_unique<AbbreviationTable>(ReadAbbreviationTsv(in));
}

std::unique_ptr<PrecomputedEncoder> LoadEmbeddings(const RunConfig &config) {
  if (config.encoder != "precomputed") return nullptr;
  Require(config.embeddings, "embeddings");
  std::ifstream in(config.embeddings, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + config.embeddings + "'");
  return std::make_unique<PrecomputedEncoder>(EmbeddingStore::Read(in));
}

SynonymIndex LoadIndex(const std::string &path) {
  Require(path, "index");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return SynonymIndex::Load(in);
}

Dictionary DictionaryFor(const RunConfig &config,
                         const std::vector<AnnotatedDocument> &train) {
  Require(config.medic, "medic");
  Dictionary dict = BuildDictionary(LoadMedic(config.medic), AllMentions(train),
                                    NgramConfigFrom(config));
  dict.index.set_config_hash(ConfigHash(config));
  return dict;
}

int CmdIngest(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  Require(opts.input, "--input");
  Require(opts.out, "--out");
  PubtatorStats stats;
  std::vector<AnnotatedDocument> docs = LoadCorpus(opts.input, &stats);
  size_t sentences = 0, cross = 0, snapped = 0;
  for (const AnnotatedDocument &d : docs) {
    PreparedDocument p = PrepareDocument(d, nullptr);
    sentences += p.sentences.size();
    cross += p.alignment.dropped_cross_sentence.size();
    snapped += p.alignment.snapped;
  }
  std::map<std::string, std::vector<AnnotatedDocument>> parts;
  if (!opts.manifest.empty()) {
    std::ifstream in(opts.manifest);
    if (!in) throw ValidationError("cannot open '" + opts.manifest + "'");
    std::map<std::string, std::string> manifest = ReadSplitManifest(in);
    for (const AnnotatedDocument &d : docs) {
      auto it = manifest.find(d.doc.doc_id);
      if (it == manifest.end()) {
        throw DataError("document " + d.doc.doc_id + " missing from manifest");
      }
      parts[it->second].push_back(d);
    }
  } else {
    parts[""] = docs;
  }
  json summary = {{"config_hash", HexDigest(ConfigHash(config))},
                  {"documents", stats.documents},
                  {"mentions", stats.mentions},
                  {"dropped_non_disease", stats.dropped_non_disease},
                  {"relation_lines", stats.relation_lines},
                  {"sentences", sentences},
                  {"dropped_cross_sentence", cross},
                  {"snapped_mentions", snapped}};
  for (const auto &[split, split_docs] : parts) {
    std::string path = opts.out + (split.empty() ? "" : "." + split) + ".pubtator";
    std::ofstream out = OpenOutput(path);
    out << ConfigHeader(config) << '\n';
    WritePubtator(out, split_docs);
    summary["files"][path] = split_docs.size();
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int CmdBuildDict(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  Require(config.index, "index");
  std::vector<AnnotatedDocument> train = LoadCorpus(TrainCorpora(config));
  Dictionary dict = DictionaryFor(config, train);
  std::ofstream out = OpenOutput(config.index);
  dict.index.Save(out);
  if (!opts.unmapped.empty()) {
    std::ofstream rep = OpenOutput(opts.unmapped);
    rep << ConfigHeader(config) << '\n';
    WriteUnmappedReport(rep, dict.augment);
  }
  json summary = {{"config_hash", HexDigest(ConfigHash(config))},
                  {"concepts", dict.inventory.size()},
                  {"synonyms", dict.index.num_synonyms()},
                  {"added_training_synonyms", dict.augment.added},
                  {"unmapped_mentions", dict.augment.unmapped.size()},
                  {"ngrams", dict.index.vocab().size()}};
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int CmdTrain(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  Require(config.checkpoint, "checkpoint");
  std::vector<AnnotatedDocument> train = LoadCorpus(TrainCorpora(config));
  Dictionary dict = DictionaryFor(config, train);
  if (!config.index.empty() && std::filesystem::exists(config.index)) {
    SynonymIndex on_disk = LoadIndex(config.index);
    if (on_disk.inventory_hash() != dict.index.inventory_hash()) {
      throw ValidationError("index '" + config.index +
                            "' was built from a different inventory");
    }
  }
  std::unique_ptr<AbbreviationTable> abbrev = LoadAbbreviations(config);
  std::vector<PreparedDocument> prepared = PrepareCorpus(train, abbrev.get());
  size_t unresolved = 0;
  std::vector<TrainingSentence> sentences =
      BuildTrainingSentences(prepared, dict.inventory, &unresolved);
  std::unique_ptr<PrecomputedEncoder> embeddings = LoadEmbeddings(config);
  TrainResult result = TrainModel(config, sentences, dict.index, embeddings.get());
  SaveCheckpointFile(config.checkpoint, result.checkpoint);
  json summary = {{"config_hash", HexDigest(ConfigHash(config))},
                  {"sentences", sentences.size()},
                  {"unresolved_gold", unresolved},
                  {"steps", result.stats.steps},
                  {"epoch_loss", result.stats.epoch_loss}};
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int CmdPredict(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  Require(config.checkpoint, "checkpoint");
  Require(config.test_corpus, "test_corpus");
  Require(opts.out, "--out");
  Checkpoint ckpt = LoadCheckpointFile(config.checkpoint);
  SynonymIndex index = LoadIndex(config.index);
  if (ckpt.inventory_hash != index.inventory_hash()) {
    throw ValidationError("checkpoint and index were built from different inventories");
  }
  std::unique_ptr<PrecomputedEncoder> embeddings;
  const Encoder *encoder = ckpt.baseline.get();
  if (encoder == nullptr) {
    RunConfig with_embeddings = config;
    with_embeddings.encoder = "precomputed";
    embeddings = LoadEmbeddings(with_embeddings);
    encoder = embeddings.get();
  }
  std::unique_ptr<AbbreviationTable> abbrev = LoadAbbreviations(config);
  std::vector<PreparedDocument> docs =
      PrepareCorpus(LoadCorpus(config.test_corpus), abbrev.get());
  std::vector<DocumentPredictions> preds =
      PredictCorpus(ckpt.model, *encoder, index, docs);
  std::ofstream pub = OpenOutput(opts.out + ".pubtator");
  pub << ConfigHeader(config) << '\n';
  WritePredictionsPubtator(pub, docs, preds, index);
  std::ofstream tsv = OpenOutput(opts.out + ".scores.tsv");
  tsv << ConfigHeader(config) << '\n';
  WriteScoreTsv(tsv, docs, preds, index);
  size_t n = 0;
  for (const DocumentPredictions &d : preds) n += d.predictions.size();
  std::cout << json({{"config_hash", HexDigest(ConfigHash(config))},
                     {"documents", docs.size()},
                     {"predictions", n}})
                   .dump(2)
            << '\n';
  return 0;
}

std::set<std::string> TrainingConcepts(const RunConfig &config,
                                       const ConceptInventory *inventory) {
  std::vector<GoldMention> gold = AllMentions(LoadCorpus(TrainCorpora(config)));
  if (inventory != nullptr) gold = MapToPrimary(std::move(gold), *inventory);
  return ConceptSet(gold);
}

json EvaluationJson(const RunConfig &config, const EvaluationReport &report) {
  json j = ReportToJson(report);
  j["config_hash"] = HexDigest(ConfigHash(config));
  return j;
}

int CmdEvaluate(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  Require(opts.predictions, "--predictions");
  Require(config.test_corpus, "test_corpus");
  std::unique_ptr<ConceptInventory> inventory;
  if (!config.medic.empty()) {
    inventory = std::make_unique<ConceptInventory>(LoadMedic(config.medic));
  }
  std::vector<GoldMention> gold = AllMentions(LoadCorpus(config.test_corpus));
  if (inventory) gold = MapToPrimary(std::move(gold), *inventory);
  std::vector<PredictedMention> predicted;
  for (const GoldMention &m : AllMentions(LoadCorpus(opts.predictions))) {
    predicted.push_back({m.doc_id, m.char_start, m.char_end, m.concept_ids[0]});
  }
  EvaluationReport report =
      Evaluate(predicted, gold, TrainingConcepts(config, inventory.get()));
  json j = EvaluationJson(config, report);
  if (!opts.out.empty()) {
    std::ofstream out = OpenOutput(opts.out);
    out << j.dump(2) << '\n';
  }
  std::cout << ReportToTable(report);
  return 0;
}

int CmdMatch(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  SynonymIndex index = LoadIndex(config.index);
  std::ifstream file;
  std::istream *in = &std::cin;
  if (!opts.input.empty() && opts.input != "-") {
    file.open(opts.input);
    if (!file) throw ValidationError("cannot open '" + opts.input + "'");
    in = &file;
  }
  std::ofstream file_out;
  std::ostream *out = &std::cout;
  if (!opts.out.empty()) {
    file_out = OpenOutput(opts.out);
    out = &file_out;
  }
  *out << ConfigHeader(config) << '\n';
  std::string line;
  char score[32];
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (const ScoredConcept &sc : index.TopK(line, config.top_k)) {
      std::snprintf(score, sizeof(score), "%.6f", sc.score);
      *out << line << '\t' << index.cui(sc.concept_index) << '\t' << score
           << '\n';
    }
  }
  return 0;
}

struct AblationRun {
  EvaluationReport report;
  std::string checkpoint_bytes;
};

AblationRun RunOnce(RunConfig config, const Dictionary &dict,
                    const std::vector<TrainingSentence> &sentences,
                    const std::vector<PreparedDocument> &test,
                    const std::vector<GoldMention> &test_gold,
                    const std::set<std::string> &training_concepts,
                    const Encoder *embeddings) {
  TrainResult result = TrainModel(config, sentences, dict.index, embeddings);
  const Encoder *encoder = result.checkpoint.baseline
                               ? result.checkpoint.baseline.get()
                               : embeddings;
  std::vector<DocumentPredictions> preds =
      PredictCorpus(result.checkpoint.model, *encoder, dict.index, test);
  AblationRun run;
  run.report = Evaluate(ToPredictedMentions(preds, dict.index), test_gold,
                        training_concepts);
  std::ostringstream bytes;
  SaveCheckpoint(bytes, result.checkpoint);
  run.checkpoint_bytes = bytes.str();
  return run;
}

int CmdAblate(const Options &opts) {
  RunConfig config = ResolveConfig(opts);
  Require(config.test_corpus, "test_corpus");
  std::vector<AnnotatedDocument> train = LoadCorpus(TrainCorpora(config));
  Dictionary dict = DictionaryFor(config, train);
  std::unique_ptr<AbbreviationTable> abbrev = LoadAbbreviations(config);
  std::vector<TrainingSentence> sentences = BuildTrainingSentences(
      PrepareCorpus(train, abbrev.get()), dict.inventory);
  std::vector<AnnotatedDocument> test_docs = LoadCorpus(config.test_corpus);
  std::vector<PreparedDocument> test = PrepareCorpus(test_docs, abbrev.get());
  std::vector<GoldMention> test_gold =
      MapToPrimary(AllMentions(test_docs), dict.inventory);
  std::set<std::string> training_concepts =
      ConceptSet(MapToPrimary(AllMentions(train), dict.inventory));
  std::unique_ptr<PrecomputedEncoder> embeddings = LoadEmbeddings(config);

  RunConfig without = config;
  without.lambda = 0.0;
  AblationRun base = RunOnce(without, dict, sentences, test, test_gold,
                             training_concepts, embeddings.get());
  AblationRun full = RunOnce(config, dict, sentences, test, test_gold,
                             training_concepts, embeddings.get());

  auto delta = [](const Scores &a, const Scores &b) { return b.f1 - a.f1; };
  json j;
  j["config_hash"] = HexDigest(ConfigHash(config));
  j["without_dictionary"] = ReportToJson(base.report);
  j["without_dictionary"]["lambda"] = 0.0;
  j["with_dictionary"] = ReportToJson(full.report);
  j["with_dictionary"]["lambda"] = config.lambda;
  j["f1_delta"] = {
      {"ner", delta(base.report.ner, full.report.ner)},
      {"nen", delta(base.report.nen, full.report.nen)},
      {"nen_standard", delta(base.report.nen_standard, full.report.nen_standard)},
      {"nen_zero_shot",
       delta(base.report.nen_zero_shot, full.report.nen_zero_shot)}};
  if (!opts.out.empty()) {
    std::ofstream out = OpenOutput(opts.out);
    out << j.dump(2) << '\n';
  }
  std::cout << "lambda = 0\n" << ReportToTable(base.report);
  std::cout << "lambda = " << config.lambda << "\n" << ReportToTable(full.report);
  return 0;
}

int CmdSynth(const Options &opts) {
  Require(opts.out, "--out");
  std::filesystem::create_directories(opts.out);
  SyntheticSuite suite = MakeSyntheticSuite();
  std::filesystem::path dir(opts.out);
  OpenOutput((dir / "medic.tsv").string()) << suite.medic_tsv;
  std::ofstream train = OpenOutput((dir / "train.pubtator").string());
  WritePubtator(train, suite.train);
  std::ofstream test = OpenOutput((dir / "test.pubtator").string());
  WritePubtator(test, suite.test);
  return 0;
}

}  // namespace
}  // namespace spanlink

int main(int argc, char **argv) {
  using namespace spanlink;
  CLI::App app{"Joint disease recognition and normalization with span and "
               "dictionary scores"};
  app.require_subcommand(1);
  Options opts;

  CLI::App *ingest = app.add_subcommand("ingest", "validate and cache a corpus");
  AddConfigFlags(ingest, &opts);
  ingest->add_option("--input", opts.input, "PubTator file(s), comma-separated");
  ingest->add_option("--manifest", opts.manifest, "split manifest");
  ingest->add_option("--out", opts.out, "output prefix");

  CLI::App *build = app.add_subcommand("build-dict", "build the synonym index");
  AddConfigFlags(build, &opts);
  build->add_option("--unmapped", opts.unmapped, "unmapped-CUI report path");

  CLI::App *train = app.add_subcommand("train", "train a checkpoint");
  AddConfigFlags(train, &opts);

  CLI::App *predict = app.add_subcommand("predict", "tag and normalize a corpus");
  AddConfigFlags(predict, &opts);
  predict->add_option("--out", opts.out, "output prefix");

  CLI::App *evaluate = app.add_subcommand("evaluate", "score predictions");
  AddConfigFlags(evaluate, &opts);
  evaluate->add_option("--predictions", opts.predictions, "predicted PubTator");
  evaluate->add_option("--out", opts.out, "metrics JSON path");

  CLI::App *match = app.add_subcommand("match", "top-k dictionary lookup");
  AddConfigFlags(match, &opts);
  match->add_option("--input", opts.input, "one span per line (default stdin)");
  match->add_option("--out", opts.out, "TSV output (default stdout)");

  CLI::App *ablate = app.add_subcommand("ablate", "train with and without the dictionary");
  AddConfigFlags(ablate, &opts);
  ablate->add_option("--out", opts.out, "report JSON path");

  CLI::App *synth = app.add_subcommand("synth", "write the synthetic zero-shot suite");
  synth->add_option("--out", opts.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kValidation);
  }

  try {
    if (*ingest) return CmdIngest(opts);
    if (*build) return CmdBuildDict(opts);
    if (*train) return CmdTrain(opts);
    if (*predict) return CmdPredict(opts);
    if (*evaluate) return CmdEvaluate(opts);
    if (*match) return CmdMatch(opts);
    if (*ablate) return CmdAblate(opts);
    if (*synth) return CmdSynth(opts);
  } catch (const Error &e) {
    std::cerr << "spanlink: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception &e) {
    std::cerr << "spanlink: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
  return 0;
}
