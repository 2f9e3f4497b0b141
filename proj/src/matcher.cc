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

#include "spanlink/matcher.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "spanlink/binio.h"
#include "spanlink/errors.h"
#include "spanlink/text.h"

namespace spanlink {

namespace {
constexpr std::string_view kIndexMagic = "SLIX";
constexpr uint32_t kIndexVersion = 1;
}  // namespace

double SparseDot(const SparseVector &a, const SparseVector &b) {
  double s = 0.0;
  size_t i = 0, j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] < b.indices[j]) {
      ++i;
    } else if (a.indices[i] > b.indices[j]) {
      ++j;
    } else {
      s += a.weights[i] * b.weights[j];
      ++i;
      ++j;
    }
  }
  return s;
}

std::vector<std::string> NgramVocabulary::Grams(
    std::string_view normalized) const {
  std::string padded;
  padded.reserve(normalized.size() + 2);
  padded.push_back(config_.pad);
  for (char c : normalized) padded.push_back(c == ' ' ? config_.pad : c);
  padded.push_back(config_.pad);
  std::vector<std::string> grams;
  if (normalized.empty()) return grams;
  for (int n : config_.sizes) {
    size_t len = static_cast<size_t>(n);
    if (padded.size() < len) continue;
    for (size_t i = 0; i + len <= padded.size(); ++i) {
      grams.push_back(padded.substr(i, len));
    }
  }
  return grams;
}

NgramVocabulary NgramVocabulary::Fit(std::span<const std::string> names,
                                     const NgramConfig &config) {
  if (config.sizes.empty()) throw ValidationError("no n-gram sizes given");
  for (int n : config.sizes) {
    if (n < 1) throw ValidationError("n-gram size must be positive");
  }
  NgramVocabulary vocab;
  vocab.config_ = config;
  std::set<std::string> documents;
  for (const std::string &name : names) {
    std::string norm = NormalizeName(name);
    if (!norm.empty()) documents.insert(std::move(norm));
  }
  std::map<std::string, size_t> df;
  for (const std::string &doc : documents) {
    std::vector<std::string> grams = vocab.Grams(doc);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (std::string &g : grams) ++df[std::move(g)];
  }
  if (df.empty()) throw ValidationError("cannot fit n-gram IDF on no names");
  vocab.documents_ = documents.size();
  const double n_docs = static_cast<double>(vocab.documents_);
  for (const auto &[gram, count] : df) {
    vocab.index_.emplace(gram, static_cast<uint32_t>(vocab.grams_.size()));
    vocab.grams_.push_back(gram);
    vocab.idf_.push_back(
        std::log((1.0 + n_docs) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return vocab;
}

std::optional<uint32_t> NgramVocabulary::Find(std::string_view gram) const {
  auto it = index_.find(std::string(gram));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector NgramVocabulary::Vectorize(std::string_view text) const {
  std::map<uint32_t, double> tf;
  for (const std::string &g : Grams(NormalizeName(text))) {
    auto it = index_.find(g);
    if (it == index_.end()) continue;
    if (config_.binary_tf) {
      tf[it->second] = 1.0;
    } else {
      tf[it->second] += 1.0;
    }
  }
  SparseVector v;
  double norm2 = 0.0;
  for (const auto &[index, count] : tf) {
    double w = count * idf_[index];
    v.indices.push_back(index);
    v.weights.push_back(w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (double &w : v.weights) w *= inv;
  }
  return v;
}

void NgramVocabulary::Save(std::ostream &out) const {
  BinaryWriter w(out);
  w.U32(static_cast<uint32_t>(config_.sizes.size()));
  for (int n : config_.sizes) w.U32(static_cast<uint32_t>(n));
  w.U32(static_cast<uint32_t>(static_cast<unsigned char>(config_.pad)));
  w.U32(config_.binary_tf ? 1 : 0);
  w.U64(documents_);
  w.U64(grams_.size());
  for (size_t i = 0; i < grams_.size(); ++i) {
    w.String(grams_[i]);
    w.F64(idf_[i]);
  }
}

NgramVocabulary NgramVocabulary::Load(std::istream &in) {
  BinaryReader r(in, "n-gram vocabulary");
  NgramVocabulary vocab;
  uint32_t n_sizes = r.U32();
  if (n_sizes == 0 || n_sizes > 16) throw DataError("corrupt n-gram sizes");
  vocab.config_.sizes.clear();
  for (uint32_t i = 0; i < n_sizes; ++i) {
    vocab.config_.sizes.push_back(static_cast<int>(r.U32()));
  }
  vocab.config_.pad = static_cast<char>(r.U32());
  vocab.config_.binary_tf = r.U32() != 0;
  vocab.documents_ = r.U64();
  uint64_t n = r.U64();
  for (uint64_t i = 0; i < n; ++i) {
    std::string g = r.String();
    vocab.index_.emplace(g, static_cast<uint32_t>(i));
    vocab.grams_.push_back(std::move(g));
    vocab.idf_.push_back(r.F64());
  }
  return vocab;
}

std::vector<std::string> DictionaryNames(
    const ConceptInventory &inventory, const std::vector<GoldMention> &extra) {
  std::vector<std::string> names;
  for (const Concept &c : inventory.concepts()) {
    names.insert(names.end(), c.synonyms.begin(), c.synonyms.end());
  }
  for (const GoldMention &m : extra) names.push_back(m.surface);
  return names;
}

SynonymIndex SynonymIndex::Build(const ConceptInventory &inventory,
                                 NgramVocabulary vocab) {
  SynonymIndex index;
  index.vocab_ = std::move(vocab);
  index.inventory_hash_ = inventory.Hash();
  index.concept_synonyms_.resize(inventory.size());
  for (size_t c = 0; c < inventory.size(); ++c) {
    const Concept &entry = inventory.concept_at(c);
    index.cuis_.push_back(entry.cui);
    for (const std::string &s : entry.synonyms) {
      Synonym syn;
      syn.concept_index = static_cast<uint32_t>(c);
      syn.text = NormalizeName(s);
      syn.vector = index.vocab_.Vectorize(syn.text);
      index.concept_synonyms_[c].push_back(
          static_cast<uint32_t>(index.synonyms_.size()));
      index.synonyms_.push_back(std::move(syn));
    }
  }
  index.BuildPostings();
  return index;
}

void SynonymIndex::BuildPostings() {
  postings_.assign(vocab_.size(), {});
  for (size_t s = 0; s < synonyms_.size(); ++s) {
    const SparseVector &v = synonyms_[s].vector;
    for (size_t k = 0; k < v.size(); ++k) {
      postings_[v.indices[k]].push_back(
          Posting{static_cast<uint32_t>(s), v.weights[k]});
    }
  }
}

double SynonymIndex::DictScore(std::string_view span_text,
                               size_t concept_index) const {
  if (concept_index >= num_concepts()) return 0.0;
  SparseVector q = vocab_.Vectorize(span_text);
  if (q.empty()) return 0.0;
  double best = 0.0;
  for (uint32_t s : concept_synonyms_[concept_index]) {
    best = std::max(best, SparseDot(q, synonyms_[s].vector));
  }
  return best;
}

void SynonymIndex::ScoreAll(const SparseVector &query,
                            std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (query.empty()) return;
  std::vector<double> acc(synonyms_.size(), 0.0);
  std::vector<uint32_t> touched;
  // Query features in increasing order, so each synonym's sum is formed in
  // the same order as SparseDot.
  for (size_t k = 0; k < query.size(); ++k) {
    const double qw = query.weights[k];
    for (const Posting &p : postings_[query.indices[k]]) {
      if (acc[p.synonym] == 0.0) touched.push_back(p.synonym);
      acc[p.synonym] += qw * p.weight;
    }
  }
  for (uint32_t s : touched) {
    double &best = out[synonyms_[s].concept_index];
    best = std::max(best, acc[s]);
  }
}

std::vector<double> SynonymIndex::ScoreAll(std::string_view span_text) const {
  std::vector<double> out(num_concepts(), 0.0);
  ScoreAll(vocab_.Vectorize(span_text), out);
  return out;
}

namespace {

std::vector<ScoredConcept> RankNonzero(std::span<const double> scores,
                                       size_t k) {
  std::vector<ScoredConcept> ranked;
  for (size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] > 0.0) ranked.push_back({c, scores[c]});
  }
  auto better = [](const ScoredConcept &a, const ScoredConcept &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.concept_index < b.concept_index;
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(k),
                      ranked.end(), better);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), better);
  }
  return ranked;
}

}  // namespace

std::vector<ScoredConcept> SynonymIndex::TopK(std::string_view span_text,
                                              size_t k) const {
  if (k == 0) throw ValidationError("top-k needs k >= 1");
  return RankNonzero(ScoreAll(span_text), k);
}

std::vector<ScoredConcept> SynonymIndex::TopKBruteForce(
    std::string_view span_text, size_t k) const {
  if (k == 0) throw ValidationError("top-k needs k >= 1");
  std::vector<double> scores(num_concepts(), 0.0);
  for (size_t c = 0; c < num_concepts(); ++c) {
    scores[c] = DictScore(span_text, c);
  }
  return RankNonzero(scores, k);
}

void SynonymIndex::Save(std::ostream &out) const {
  BinaryWriter w(out);
  w.Magic(kIndexMagic);
  w.U32(kIndexVersion);
  w.U64(inventory_hash_);
  w.U64(config_hash_);
  vocab_.Save(out);
  w.U64(cuis_.size());
  for (const std::string &cui : cuis_) w.String(cui);
  w.U64(synonyms_.size());
  for (const Synonym &s : synonyms_) {
    w.U32(s.concept_index);
    w.String(s.text);
  }
  for (const std::vector<Posting> &list : postings_) {
    w.U64(list.size());
    for (const Posting &p : list) {
      w.U32(p.synonym);
      w.F64(p.weight);
    }
  }
}

SynonymIndex SynonymIndex::Load(std::istream &in) {
  BinaryReader r(in, "synonym index");
  r.ExpectMagic(kIndexMagic);
  uint32_t version = r.U32();
  if (version != kIndexVersion) {
    throw DataError("synonym index version " + std::to_string(version) +
                    " is not supported");
  }
  SynonymIndex index;
  index.inventory_hash_ = r.U64();
  index.config_hash_ = r.U64();
  index.vocab_ = NgramVocabulary::Load(in);
  uint64_t n_concepts = r.U64();
  for (uint64_t i = 0; i < n_concepts; ++i) index.cuis_.push_back(r.String());
  index.concept_synonyms_.resize(n_concepts);
  uint64_t n_synonyms = r.U64();
  for (uint64_t i = 0; i < n_synonyms; ++i) {
    Synonym s;
    s.concept_index = r.U32();
    if (s.concept_index >= n_concepts) throw DataError("corrupt synonym index");
    s.text = r.String();
    index.concept_synonyms_[s.concept_index].push_back(
        static_cast<uint32_t>(i));
    index.synonyms_.push_back(std::move(s));
  }
  index.postings_.resize(index.vocab_.size());
  for (size_t f = 0; f < index.postings_.size(); ++f) {
    uint64_t n = r.U64();
    for (uint64_t i = 0; i < n; ++i) {
      Posting p;
      p.synonym = r.U32();
      p.weight = r.F64();
      if (p.synonym >= n_synonyms) throw DataError("corrupt posting list");
      index.postings_[f].push_back(p);
      // Features are visited in increasing order, so vectors stay sorted.
      SparseVector &v = index.synonyms_[p.synonym].vector;
      v.indices.push_back(static_cast<uint32_t>(f));
      v.weights.push_back(p.weight);
    }
  }
  return index;
}

}  // namespace spanlink
