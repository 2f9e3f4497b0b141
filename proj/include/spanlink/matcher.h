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

#ifndef SPANLINK_MATCHER_H_
#define SPANLINK_MATCHER_H_

// Dictionary-matching score: cosine similarity between character n-gram
// TF-IDF vectors, maximized over the synonyms of a concept. An inverted
// index over all synonyms answers "score every concept" in one pass.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spanlink/lexicon.h"

namespace spanlink {

struct NgramConfig {
  std::vector<int> sizes = {2, 3};
  char pad = '#';
  // Presence instead of raw counts for the TF term.
  bool binary_tf = false;
};

struct SparseVector {
  std::vector<uint32_t> indices;  // strictly increasing
  std::vector<double> weights;

  bool empty() const { return indices.empty(); }
  size_t size() const { return indices.size(); }
};

// Dot product of two sorted sparse vectors, summed in index order.
double SparseDot(const SparseVector &a, const SparseVector &b);

class NgramVocabulary {
 public:
  // Each distinct normalized name counts as one document. Throws
  // ValidationError when no name yields a gram.
  static NgramVocabulary Fit(std::span<const std::string> names,
                             const NgramConfig &config = {});

  // Grams of an already-normalized string, with one pad byte at each end
  // and every space replaced by the pad.
  std::vector<std::string> Grams(std::string_view normalized) const;

  // L2-normalized TF-IDF vector of NormalizeName(text). Unknown grams are
  // dropped; the result is empty when none are known.
  SparseVector Vectorize(std::string_view text) const;

  std::optional<uint32_t> Find(std::string_view gram) const;
  double idf(uint32_t index) const { return idf_[index]; }
  const std::string &gram(uint32_t index) const { return grams_[index]; }
  size_t size() const { return grams_.size(); }
  size_t document_count() const { return documents_; }
  const NgramConfig &config() const { return config_; }

  void Save(std::ostream &out) const;
  static NgramVocabulary Load(std::istream &in);

 private:
  NgramConfig config_;
  size_t documents_ = 0;
  std::vector<std::string> grams_;
  std::vector<double> idf_;
  std::unordered_map<std::string, uint32_t> index_;
};

// All synonyms of an inventory, fitted names for the IDF statistics.
std::vector<std::string> DictionaryNames(const ConceptInventory &inventory,
                                         const std::vector<GoldMention> &extra);

struct ScoredConcept {
  size_t concept_index;
  double score;

  bool operator==(const ScoredConcept &) const = default;
};

class SynonymIndex {
 public:
  static SynonymIndex Build(const ConceptInventory &inventory,
                            NgramVocabulary vocab);

  size_t num_concepts() const { return cuis_.size(); }
  size_t num_synonyms() const { return synonyms_.size(); }
  const NgramVocabulary &vocab() const { return vocab_; }
  const std::string &cui(size_t concept_index) const {
    return cuis_[concept_index];
  }
  uint64_t inventory_hash() const { return inventory_hash_; }
  // Provenance of the run that built the index; stored, never interpreted.
  uint64_t config_hash() const { return config_hash_; }
  void set_config_hash(uint64_t h) { config_hash_ = h; }

  // Max cosine over the concept's synonyms; 0 for the Null index
  // (num_concepts()).
  double DictScore(std::string_view span_text, size_t concept_index) const;

  // Dict score of every concept, via the postings. `out` has num_concepts()
  // entries.
  void ScoreAll(const SparseVector &query, std::span<double> out) const;
  std::vector<double> ScoreAll(std::string_view span_text) const;

  // Concepts with nonzero score, best first, ties by ascending index.
  std::vector<ScoredConcept> TopK(std::string_view span_text, size_t k) const;

  // Brute-force reference for TopK: every synonym vector compared directly.
  std::vector<ScoredConcept> TopKBruteForce(std::string_view span_text,
                                            size_t k) const;

  void Save(std::ostream &out) const;
  static SynonymIndex Load(std::istream &in);

 private:
  struct Synonym {
    uint32_t concept_index;
    std::string text;
    SparseVector vector;
  };
  struct Posting {
    uint32_t synonym;
    double weight;
  };

  void BuildPostings();

  NgramVocabulary vocab_;
  std::vector<std::string> cuis_;
  uint64_t inventory_hash_ = 0;
  uint64_t config_hash_ = 0;
  std::vector<Synonym> synonyms_;
  std::vector<std::vector<uint32_t>> concept_synonyms_;
  std::vector<std::vector<Posting>> postings_;
};

}  // namespace spanlink

#endif  // SPANLINK_MATCHER_H_
