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

#ifndef SPANLINK_LEXICON_H_
#define SPANLINK_LEXICON_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spanlink/corpus.h"

namespace spanlink {

struct Concept {
  std::string cui;
  std::string preferred_name;
  // Preferred name first; unique under NormalizeName.
  std::vector<std::string> synonyms;
  std::vector<std::string> alt_cuis;
};

// The label set: concepts 0..N-1 plus the Null label at index N. Null is
// not stored as a Concept.
class ConceptInventory {
 public:
  size_t size() const { return concepts_.size(); }
  size_t null_index() const { return concepts_.size(); }
  size_t num_labels() const { return concepts_.size() + 1; }

  const Concept &concept_at(size_t index) const { return concepts_[index]; }
  const std::vector<Concept> &concepts() const { return concepts_; }
  size_t synonym_count() const;

  // Canonicalizes `raw` and looks it up among primary and alternative ids.
  std::optional<size_t> Resolve(std::string_view raw) const;

  // Appends a concept. Throws DataError if its primary id is already a
  // primary id. Synonyms are deduplicated; those that normalize to nothing
  // are dropped.
  size_t Add(Concept entry);

  // Adds `surface` unless an equivalent synonym exists. Returns true if added.
  bool AddSynonym(size_t index, std::string_view surface);

  // Stable digest of ids and synonyms, used to pair checkpoints with indexes.
  uint64_t Hash() const;

 private:
  std::vector<Concept> concepts_;
  std::vector<std::unordered_set<std::string>> normalized_;
  std::unordered_map<std::string, size_t> primary_index_;
  std::unordered_map<std::string, size_t> cui_index_;
};

struct MedicStats {
  size_t rows = 0;
  size_t skipped_empty_name = 0;
};

// MEDIC TSV: DiseaseName, DiseaseID, AltDiseaseIDs, Definition, ParentIDs,
// TreeNumbers, ParentTreeNumbers, Synonyms. '|' separates list entries.
ConceptInventory ParseMedic(std::istream &in, MedicStats *stats = nullptr);

struct AugmentReport {
  size_t added = 0;
  size_t composite_skipped = 0;
  // Mentions whose CUI is not in the inventory.
  std::vector<GoldMention> unmapped;
};

// Adds every single-concept training surface as a synonym of its concept.
ConceptInventory AugmentWithTraining(ConceptInventory inventory,
                                     const std::vector<GoldMention> &gold,
                                     AugmentReport *report = nullptr);

// One line per unmapped mention: doc_id, start, end, surface, raw concept id.
void WriteUnmappedReport(std::ostream &out, const AugmentReport &report);

}  // namespace spanlink

#endif  // SPANLINK_LEXICON_H_
