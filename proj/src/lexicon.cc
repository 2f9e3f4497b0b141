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

#include "spanlink/lexicon.h"

#include "spanlink/errors.h"
#include "spanlink/text.h"

namespace spanlink {

size_t ConceptInventory::synonym_count() const {
  size_t n = 0;
  for (const Concept &c : concepts_) n += c.synonyms.size();
  return n;
}

std::optional<size_t> ConceptInventory::Resolve(std::string_view raw) const {
  auto it = cui_index_.find(CanonicalCui(raw));
  if (it == cui_index_.end()) return std::nullopt;
  return it->second;
}

size_t ConceptInventory::Add(Concept entry) {
  entry.cui = CanonicalCui(entry.cui);
  if (primary_index_.count(entry.cui) != 0) {
    throw DataError("duplicate entry id " + entry.cui);
  }
  size_t index = concepts_.size();
  std::vector<std::string> synonyms;
  std::unordered_set<std::string> seen;
  auto take = [&](const std::string &s) {
    std::string key = NormalizeName(s);
    if (key.empty() || !seen.insert(key).second) return;
    synonyms.push_back(s);
  };
  take(entry.preferred_name);
  for (const std::string &s : entry.synonyms) take(s);
  if (synonyms.empty()) {
    throw DataError("entry " + entry.cui + " has no usable name");
  }
  entry.synonyms = std::move(synonyms);

  std::vector<std::string> alts;
  for (const std::string &a : entry.alt_cuis) {
    std::string cui = CanonicalCui(a);
    if (cui.empty() || cui == entry.cui) continue;
    alts.push_back(std::move(cui));
  }
  entry.alt_cuis = std::move(alts);

  primary_index_.emplace(entry.cui, index);
  // A primary id always wins over an alternative id of another concept.
  cui_index_[entry.cui] = index;
  for (const std::string &a : entry.alt_cuis) {
    if (primary_index_.count(a) == 0) cui_index_.emplace(a, index);
  }
  concepts_.push_back(std::move(entry));
  normalized_.push_back(std::move(seen));
  return index;
}

bool ConceptInventory::AddSynonym(size_t index, std::string_view surface) {
  std::string key = NormalizeName(surface);
  if (key.empty() || !normalized_[index].insert(key).second) return false;
  concepts_[index].synonyms.emplace_back(surface);
  return true;
}

uint64_t ConceptInventory::Hash() const {
  uint64_t h = Fnv1a64("spanlink-inventory");
  for (const Concept &c : concepts_) {
    h = Fnv1a64(c.cui, h);
    h = Fnv1a64(std::string_view("\x01", 1), h);
    for (const std::string &s : c.synonyms) {
      h = Fnv1a64(s, h);
      h = Fnv1a64(std::string_view("\x02", 1), h);
    }
  }
  return h;
}

ConceptInventory ParseMedic(std::istream &in, MedicStats *stats) {
  ConceptInventory inventory;
  MedicStats local;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = Split(line, '\t');
    if (f.size() < 2) throw ParseError(lineno, "expected at least 2 columns");
    ++local.rows;
    f.resize(8);
    Concept c;
    c.preferred_name = std::string(Trim(f[0]));
    c.cui = std::string(Trim(f[1]));
    if (c.cui.empty()) throw ParseError(lineno, "empty DiseaseID");
    if (NormalizeName(c.preferred_name).empty()) {
      ++local.skipped_empty_name;
      continue;
    }
    if (!f[2].empty()) c.alt_cuis = Split(f[2], '|');
    if (!f[7].empty()) {
      for (std::string &s : Split(f[7], '|')) {
        c.synonyms.emplace_back(Trim(s));
      }
    }
    try {
      inventory.Add(std::move(c));
    } catch (const DataError &e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (stats != nullptr) *stats = local;
  return inventory;
}

ConceptInventory AugmentWithTraining(ConceptInventory inventory,
                                     const std::vector<GoldMention> &gold,
                                     AugmentReport *report) {
  AugmentReport local;
  for (const GoldMention &m : gold) {
    if (m.concept_ids.size() != 1) {
      ++local.composite_skipped;
      continue;
    }
    std::optional<size_t> index = inventory.Resolve(m.concept_ids[0]);
    if (!index) {
      local.unmapped.push_back(m);
      continue;
    }
    if (inventory.AddSynonym(*index, m.surface)) ++local.added;
  }
  if (report != nullptr) *report = std::move(local);
  return inventory;
}

void WriteUnmappedReport(std::ostream &out, const AugmentReport &report) {
  for (const GoldMention &m : report.unmapped) {
    out << m.doc_id << '\t' << m.char_start << '\t' << m.char_end << '\t'
        << m.surface << '\t' << m.raw_concept << '\n';
  }
}

}  // namespace spanlink
