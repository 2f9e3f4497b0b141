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

#include "spanlink/eval.h"

#include <map>
#include <tuple>

namespace spanlink {

Scores Scores::FromCounts(size_t tp, size_t fp, size_t fn) {
  Scores s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

Scores NerF1(const std::vector<PredictedMention> &predictions,
             const std::vector<GoldMention> &gold) {
  using Key = std::tuple<std::string, size_t, size_t>;
  std::map<Key, size_t> open;
  for (const GoldMention &g : gold) ++open[{g.doc_id, g.char_start, g.char_end}];
  size_t tp = 0;
  for (const PredictedMention &p : predictions) {
    auto it = open.find({p.doc_id, p.char_start, p.char_end});
    if (it != open.end() && it->second > 0) {
      --it->second;
      ++tp;
    }
  }
  return Scores::FromCounts(tp, predictions.size() - tp, gold.size() - tp);
}

Scores NenF1(const std::vector<PredictedMention> &predictions,
             const std::vector<GoldMention> &gold, const CuiFilter &keep) {
  std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>
      docs;
  for (const PredictedMention &p : predictions) {
    auto &entry = docs[p.doc_id];
    if (p.cui == kUnknownCui) continue;
    if (keep && !keep(p.cui)) continue;
    entry.first.insert(p.cui);
  }
  for (const GoldMention &g : gold) {
    auto &entry = docs[g.doc_id];
    for (const std::string &cui : g.concept_ids) {
      if (cui != kUnknownCui) entry.second.insert(cui);
    }
  }
  size_t tp = 0, fp = 0, fn = 0;
  for (const auto &[doc, sets] : docs) {
    const auto &[pred, truth] = sets;
    for (const std::string &c : pred) {
      if (truth.count(c) != 0) {
        ++tp;
      } else {
        ++fp;
      }
    }
    for (const std::string &c : truth) {
      if (pred.count(c) == 0) ++fn;
    }
  }
  return Scores::FromCounts(tp, fp, fn);
}

std::set<std::string> ConceptSet(const std::vector<GoldMention> &gold) {
  std::set<std::string> out;
  for (const GoldMention &g : gold) {
    for (const std::string &c : g.concept_ids) {
      if (c != kUnknownCui) out.insert(c);
    }
  }
  return out;
}

ZeroShotSplit SplitZeroShot(const std::vector<GoldMention> &test,
                            const std::set<std::string> &training_concepts) {
  ZeroShotSplit split;
  std::set<std::string> standard_concepts, zero_shot_concepts;
  for (const GoldMention &m : test) {
    bool any_known = false;
    bool seen = false;
    for (const std::string &c : m.concept_ids) {
      if (c == kUnknownCui) continue;
      any_known = true;
      if (training_concepts.count(c) != 0) seen = true;
    }
    if (!any_known) {
      ++split.unnormalized;
      continue;
    }
    for (const std::string &c : m.concept_ids) {
      if (c == kUnknownCui) continue;
      if (training_concepts.count(c) != 0) {
        standard_concepts.insert(c);
      } else if (!seen) {
        zero_shot_concepts.insert(c);
      }
    }
    (seen ? split.standard : split.zero_shot).push_back(m);
  }
  split.standard_concepts = standard_concepts.size();
  split.zero_shot_concepts = zero_shot_concepts.size();
  return split;
}

}  // namespace spanlink
