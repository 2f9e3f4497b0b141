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

#ifndef SPANLINK_EVAL_H_
#define SPANLINK_EVAL_H_

// Entity-level NER micro-F1, abstract-level NEN micro-F1 and the split of
// test mentions into concepts seen / unseen in training.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "spanlink/corpus.h"

namespace spanlink {

struct PredictedMention {
  std::string doc_id;
  size_t char_start = 0;
  size_t char_end = 0;
  std::string cui;
};

struct Scores {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // Ratios are 0 when their denominator is 0.
  static Scores FromCounts(size_t tp, size_t fp, size_t fn);
};

// A prediction is correct iff (doc_id, start, end) equals an unmatched gold
// mention.
Scores NerF1(const std::vector<PredictedMention> &predictions,
             const std::vector<GoldMention> &gold);

using CuiFilter = std::function<bool(const std::string &)>;

// Per document: TP = |P & G|, FP = |P - G|, FN = |G - P| over CUI sets,
// summed over every document seen on either side. Composite gold mentions
// contribute each member; kUnknownCui never counts. When `keep` is set,
// predicted CUIs it rejects are ignored.
Scores NenF1(const std::vector<PredictedMention> &predictions,
             const std::vector<GoldMention> &gold,
             const CuiFilter &keep = nullptr);

std::set<std::string> ConceptSet(const std::vector<GoldMention> &gold);

struct ZeroShotSplit {
  std::vector<GoldMention> standard;
  std::vector<GoldMention> zero_shot;
  size_t standard_concepts = 0;
  size_t zero_shot_concepts = 0;
  // Mentions whose only concept is kUnknownCui.
  size_t unnormalized = 0;
};

// A mention is zero-shot iff none of its CUIs occurs in `training_concepts`.
ZeroShotSplit SplitZeroShot(const std::vector<GoldMention> &test,
                            const std::set<std::string> &training_concepts);

}  // namespace spanlink

#endif  // SPANLINK_EVAL_H_
