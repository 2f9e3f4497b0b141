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

#ifndef SPANLINK_SYNTHETIC_H_
#define SPANLINK_SYNTHETIC_H_

// A small generated corpus for exercising the zero-shot mechanism: a
// vocabulary of disease concepts, training documents that mention only part
// of them, and test documents that also mention concepts never seen in
// training but present in the vocabulary.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "spanlink/corpus.h"

namespace spanlink {

struct SyntheticSuite {
  std::string medic_tsv;
  std::vector<AnnotatedDocument> train;
  std::vector<AnnotatedDocument> test;
  // CUIs that occur in test gold only.
  std::set<std::string> zero_shot_cuis;
};

struct SyntheticOptions {
  size_t train_concepts = 20;
  size_t zero_shot_concepts = 10;
  // Vocabulary entries never mentioned anywhere.
  size_t distractor_concepts = 10;
  // Training sentences per training concept.
  size_t train_mentions_per_concept = 2;
  // Test sentences mentioning training concepts.
  size_t test_standard_sentences = 10;
  uint64_t seed = 7;
};

// Two sentences per document (title and abstract), one mention per
// sentence. Deterministic in `options`.
SyntheticSuite MakeSyntheticSuite(const SyntheticOptions &options = {});

}  // namespace spanlink

#endif  // SPANLINK_SYNTHETIC_H_
