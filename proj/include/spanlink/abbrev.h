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

#ifndef SPANLINK_ABBREV_H_
#define SPANLINK_ABBREV_H_

// Local abbreviation resolution with the Schwartz-Hearst "long form (SF)"
// heuristic. Expansions only change the text handed to the dictionary
// matcher; token offsets and predictions stay on the original short form.

#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spanlink/corpus.h"

namespace spanlink {

struct AbbreviationPair {
  std::string short_form;
  std::string long_form;
  // Document offset of the long form; kNoOffset for pairs loaded from a file.
  size_t definition_offset = 0;

  static constexpr size_t kNoOffset = static_cast<size_t>(-1);
};

// Shortest suffix of `candidate` that starts at a word boundary and contains
// every alphanumeric character of `short_form` in order, the first one at a
// word start. Empty when no such suffix exists.
std::string BestLongForm(std::string_view short_form,
                         std::string_view candidate);

// Pairs in order of appearance in the document.
std::vector<AbbreviationPair> ExtractAbbreviations(const RawDocument &doc);

// A run of sentence tokens that spells a short form.
struct Expansion {
  size_t token_start = 0;
  size_t token_end = 0;  // exclusive
  std::string long_form;  // normalized
};

// Document-global table: the first definition of a short form wins and later
// differing definitions increment `conflicts`.
std::vector<Expansion> ExpandMentions(const Sentence &sentence,
                                      std::span<const AbbreviationPair> pairs,
                                      size_t *conflicts = nullptr);

// Normalized text of tokens [start, end) for dictionary matching, with every
// expansion that lies fully inside the span replaced by its long form.
std::string MatchText(const Sentence &sentence,
                      std::span<const Expansion> expansions, size_t start,
                      size_t end);

// "doc_id\tshort\tlong" lines, e.g. converted Ab3P output.
std::map<std::string, std::vector<AbbreviationPair>> ReadAbbreviationTsv(
    std::istream &in);

}  // namespace spanlink

#endif  // SPANLINK_ABBREV_H_
