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

#ifndef SPANLINK_CORPUS_H_
#define SPANLINK_CORPUS_H_

// PubTator corpus ingestion: documents, gold disease mentions, sentence
// splitting, tokenization and mention-to-token alignment. All offsets are
// byte offsets into RawDocument::Text().

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace spanlink {

struct RawDocument {
  std::string doc_id;
  std::string title;
  std::string abstract_text;

  // Title, one separator byte, abstract (the PubTator offset convention).
  std::string Text() const { return title + " " + abstract_text; }
  size_t AbstractOffset() const { return title.size() + 1; }
};

struct GoldMention {
  std::string doc_id;
  size_t char_start = 0;
  size_t char_end = 0;  // exclusive
  std::string surface;
  // Canonical CUIs in annotation order, deduplicated. Composite annotations
  // carry more than one.
  std::vector<std::string> concept_ids;

  // Verbatim fields kept for lossless re-serialization.
  std::string type;
  std::string raw_concept;
  std::vector<std::string> extra_fields;
};

struct AnnotatedDocument {
  RawDocument doc;
  std::vector<GoldMention> mentions;
};

struct PubtatorStats {
  size_t documents = 0;
  size_t mentions = 0;
  size_t dropped_non_disease = 0;
  size_t relation_lines = 0;
};

// Marker used by BC5CDR for mentions without a normalization.
inline constexpr std::string_view kUnknownCui = "-1";

// Canonical MESH:/OMIM: form. Bare "D123456"/"C123456" become MESH ids,
// bare digit strings become OMIM ids. Returns kUnknownCui unchanged.
std::string CanonicalCui(std::string_view raw);

// Splits a composite concept field on '|' and '+' and canonicalizes each
// member. Empty members are dropped.
std::vector<std::string> SplitConceptIds(std::string_view raw);

bool IsDiseaseType(std::string_view type);

// Parses PubTator text. Lines starting with '#' are comments. Throws
// ParseError on malformed lines and AlignmentError when a mention's text
// differs from the document substring at its offsets.
std::vector<AnnotatedDocument> ParsePubtator(std::istream &in,
                                             PubtatorStats *stats = nullptr);

// Inverse of ParsePubtator for disease-only documents.
void WritePubtator(std::ostream &out,
                   const std::vector<AnnotatedDocument> &docs);

struct Token {
  std::string text;
  size_t char_start = 0;
  size_t char_end = 0;
};

struct Sentence {
  std::string doc_id;
  std::vector<Token> tokens;
  size_t char_start = 0;
  size_t char_end = 0;
};

// Maximal runs of word bytes; everything else separates tokens.
std::vector<Token> Tokenize(std::string_view text, size_t base_offset);

// Rule-based splitter: a run of [.!?] followed by whitespace and a token
// starting with an uppercase letter or digit ends a sentence unless the word
// before it is a known abbreviation. Title and abstract are split separately.
std::vector<Sentence> SplitSentences(const RawDocument &doc);

struct AlignedMention {
  size_t mention_index = 0;
  size_t sentence_index = 0;
  size_t token_start = 0;
  size_t token_end = 0;  // exclusive
  std::vector<std::string> concept_ids;
  // Mention boundaries fell inside a token and were widened.
  bool snapped = false;
};

struct AlignmentResult {
  std::vector<AlignedMention> aligned;
  // Indices into the input mention list.
  std::vector<size_t> dropped_cross_sentence;
  size_t snapped = 0;
};

// Maps each mention to the minimal covering token span. Throws
// AlignmentError for a mention that overlaps no token.
AlignmentResult AlignMentions(const std::vector<Sentence> &sentences,
                              const std::vector<GoldMention> &mentions);

// "<split>\t<doc_id>" lines; split is one of train, dev, test.
std::map<std::string, std::string> ReadSplitManifest(std::istream &in);

}  // namespace spanlink

#endif  // SPANLINK_CORPUS_H_
