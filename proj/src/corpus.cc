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

#include "spanlink/corpus.h"

#include <algorithm>
#include <array>
#include <charconv>

#include "spanlink/errors.h"
#include "spanlink/text.h"

namespace spanlink {

namespace {

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

bool ParseOffset(std::string_view s, size_t *out) {
  if (!AllDigits(s)) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void CheckMention(const AnnotatedDocument &doc, const GoldMention &m) {
  std::string text = doc.doc.Text();
  std::string where = "mention " + m.doc_id + ":" +
                      std::to_string(m.char_start) + "-" +
                      std::to_string(m.char_end) + " '" + m.surface + "'";
  if (m.char_start >= m.char_end || m.char_end > text.size()) {
    throw AlignmentError(where + " has offsets outside the document");
  }
  if (text.compare(m.char_start, m.char_end - m.char_start, m.surface) != 0) {
    throw AlignmentError(where + " does not match document text '" +
                         text.substr(m.char_start, m.char_end - m.char_start) +
                         "'");
  }
}

}  // namespace

std::string CanonicalCui(std::string_view raw) {
  std::string_view s = Trim(raw);
  if (s == kUnknownCui) return std::string(s);
  size_t colon = s.find(':');
  if (colon != std::string_view::npos) {
    std::string prefix = std::string(s.substr(0, colon));
    for (char &c : prefix) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return prefix + ":" + std::string(s.substr(colon + 1));
  }
  if (s.size() > 1 && (s[0] == 'D' || s[0] == 'C') && AllDigits(s.substr(1))) {
    return "MESH:" + std::string(s);
  }
  if (AllDigits(s)) return "OMIM:" + std::string(s);
  return std::string(s);
}

std::vector<std::string> SplitConceptIds(std::string_view raw) {
  std::vector<std::string> ids;
  size_t begin = 0;
  for (size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == '|' || raw[i] == '+') {
      std::string_view part = Trim(raw.substr(begin, i - begin));
      if (!part.empty()) {
        std::string cui = CanonicalCui(part);
        if (std::find(ids.begin(), ids.end(), cui) == ids.end()) {
          ids.push_back(std::move(cui));
        }
      }
      begin = i + 1;
    }
  }
  return ids;
}

bool IsDiseaseType(std::string_view type) {
  // BC5CDR uses "Disease"; NCBID uses four finer-grained disease classes.
  static constexpr std::array<std::string_view, 5> kTypes = {
      "Disease", "SpecificDisease", "DiseaseClass", "Modifier",
      "CompositeMention"};
  return std::find(kTypes.begin(), kTypes.end(), type) != kTypes.end();
}

std::vector<AnnotatedDocument> ParsePubtator(std::istream &in,
                                             PubtatorStats *stats) {
  std::vector<AnnotatedDocument> docs;
  PubtatorStats local;
  std::string line;
  int lineno = 0;
  // 0: expecting title, 1: expecting abstract, 2: inside mention block.
  int state = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      state = 0;
      continue;
    }
    if (line[0] == '#' && state == 0) continue;

    size_t bar = line.find('|');
    size_t tab = line.find('\t');
    bool is_text_line = bar != std::string::npos &&
                        (tab == std::string::npos || bar < tab) &&
                        line.size() >= bar + 3 && line[bar + 2] == '|';
    if (is_text_line) {
      std::string id = line.substr(0, bar);
      char kind = line[bar + 1];
      std::string body = line.substr(bar + 3);
      if (id.empty()) throw ParseError(lineno, "empty document id");
      if (kind == 't') {
        AnnotatedDocument d;
        d.doc.doc_id = id;
        d.doc.title = body;
        docs.push_back(std::move(d));
        state = 1;
      } else if (kind == 'a') {
        if (docs.empty() || state != 1 || docs.back().doc.doc_id != id) {
          throw ParseError(lineno, "abstract line without matching title");
        }
        docs.back().doc.abstract_text = body;
        state = 2;
      } else {
        throw ParseError(lineno, std::string("unknown text line kind '") +
                                     kind + "'");
      }
      continue;
    }

    if (docs.empty() || state == 0) {
      throw ParseError(lineno, "annotation line outside a document");
    }
    state = 2;
    std::vector<std::string> f = Split(line, '\t');
    if (f[0] != docs.back().doc.doc_id) {
      throw ParseError(lineno, "annotation for '" + f[0] +
                                   "' inside document '" +
                                   docs.back().doc.doc_id + "'");
    }
    size_t start = 0, end = 0;
    if (f.size() >= 2 && !AllDigits(f[1])) {
      // Relation lines such as "<id>\tCID\tD1\tD2".
      ++local.relation_lines;
      continue;
    }
    if (f.size() < 6) {
      throw ParseError(lineno, "expected 6 tab-separated fields, got " +
                                   std::to_string(f.size()));
    }
    if (!ParseOffset(f[1], &start) || !ParseOffset(f[2], &end)) {
      throw ParseError(lineno, "bad offsets");
    }
    if (!IsDiseaseType(f[4])) {
      ++local.dropped_non_disease;
      continue;
    }
    GoldMention m;
    m.doc_id = f[0];
    m.char_start = start;
    m.char_end = end;
    m.surface = f[3];
    m.type = f[4];
    m.raw_concept = f[5];
    m.concept_ids = SplitConceptIds(f[5]);
    if (m.concept_ids.empty()) {
      throw ParseError(lineno, "mention without a concept id");
    }
    m.extra_fields.assign(f.begin() + 6, f.end());
    CheckMention(docs.back(), m);
    docs.back().mentions.push_back(std::move(m));
    ++local.mentions;
  }
  local.documents = docs.size();
  if (stats != nullptr) *stats = local;
  return docs;
}

void WritePubtator(std::ostream &out,
                   const std::vector<AnnotatedDocument> &docs) {
  for (const AnnotatedDocument &d : docs) {
    out << d.doc.doc_id << "|t|" << d.doc.title << '\n';
    out << d.doc.doc_id << "|a|" << d.doc.abstract_text << '\n';
    for (const GoldMention &m : d.mentions) {
      out << m.doc_id << '\t' << m.char_start << '\t' << m.char_end << '\t'
          << m.surface << '\t' << m.type << '\t' << m.raw_concept;
      for (const std::string &x : m.extra_fields) out << '\t' << x;
      out << '\n';
    }
    out << '\n';
  }
}

std::vector<Token> Tokenize(std::string_view text, size_t base_offset) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsWordByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsWordByte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    tokens.push_back(
        Token{std::string(text.substr(i, j - i)), base_offset + i,
              base_offset + j});
    i = j;
  }
  return tokens;
}

namespace {

bool IsAbbreviation(std::string_view word) {
  static constexpr std::array<std::string_view, 22> kAbbrev = {
      "e.g", "i.e", "vs", "dr", "fig", "figs", "al", "approx", "ca", "cf",
      "mr", "mrs", "ms", "no", "nos", "st", "prof", "inc", "ltd", "jr",
      "sr", "viz"};
  std::string w = AsciiLower(word);
  while (!w.empty() && (w.back() == '.')) w.pop_back();
  while (!w.empty() && (w.front() == '(' || w.front() == '[')) w.erase(0, 1);
  return std::find(kAbbrev.begin(), kAbbrev.end(), w) != kAbbrev.end();
}

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsCloser(char c) {
  return c == ')' || c == ']' || c == '"' || c == '\'';
}

// Appends sentences for text[0, size) located at document offset `base`.
void SplitSegment(const std::string &doc_id, std::string_view text,
                  size_t base, std::vector<Sentence> *out) {
  auto emit = [&](size_t b, size_t e) {
    while (b < e && IsSpaceByte(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && IsSpaceByte(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b >= e) return;
    Sentence s;
    s.doc_id = doc_id;
    s.char_start = base + b;
    s.char_end = base + e;
    s.tokens = Tokenize(text.substr(b, e - b), base + b);
    out->push_back(std::move(s));
  };

  size_t begin = 0;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsTerminator(text[i])) {
      ++i;
      continue;
    }
    size_t word_begin = i;
    while (word_begin > begin &&
           !IsSpaceByte(static_cast<unsigned char>(text[word_begin - 1]))) {
      --word_begin;
    }
    size_t j = i;
    while (j < text.size() && (IsTerminator(text[j]) || IsCloser(text[j]))) {
      ++j;
    }
    if (j < text.size() && !IsSpaceByte(static_cast<unsigned char>(text[j]))) {
      i = j;
      continue;
    }
    size_t k = j;
    while (k < text.size() && IsSpaceByte(static_cast<unsigned char>(text[k]))) {
      ++k;
    }
    if (k == text.size()) break;
    unsigned char next = static_cast<unsigned char>(text[k]);
    bool capitalized = (next >= 'A' && next <= 'Z') ||
                       (next >= '0' && next <= '9');
    bool abbreviation =
        text[i] == '.' && IsAbbreviation(text.substr(word_begin, i - word_begin));
    if (capitalized && !abbreviation) {
      emit(begin, j);
      begin = k;
    }
    i = k;
  }
  emit(begin, text.size());
}

}  // namespace

std::vector<Sentence> SplitSentences(const RawDocument &doc) {
  std::vector<Sentence> sentences;
  SplitSegment(doc.doc_id, doc.title, 0, &sentences);
  SplitSegment(doc.doc_id, doc.abstract_text, doc.AbstractOffset(),
               &sentences);
  return sentences;
}

AlignmentResult AlignMentions(const std::vector<Sentence> &sentences,
                              const std::vector<GoldMention> &mentions) {
  AlignmentResult result;
  for (size_t mi = 0; mi < mentions.size(); ++mi) {
    const GoldMention &m = mentions[mi];
    struct Hit {
      size_t sentence, first, last;
    };
    std::vector<Hit> hits;
    for (size_t si = 0; si < sentences.size(); ++si) {
      const Sentence &s = sentences[si];
      if (s.char_end <= m.char_start || s.char_start >= m.char_end) continue;
      size_t first = s.tokens.size(), last = 0;
      for (size_t t = 0; t < s.tokens.size(); ++t) {
        const Token &tok = s.tokens[t];
        if (tok.char_end > m.char_start && tok.char_start < m.char_end) {
          first = std::min(first, t);
          last = t;
        }
      }
      if (first < s.tokens.size()) hits.push_back({si, first, last});
    }
    if (hits.empty()) {
      throw AlignmentError("mention " + m.doc_id + ":" +
                           std::to_string(m.char_start) + "-" +
                           std::to_string(m.char_end) + " '" + m.surface +
                           "' overlaps no token");
    }
    if (hits.size() > 1) {
      result.dropped_cross_sentence.push_back(mi);
      continue;
    }
    const Sentence &s = sentences[hits[0].sentence];
    AlignedMention a;
    a.mention_index = mi;
    a.sentence_index = hits[0].sentence;
    a.token_start = hits[0].first;
    a.token_end = hits[0].last + 1;
    a.concept_ids = m.concept_ids;
    a.snapped = s.tokens[a.token_start].char_start < m.char_start ||
                s.tokens[a.token_end - 1].char_end > m.char_end;
    if (a.snapped) ++result.snapped;
    result.aligned.push_back(std::move(a));
  }
  return result;
}

std::map<std::string, std::string> ReadSplitManifest(std::istream &in) {
  std::map<std::string, std::string> manifest;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> f = Split(t, '\t');
    if (f.size() != 2) throw ParseError(lineno, "expected <split>\\t<doc_id>");
    if (f[0] != "train" && f[0] != "dev" && f[0] != "test") {
      throw ParseError(lineno, "unknown split '" + f[0] + "'");
    }
    if (!manifest.emplace(f[1], f[0]).second) {
      throw ParseError(lineno, "document '" + f[1] + "' listed twice");
    }
  }
  return manifest;
}

}  // namespace spanlink
