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

#include "spanlink/abbrev.h"

#include <algorithm>
#include <unordered_map>

#include "spanlink/errors.h"
#include "spanlink/text.h"

namespace spanlink {

namespace {

bool IsAlnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

unsigned char Lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<unsigned char>(c - 'A' + 'a')
                                : c;
}

bool PlausibleShortForm(std::string_view sf) {
  if (sf.size() < 2 || sf.size() > 10) return false;
  if (!IsAlnum(static_cast<unsigned char>(sf[0]))) return false;
  if (std::count(sf.begin(), sf.end(), ' ') > 1) return false;
  return std::any_of(sf.begin(), sf.end(), [](char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
  });
}

}  // namespace

std::string BestLongForm(std::string_view short_form,
                         std::string_view candidate) {
  long s = static_cast<long>(short_form.size()) - 1;
  long l = static_cast<long>(candidate.size()) - 1;
  while (s >= 0) {
    unsigned char c = Lower(static_cast<unsigned char>(short_form[s]));
    if (!IsAlnum(c)) {
      --s;
      continue;
    }
    while (l >= 0 &&
           (Lower(static_cast<unsigned char>(candidate[l])) != c ||
            (s == 0 && l > 0 &&
             IsAlnum(static_cast<unsigned char>(candidate[l - 1]))))) {
      --l;
    }
    if (l < 0) return {};
    --l;
    --s;
  }
  // Extend back to the start of the word holding the first match.
  size_t begin = static_cast<size_t>(l + 1);
  while (begin > 0 && !IsSpaceByte(static_cast<unsigned char>(
                          candidate[begin - 1]))) {
    --begin;
  }
  return std::string(Trim(candidate.substr(begin)));
}

std::vector<AbbreviationPair> ExtractAbbreviations(const RawDocument &doc) {
  std::vector<AbbreviationPair> pairs;
  const std::string text = doc.Text();
  for (const Sentence &sentence : SplitSentences(doc)) {
    for (size_t open = sentence.char_start; open < sentence.char_end; ++open) {
      if (text[open] != '(') continue;
      size_t close = open + 1;
      while (close < sentence.char_end && text[close] != '(' &&
             text[close] != ')') {
        ++close;
      }
      // Only innermost parentheticals.
      if (close >= sentence.char_end || text[close] != ')') continue;

      std::string_view inner(text.data() + open + 1, close - open - 1);
      size_t cut = inner.find_first_of(",;");
      if (cut != std::string_view::npos) inner = inner.substr(0, cut);
      std::string_view sf = Trim(inner);
      if (!PlausibleShortForm(sf)) continue;

      // Candidate window: words before '(' back to the sentence start or an
      // enclosing bracket, at most min(|SF| + 5, 2 |SF|) words.
      size_t window_begin = open;
      while (window_begin > sentence.char_start &&
             text[window_begin - 1] != '(' && text[window_begin - 1] != ')') {
        --window_begin;
      }
      std::string_view window(text.data() + window_begin, open - window_begin);
      window = Trim(window);
      if (window.empty()) continue;
      const size_t max_words = std::min(sf.size() + 5, sf.size() * 2);
      size_t words = 0;
      size_t pos = window.size();
      while (pos > 0 && words < max_words) {
        while (pos > 0 && IsSpaceByte(static_cast<unsigned char>(window[pos - 1]))) {
          --pos;
        }
        while (pos > 0 && !IsSpaceByte(static_cast<unsigned char>(window[pos - 1]))) {
          --pos;
        }
        ++words;
      }
      std::string_view candidate = window.substr(pos);
      std::string lf = BestLongForm(sf, candidate);
      if (lf.size() <= sf.size()) continue;
      if (NormalizeName(lf) == NormalizeName(sf)) continue;

      // The long form is a suffix of the (trimmed) candidate window.
      size_t lf_offset = static_cast<size_t>(candidate.data() - text.data()) +
                         candidate.size() - lf.size();
      pairs.push_back(AbbreviationPair{std::string(sf), std::move(lf),
                                       lf_offset});
    }
  }
  return pairs;
}

std::vector<Expansion> ExpandMentions(const Sentence &sentence,
                                      std::span<const AbbreviationPair> pairs,
                                      size_t *conflicts) {
  struct Entry {
    std::vector<std::string> tokens;
    std::string long_form;
  };
  std::vector<Entry> table;
  std::unordered_map<std::string, size_t> by_short;
  size_t conflict_count = 0;
  for (const AbbreviationPair &p : pairs) {
    std::string lf = NormalizeName(p.long_form);
    auto it = by_short.find(p.short_form);
    if (it != by_short.end()) {
      if (table[it->second].long_form != lf) ++conflict_count;
      continue;
    }
    Entry e;
    for (Token &t : Tokenize(p.short_form, 0)) e.tokens.push_back(std::move(t.text));
    if (e.tokens.empty() || lf.empty()) continue;
    e.long_form = std::move(lf);
    by_short.emplace(p.short_form, table.size());
    table.push_back(std::move(e));
  }
  if (conflicts != nullptr) *conflicts += conflict_count;

  std::vector<Expansion> out;
  const std::vector<Token> &tokens = sentence.tokens;
  for (size_t t = 0; t < tokens.size(); ++t) {
    const Entry *best = nullptr;
    for (const Entry &e : table) {
      if (t + e.tokens.size() > tokens.size()) continue;
      bool match = true;
      for (size_t k = 0; k < e.tokens.size() && match; ++k) {
        match = tokens[t + k].text == e.tokens[k];
      }
      if (match && (best == nullptr || e.tokens.size() > best->tokens.size())) {
        best = &e;
      }
    }
    if (best != nullptr) {
      out.push_back(Expansion{t, t + best->tokens.size(), best->long_form});
      t += best->tokens.size() - 1;
    }
  }
  return out;
}

std::string MatchText(const Sentence &sentence,
                      std::span<const Expansion> expansions, size_t start,
                      size_t end) {
  std::string out;
  size_t next = 0;
  for (size_t t = start; t < end;) {
    while (next < expansions.size() && expansions[next].token_start < t) {
      ++next;
    }
    if (!out.empty()) out.push_back(' ');
    if (next < expansions.size() && expansions[next].token_start == t &&
        expansions[next].token_end <= end) {
      out += expansions[next].long_form;
      t = expansions[next].token_end;
    } else {
      out += NormalizeName(sentence.tokens[t].text);
      ++t;
    }
  }
  return out;
}

std::map<std::string, std::vector<AbbreviationPair>> ReadAbbreviationTsv(
    std::istream &in) {
  std::map<std::string, std::vector<AbbreviationPair>> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = Split(line, '\t');
    if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty()) {
      throw ParseError(lineno, "expected doc_id\\tshort\\tlong");
    }
    table[f[0]].push_back(
        AbbreviationPair{f[1], f[2], AbbreviationPair::kNoOffset});
  }
  return table;
}

}  // namespace spanlink
