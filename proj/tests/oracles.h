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

// Independent reference implementations used by the tests. Nothing here
// calls into the library except for plain data types.

#ifndef SPANLINK_TESTS_ORACLES_H_
#define SPANLINK_TESTS_ORACLES_H_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace spanlink::oracle {

// Lowercases ASCII and collapses non-alphanumerics into single spaces.
inline std::string Normalize(const std::string &s) {
  std::string out;
  bool gap = false;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c >= 0x80) {
      if (gap && !out.empty()) out += ' ';
      gap = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      gap = true;
    }
  }
  return out;
}

inline std::map<std::string, double> GramCounts(const std::string &name,
                                                const std::vector<int> &sizes) {
  std::string padded = "#" + Normalize(name) + "#";
  std::replace(padded.begin(), padded.end(), ' ', '#');
  std::map<std::string, double> counts;
  for (int n : sizes) {
    for (size_t i = 0; i + n <= padded.size(); ++i) {
      counts[padded.substr(i, n)] += 1.0;
    }
  }
  return counts;
}

// Smoothed-IDF TF-IDF over a fixed list of dictionary names.
class TfIdf {
 public:
  TfIdf(const std::vector<std::string> &names, std::vector<int> sizes = {2, 3})
      : sizes_(std::move(sizes)) {
    std::set<std::string> docs;
    for (const std::string &n : names) {
      std::string norm = Normalize(n);
      if (!norm.empty()) docs.insert(norm);
    }
    std::map<std::string, double> df;
    for (const std::string &d : docs) {
      for (const auto &kv : GramCounts(d, sizes_)) df[kv.first] += 1.0;
    }
    const double n = static_cast<double>(docs.size());
    for (const auto &[g, f] : df) idf_[g] = std::log((1.0 + n) / (1.0 + f)) + 1.0;
  }

  double Idf(const std::string &gram) const {
    auto it = idf_.find(gram);
    return it == idf_.end() ? 0.0 : it->second;
  }

  std::map<std::string, double> Vector(const std::string &text) const {
    std::map<std::string, double> v;
    double norm = 0.0;
    for (const auto &[g, c] : GramCounts(text, sizes_)) {
      double idf = Idf(g);
      if (idf == 0.0) continue;
      v[g] = c * idf;
      norm += v[g] * v[g];
    }
    if (norm > 0.0) {
      for (auto &kv : v) kv.second /= std::sqrt(norm);
    }
    return v;
  }

  double Cosine(const std::string &a, const std::string &b) const {
    auto va = Vector(a), vb = Vector(b);
    double s = 0.0;
    for (const auto &[g, w] : va) {
      auto it = vb.find(g);
      if (it != vb.end()) s += w * it->second;
    }
    return s;
  }

 private:
  std::vector<int> sizes_;
  std::map<std::string, double> idf_;
};

// Span-level F1 by exhaustive pairing, spans as (doc, start, end) tuples.
struct Triple {
  std::string doc;
  size_t start, end;
  auto operator<=>(const Triple &) const = default;
};

inline double F1(double tp, double fp, double fn) {
  return tp == 0.0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
}

// Random lowercase word from a small alphabet so grams collide often.
inline std::string RandomWord(std::mt19937_64 &rng, size_t max_len = 8) {
  static const char kAlphabet[] = "abcdeilmnorst";
  std::uniform_int_distribution<size_t> len(1, max_len);
  std::uniform_int_distribution<size_t> ch(0, sizeof(kAlphabet) - 2);
  std::string w(len(rng), ' ');
  for (char &c : w) c = kAlphabet[ch(rng)];
  return w;
}

inline std::string RandomName(std::mt19937_64 &rng, size_t max_words = 3) {
  std::uniform_int_distribution<size_t> words(1, max_words);
  std::string s;
  for (size_t i = 0, n = words(rng); i < n; ++i) {
    if (i) s += ' ';
    s += RandomWord(rng);
  }
  return s;
}

inline double RelativeError(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

}  // namespace spanlink::oracle

#endif  // SPANLINK_TESTS_ORACLES_H_
