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

#include "spanlink/config.h"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "spanlink/errors.h"
#include "spanlink/text.h"

namespace spanlink {

namespace {

struct Field {
  std::function<void(RunConfig *, std::string_view)> set;
  std::function<std::string(const RunConfig &)> get;
};

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("bad value '" + std::string(value) + "' for " +
                          std::string(key));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("bad boolean '" + std::string(value) + "' for " +
                        std::string(key));
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

#define SPANLINK_STRING_FIELD(name)                                        \
  {                                                                        \
#name, {[](RunConfig *c, std::string_view v) { c->name = std::string(v); }, \
            [](const RunConfig &c) { return c.name; } }                    \
  }
#define SPANLINK_SIZE_FIELD(name)                                          \
  {                                                                        \
#name, {[](RunConfig *c, std::string_view v) {                             \
              c->name = ParseNumber<size_t>(#name, v);                     \
            },                                                             \
            [](const RunConfig &c) { return std::to_string(c.name); } }    \
  }
#define SPANLINK_DOUBLE_FIELD(name)                                        \
  {                                                                        \
#name, {[](RunConfig *c, std::string_view v) {                             \
              c->name = ParseNumber<double>(#name, v);                     \
            },                                                             \
            [](const RunConfig &c) { return FormatDouble(c.name); } }      \
  }
#define SPANLINK_BOOL_FIELD(name)                                          \
  {                                                                        \
#name, {[](RunConfig *c, std::string_view v) {                             \
              c->name = ParseBool(#name, v);                               \
            },                                                             \
            [](const RunConfig &c) {                                       \
              return std::string(c.name ? "true" : "false");               \
            } }                                                            \
  }

const std::map<std::string, Field> &Fields() {
  static const std::map<std::string, Field> fields = {
      SPANLINK_STRING_FIELD(train_corpus),
      SPANLINK_STRING_FIELD(dev_corpus),
      SPANLINK_STRING_FIELD(test_corpus),
      SPANLINK_BOOL_FIELD(merge_dev),
      SPANLINK_STRING_FIELD(medic),
      SPANLINK_STRING_FIELD(index),
      SPANLINK_STRING_FIELD(checkpoint),
      SPANLINK_STRING_FIELD(embeddings),
      SPANLINK_STRING_FIELD(abbreviations),
      SPANLINK_DOUBLE_FIELD(lambda),
      SPANLINK_SIZE_FIELD(max_span_width),
      SPANLINK_DOUBLE_FIELD(learning_rate),
      SPANLINK_SIZE_FIELD(batch_size),
      SPANLINK_SIZE_FIELD(epochs),
      {"seed",
       {[](RunConfig *c, std::string_view v) {
          c->seed = ParseNumber<uint64_t>("seed", v);
        },
        [](const RunConfig &c) { return std::to_string(c.seed); }}},
      SPANLINK_STRING_FIELD(encoder),
      SPANLINK_STRING_FIELD(ngram_sizes),
      SPANLINK_BOOL_FIELD(binary_tf),
      SPANLINK_SIZE_FIELD(negative_ratio),
      SPANLINK_DOUBLE_FIELD(null_weight),
      SPANLINK_SIZE_FIELD(embedding_dim),
      SPANLINK_SIZE_FIELD(window),
      SPANLINK_SIZE_FIELD(hash_buckets),
      SPANLINK_SIZE_FIELD(width_dim),
      SPANLINK_SIZE_FIELD(hidden),
      SPANLINK_BOOL_FIELD(score_on_raw_g),
      SPANLINK_SIZE_FIELD(top_k),
  };
  return fields;
}

#undef SPANLINK_STRING_FIELD
#undef SPANLINK_SIZE_FIELD
#undef SPANLINK_DOUBLE_FIELD
#undef SPANLINK_BOOL_FIELD

}  // namespace

void SetConfigValue(RunConfig *config, std::string_view key,
                    std::string_view value) {
  auto it = Fields().find(std::string(key));
  if (it == Fields().end()) {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
  it->second.set(config, Trim(value));
}

void ReadConfigFile(std::istream &in, RunConfig *config) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": expected key=value");
    }
    SetConfigValue(config, Trim(t.substr(0, eq)), Trim(t.substr(eq + 1)));
  }
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto &[k, f] : Fields()) keys.push_back(k);
  return keys;
}

std::string SerializeConfig(const RunConfig &config) {
  std::string out;
  for (const auto &[k, f] : Fields()) out += k + "=" + f.get(config) + "\n";
  return out;
}

uint64_t ConfigHash(const RunConfig &config) {
  return Fnv1a64(SerializeConfig(config));
}

std::vector<int> ParseNgramSizes(std::string_view spec) {
  std::vector<int> sizes;
  for (const std::string &part : Split(spec, ',')) {
    std::string_view p = Trim(part);
    if (p.empty()) continue;
    int n = ParseNumber<int>("ngram_sizes", p);
    if (n < 1 || n > 8) throw ValidationError("n-gram sizes must be in 1..8");
    sizes.push_back(n);
  }
  if (sizes.empty()) throw ValidationError("ngram_sizes is empty");
  return sizes;
}

void ValidateConfig(const RunConfig &c) {
  auto require = [](bool ok, const std::string &what) {
    if (!ok) throw ValidationError(what);
  };
  require(c.lambda >= 0.0 && c.lambda < 1e6, "lambda must be in [0, 1e6)");
  require(c.max_span_width >= 1 && c.max_span_width <= 64,
          "max_span_width must be in 1..64");
  require(c.learning_rate > 0.0 && c.learning_rate < 1.0,
          "learning_rate must be in (0, 1)");
  require(c.batch_size >= 1, "batch_size must be >= 1");
  require(c.encoder == "baseline" || c.encoder == "precomputed",
          "encoder must be 'baseline' or 'precomputed'");
  require(c.null_weight > 0.0, "null_weight must be positive");
  require(c.embedding_dim >= 1, "embedding_dim must be >= 1");
  require(c.hash_buckets >= 1, "hash_buckets must be >= 1");
  require(c.hidden >= 1, "hidden must be >= 1");
  require(c.top_k >= 1, "top_k must be >= 1");
  ParseNgramSizes(c.ngram_sizes);
}

}  // namespace spanlink
