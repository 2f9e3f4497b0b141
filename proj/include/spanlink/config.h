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

#ifndef SPANLINK_CONFIG_H_
#define SPANLINK_CONFIG_H_

// Run configuration: a flat key=value file, overridable from the command
// line. The canonical serialization (sorted keys) is echoed into artifacts
// and hashed for their provenance header.

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace spanlink {

struct RunConfig {
  // Comma-separated PubTator files.
  std::string train_corpus;
  std::string dev_corpus;
  std::string test_corpus;
  // Train on train + dev (BC5CDR protocol).
  bool merge_dev = false;
  std::string medic;
  std::string index;
  std::string checkpoint;
  std::string embeddings;
  std::string abbreviations;

  double lambda = 0.9;
  size_t max_span_width = 10;
  double learning_rate = 1e-3;
  size_t batch_size = 32;
  size_t epochs = 10;
  uint64_t seed = 13;
  std::string encoder = "baseline";  // baseline | precomputed

  std::string ngram_sizes = "2,3";
  bool binary_tf = false;
  size_t negative_ratio = 20;
  double null_weight = 1.0;

  size_t embedding_dim = 64;
  size_t window = 2;
  size_t hash_buckets = 65536;
  size_t width_dim = 16;
  size_t hidden = 64;
  bool score_on_raw_g = false;

  size_t top_k = 5;
};

// Throws ValidationError for unknown keys and unparsable values.
void SetConfigValue(RunConfig *config, std::string_view key,
                    std::string_view value);

// Lines "key = value"; '#' starts a comment.
void ReadConfigFile(std::istream &in, RunConfig *config);

std::vector<std::string> ConfigKeys();

// Sorted "key=value" lines.
std::string SerializeConfig(const RunConfig &config);

uint64_t ConfigHash(const RunConfig &config);

// Range checks independent of which command runs.
void ValidateConfig(const RunConfig &config);

std::vector<int> ParseNgramSizes(std::string_view spec);

}  // namespace spanlink

#endif  // SPANLINK_CONFIG_H_
