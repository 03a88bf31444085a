// Copyright 2026 The MemQA Authors.
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

#ifndef MEMQA_ENCODER_HPP_
#define MEMQA_ENCODER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "memqa/errors.hpp"

namespace memqa {

// Hashed text featurization shared by both detector models. Features are
// lowercase alphanumeric tokens plus character trigrams per token, each
// hashed into one of `buckets` slots.
struct EncoderConfig {
  uint32_t buckets = 32768;  // power of two, >= 2
  uint32_t dim = 64;         // embedding width (dual encoder only)
  uint64_t seed = 0x7a11;    // hash seed

  void validate() const;
  bool operator==(const EncoderConfig& other) const = default;
};

// Bucket ids of a text's feature multiset, in occurrence order.
std::vector<uint32_t> text_features(const EncoderConfig& cfg, std::string_view text);

// True when the text tokenizes to nothing (and therefore has no features).
bool is_degenerate_text(std::string_view text);

// Bi-encoder scoring model. The embedding of a text is the L2-normalized
// sum of the table rows selected by its features; the match probability
// is exp(-||E(t) - E(q)||^2).
class DualEncoderModel {
 public:
  DualEncoderModel(EncoderConfig cfg, uint64_t init_seed);

  const EncoderConfig& config() const { return cfg_; }
  uint64_t init_seed() const { return init_seed_; }

  // Throws DegenerateInputError if the text has no features, and when the
  // selected rows cancel to a vanishing sum.
  std::vector<double> embed(std::string_view text) const;
  double score(std::string_view t, std::string_view q) const;

  std::vector<float>& weights() { return weights_; }
  const std::vector<float>& weights() const { return weights_; }
  size_t parameter_count() const { return weights_.size(); }

 private:
  EncoderConfig cfg_;
  uint64_t init_seed_;
  std::vector<float> weights_;  // buckets x dim, row major
};

// Cross-encoder scoring model: a linear classifier over joint features of
// the (statement, question) pair. Joint features are the side-tagged
// features of each text plus bucketed token cross-features; identical
// token pairs share one overlap bucket so token agreement generalizes to
// unseen vocabulary.
class JointClassifierModel {
 public:
  // Weights start at zero; with `agreement_prior` the generic
  // content-agreement buckets and the bias start at a calibrated overlap
  // prior (subject-zone matches vote in-scope, tail matches vote against)
  // that training then refines.
  explicit JointClassifierModel(EncoderConfig cfg, bool agreement_prior = false);

  const EncoderConfig& config() const { return cfg_; }

  // Bucket ids for the pair, in occurrence order.
  std::vector<uint32_t> pair_features(std::string_view t, std::string_view q) const;

  // sigmoid(w . f(t, q) + b); throws DegenerateInputError on featureless text.
  double score(std::string_view t, std::string_view q) const;

  std::vector<float>& weights() { return weights_; }  // size buckets
  const std::vector<float>& weights() const { return weights_; }
  float& bias() { return bias_; }
  float bias() const { return bias_; }
  size_t parameter_count() const { return weights_.size() + 1; }

 private:
  EncoderConfig cfg_;
  std::vector<float> weights_;
  float bias_ = 0.0f;
};

double sigmoid(double z);

}  // namespace memqa

#endif  // MEMQA_ENCODER_HPP_
