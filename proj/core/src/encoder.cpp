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

#include "memqa/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "memqa/rng.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

// Feature tags keep token, trigram, side, and cross spaces disjoint.
constexpr char kSep = '\x1f';

uint32_t bucket_of(const EncoderConfig& cfg, std::string_view feature) {
  return static_cast<uint32_t>(hash64(cfg.seed, feature) & (cfg.buckets - 1));
}

// Function words whose agreement says nothing about scope membership.
// They keep their trainable token-specific buckets but stay out of the
// generic content-agreement buckets.
bool is_stopword(const std::string& token) {
  static const std::set<std::string> kStopwords = {
      "a",  "an", "and", "are",  "at",  "by",  "did", "do",   "does", "for",  "from",
      "in", "is", "it",  "its",  "of",  "on",  "or",  "s",    "that", "the",  "this",
      "to", "was", "were", "what", "when", "where", "which", "who",  "whom", "with"};
  return kStopwords.count(token) > 0;
}

void append_token_features(const EncoderConfig& cfg, const std::vector<std::string>& tokens,
                           std::string_view tag, std::vector<uint32_t>* out) {
  std::string buf;
  for (const std::string& tok : tokens) {
    buf.assign(tag);
    buf.push_back(kSep);
    buf += tok;
    out->push_back(bucket_of(cfg, buf));
    if (tok.size() >= 3) {
      for (size_t i = 0; i + 3 <= tok.size(); ++i) {
        buf.assign(tag);
        buf.push_back('3');
        buf.push_back(kSep);
        buf.append(tok, i, 3);
        out->push_back(bucket_of(cfg, buf));
      }
    }
  }
}

}  // namespace

void EncoderConfig::validate() const {
  if (buckets < 2 || (buckets & (buckets - 1)) != 0) {
    throw Error("encoder bucket count must be a power of two >= 2");
  }
  if (dim < 1) throw Error("encoder embedding dim must be >= 1");
}

std::vector<uint32_t> text_features(const EncoderConfig& cfg, std::string_view text) {
  std::vector<uint32_t> out;
  append_token_features(cfg, tokenize(text), "w", &out);
  return out;
}

bool is_degenerate_text(std::string_view text) { return tokenize(text).empty(); }

DualEncoderModel::DualEncoderModel(EncoderConfig cfg, uint64_t init_seed)
    : cfg_(cfg), init_seed_(init_seed) {
  cfg_.validate();
  weights_.resize(static_cast<size_t>(cfg_.buckets) * cfg_.dim);
  // Rows start near unit norm so feature overlap between two texts already
  // pulls their embeddings together before any training.
  Rng rng(init_seed);
  double scale = 1.0 / std::sqrt(static_cast<double>(cfg_.dim));
  for (float& w : weights_) w = static_cast<float>(rng.gaussian() * scale);
}

std::vector<double> DualEncoderModel::embed(std::string_view text) const {
  std::vector<uint32_t> features = text_features(cfg_, text);
  if (features.empty()) throw DegenerateInputError(std::string(text));
  std::vector<double> sum(cfg_.dim, 0.0);
  for (uint32_t b : features) {
    const float* row = weights_.data() + static_cast<size_t>(b) * cfg_.dim;
    for (uint32_t k = 0; k < cfg_.dim; ++k) sum[k] += row[k];
  }
  double norm_sq = 0.0;
  for (double v : sum) norm_sq += v * v;
  double norm = std::sqrt(norm_sq);
  if (norm < 1e-12) throw DegenerateInputError(std::string(text));
  for (double& v : sum) v /= norm;
  return sum;
}

double DualEncoderModel::score(std::string_view t, std::string_view q) const {
  std::vector<double> et = embed(t);
  std::vector<double> eq = embed(q);
  double d2 = 0.0;
  for (uint32_t k = 0; k < cfg_.dim; ++k) {
    double diff = et[k] - eq[k];
    d2 += diff * diff;
  }
  return std::exp(-d2);
}

JointClassifierModel::JointClassifierModel(EncoderConfig cfg, bool agreement_prior) : cfg_(cfg) {
  cfg_.validate();
  weights_.assign(cfg_.buckets, 0.0f);
  if (agreement_prior) {
    // Content-token agreement votes for scope membership when it sits in
    // the statement's subject zone and against it at the object tail.
    const std::pair<char, float> prior[] = {{'3', 2.0f}, {'2', 2.0f}, {'1', 0.0f}, {'0', -1.5f}};
    for (const auto& [pos, weight] : prior) {
      std::string key("xeq");
      key.push_back(kSep);
      key.push_back(pos);
      weights_[bucket_of(cfg_, key)] = weight;
    }
    bias_ = -3.0f;
  }
}

std::vector<uint32_t> JointClassifierModel::pair_features(std::string_view t,
                                                          std::string_view q) const {
  std::vector<std::string> t_tokens = tokenize(t);
  std::vector<std::string> q_tokens = tokenize(q);
  if (t_tokens.empty()) throw DegenerateInputError(std::string(t));
  if (q_tokens.empty()) throw DegenerateInputError(std::string(q));

  std::vector<uint32_t> out;
  append_token_features(cfg_, t_tokens, "t", &out);
  append_token_features(cfg_, q_tokens, "q", &out);

  // Token cross-features. Equal pairs emit a shared overlap bucket
  // tagged by the token's distance from the statement's end (subject-zone
  // agreement stays distinguishable from object-zone agreement) plus a
  // token-specific bucket. Frequent words learn their own correction
  // through the specific bucket while unseen vocabulary still carries the
  // generic agreement signal.
  std::string buf;
  for (size_t i = 0; i < t_tokens.size(); ++i) {
    const std::string& a = t_tokens[i];
    size_t from_end = std::min<size_t>(3, t_tokens.size() - 1 - i);
    for (const std::string& b : q_tokens) {
      if (a == b) {
        if (!is_stopword(a)) {
          buf.assign("xeq");
          buf.push_back(kSep);
          buf.push_back(static_cast<char>('0' + from_end));
          out.push_back(bucket_of(cfg_, buf));
        }
        buf.assign("xeqw");
        buf.push_back(kSep);
        buf += a;
        out.push_back(bucket_of(cfg_, buf));
      } else {
        buf.assign("x");
        buf.push_back(kSep);
        buf += a;
        buf.push_back(kSep);
        buf += b;
        out.push_back(bucket_of(cfg_, buf));
      }
    }
  }
  return out;
}

double JointClassifierModel::score(std::string_view t, std::string_view q) const {
  std::vector<uint32_t> features = pair_features(t, q);
  double z = bias_;
  for (uint32_t b : features) z += weights_[b];
  return sigmoid(z);
}

double sigmoid(double z) {
  if (z >= 0.0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace memqa
