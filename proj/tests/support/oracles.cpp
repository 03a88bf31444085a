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

#include "support/oracles.hpp"

#include "memqa/text.hpp"

namespace memqa::testing {

std::optional<std::vector<std::string>> walk_chain_bruteforce(
    const std::string& start_subject, const std::vector<std::string>& relations,
    const std::vector<Fact>& edits,
    const std::map<std::pair<std::string, std::string>, std::string>& facts) {
  std::vector<std::string> path;
  std::string current = start_subject;
  path.push_back(current);
  for (const std::string& relation : relations) {
    std::string cur_norm = normalize_label(current);
    std::string rel_norm = normalize_label(relation);
    std::optional<std::string> next;
    // Scan the raw edit list; a later duplicate overrides an earlier one.
    for (const Fact& e : edits) {
      if (e.subject.norm == cur_norm && normalize_label(e.relation) == rel_norm) {
        next = e.object.label;
      }
    }
    if (!next) {
      auto it = facts.find({cur_norm, rel_norm});
      if (it != facts.end()) next = it->second;
    }
    if (!next) return std::nullopt;
    path.push_back(*next);
    current = *next;
  }
  return path;
}

double sr_bruteforce(const std::vector<TrainPair>& val, const PairScorer& g) {
  if (val.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < val.size(); ++i) {
    bool ok = true;
    for (size_t j = 0; j < val.size(); ++j) {
      if (val[j].statement == val[i].statement) continue;
      if (!(g(val[i].statement, val[i].question) >= g(val[j].statement, val[i].question))) {
        ok = false;
      }
    }
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(val.size());
}

double br_bruteforce(const std::vector<TrainPair>& val, const PairScorer& g) {
  if (val.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < val.size(); ++i) {
    bool ok = true;
    for (size_t j = 0; j < val.size(); ++j) {
      if (val[j].statement == val[i].statement) continue;
      if (!(g(val[j].statement, val[i].question) < 0.5)) ok = false;
    }
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(val.size());
}

RetrievalOracleResult retrieve_bruteforce(const EditMemory& memory, const std::string& question,
                                          const PairScorer& pre, const PairScorer& dis,
                                          bool use_disambiguator) {
  RetrievalOracleResult out;
  if (tokenize(question).empty()) return out;

  std::vector<size_t> z;
  std::vector<double> pre_scores;
  for (size_t i = 0; i < memory.size(); ++i) {
    double s = tokenize(memory.at(i).statement).empty()
                   ? 0.0
                   : pre(memory.at(i).statement, question);
    if (s >= 0.5) {
      z.push_back(i);
      pre_scores.push_back(s);
    }
  }
  out.z_size = z.size();
  if (z.empty()) return out;
  if (z.size() == 1) {
    out.hit_pos = z[0];
    out.stage = "pre-unique";
    return out;
  }
  if (!use_disambiguator) {
    size_t best = 0;
    for (size_t i = 1; i < z.size(); ++i) {
      if (pre_scores[i] > pre_scores[best]) best = i;
    }
    out.hit_pos = z[best];
    out.stage = "pre-unique";
    return out;
  }
  std::optional<size_t> best;
  double best_score = -1.0;
  for (size_t i : z) {
    double s = tokenize(memory.at(i).statement).empty()
                   ? 0.0
                   : dis(memory.at(i).statement, question);
    if (s >= 0.5) {
      ++out.f_size;
      if (!best || s > best_score) {
        best = i;
        best_score = s;
      }
    }
  }
  if (best) {
    out.hit_pos = *best;
    out.stage = "disambiguated";
  }
  return out;
}

PairScorer hash_scorer(uint64_t salt) {
  return [salt](const std::string& t, const std::string& q) {
    uint64_t h = hash64(salt, t + "\x1e" + q);
    return static_cast<double>(h % 10000) / 10000.0;
  };
}

double central_difference(float* param, double eps, const std::function<double()>& eval) {
  float saved = *param;
  *param = static_cast<float>(saved + eps);
  double plus_value = eval();
  double plus_point = *param;
  *param = static_cast<float>(saved - eps);
  double minus_value = eval();
  double minus_point = *param;
  *param = saved;
  return (plus_value - minus_value) / (plus_point - minus_point);
}

}  // namespace memqa::testing
