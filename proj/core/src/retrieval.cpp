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

#include "memqa/retrieval.hpp"

#include <vector>

namespace memqa {

namespace {

// Statements that tokenize to nothing can never match; score them zero
// instead of surfacing an encoder error mid-retrieval.
double safe_score(const PairScorer& scorer, const std::string& statement,
                  const std::string& question) {
  if (is_degenerate_text(statement)) return 0.0;
  return scorer(statement, question);
}

}  // namespace

RetrievalOutcome retrieve(const EditMemory& memory, const std::string& question,
                          const PairScorer& pre, const PairScorer& dis,
                          const RetrieveOptions& options) {
  RetrievalOutcome out;
  if (is_degenerate_text(question)) {
    out.degenerate_query = true;
    return out;
  }

  // Pre-detection stage.
  std::vector<size_t> candidates;
  std::vector<double> pre_scores;
  for (size_t pos = 0; pos < memory.size(); ++pos) {
    double s = safe_score(pre, memory.at(pos).statement, question);
    if (s >= options.threshold) {
      candidates.push_back(pos);
      pre_scores.push_back(s);
    }
  }
  out.pre_candidates = candidates.size();
  if (candidates.empty()) return out;

  if (candidates.size() == 1) {
    out.hit = RetrievalHit{candidates[0], pre_scores[0], HitStage::kPreUnique};
    return out;
  }

  if (!options.use_disambiguator) {
    // Ablated selector: highest pre-detector score, earliest position wins.
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
      if (pre_scores[i] > pre_scores[best]) best = i;
    }
    out.hit = RetrievalHit{candidates[best], pre_scores[best], HitStage::kPreUnique};
    return out;
  }

  // Conflict-disambiguation stage.
  std::optional<size_t> best_pos;
  double best_score = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double s = safe_score(dis, memory.at(candidates[i]).statement, question);
    ++out.dis_predictions;
    if (s >= options.threshold) {
      ++out.dis_survivors;
      if (!best_pos || s > best_score) {
        best_pos = candidates[i];
        best_score = s;
      }
    }
  }
  if (best_pos) {
    out.hit = RetrievalHit{*best_pos, best_score, HitStage::kDisambiguated};
  }
  return out;
}

RetrievalOutcome retrieve(const EditMemory& memory, const std::string& question,
                          const DetectorBundle& bundle, bool use_disambiguator) {
  RetrieveOptions options;
  options.threshold = bundle.threshold;
  options.use_disambiguator = use_disambiguator;
  return retrieve(memory, question, scorer_of(bundle.pre), scorer_of(bundle.dis), options);
}

RetrievalOutcome NullRetriever::retrieve(const EditMemory& memory,
                                         const std::string& question) const {
  (void)memory;
  RetrievalOutcome out;
  out.degenerate_query = is_degenerate_text(question);
  return out;
}

}  // namespace memqa
