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

// Independent reference implementations the tests check the library
// against. Everything here is written from the definitions, not by
// calling the code under test.

#ifndef MEMQA_TESTS_SUPPORT_ORACLES_HPP_
#define MEMQA_TESTS_SUPPORT_ORACLES_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memqa/detector.hpp"
#include "memqa/knowledge.hpp"
#include "memqa/retrieval.hpp"

namespace memqa::testing {

// Plain chain walker: resolves each hop by scanning the raw edit list
// first (last matching edit wins), then a flat fact table.
std::optional<std::vector<std::string>> walk_chain_bruteforce(
    const std::string& start_subject, const std::vector<std::string>& relations,
    const std::vector<Fact>& edits,
    const std::map<std::pair<std::string, std::string>, std::string>& facts);

// Literal transliterations of the success/block definitions, quadratic
// over the validation pairs.
double sr_bruteforce(const std::vector<TrainPair>& val, const PairScorer& g);
double br_bruteforce(const std::vector<TrainPair>& val, const PairScorer& g);

// Single-pass two-stage retrieval oracle: scores every entry with both
// scorers up front and applies the candidate/survivor rules directly.
struct RetrievalOracleResult {
  std::optional<size_t> hit_pos;
  std::string stage;  // "pre-unique" | "disambiguated" | ""
  size_t z_size = 0;
  size_t f_size = 0;
};
RetrievalOracleResult retrieve_bruteforce(const EditMemory& memory, const std::string& question,
                                          const PairScorer& pre, const PairScorer& dis,
                                          bool use_disambiguator);

// Deterministic pseudo-random scorer in [0, 1): pairs hash to scores.
PairScorer hash_scorer(uint64_t salt);

// Central finite difference of a scalar function of one float parameter.
// The actual representable delta is used as the denominator.
double central_difference(float* param, double eps, const std::function<double()>& eval);

}  // namespace memqa::testing

#endif  // MEMQA_TESTS_SUPPORT_ORACLES_HPP_
