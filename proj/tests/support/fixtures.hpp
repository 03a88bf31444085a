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

#ifndef MEMQA_TESTS_SUPPORT_FIXTURES_HPP_
#define MEMQA_TESTS_SUPPORT_FIXTURES_HPP_

#include <deque>
#include <string>
#include <vector>

#include "memqa/knowledge.hpp"
#include "memqa/llm.hpp"
#include "memqa/retrieval.hpp"

namespace memqa::testing {

// The worked three-hop session used across parser and path tests.
inline constexpr const char* kWorkedSessionText =
    "Question: What is the capital city of the country of citizenship of Ivanka Trump's spouse?\n"
    "Entity of Question: Ivanka Trump, a human.\n"
    "Subquestion: Who is Ivanka Trump's spouse?\n"
    "Generated answer: Ivanka Trump's spouse is Jared Kushner.\n"
    "According to Generated answer, the entity of Subquestion is: Jared Kushner\n"
    "Subquestion: What is the country of citizenship of Jared Kushner?\n"
    "Generated answer: Jared Kushner is a citizen of Canada.\n"
    "According to Generated answer, the entity of Subquestion is: Canada\n"
    "Subquestion: What is the capital city of Canada?\n"
    "Generated answer: The capital city of Canada is Ottawa.\n"
    "According to Generated answer, the entity of Subquestion is: Ottawa\n"
    "Final answer: Ottawa\n";

// Serves canned completions in order; fails the session when exhausted.
class ScriptedProvider : public CompletionProvider {
 public:
  explicit ScriptedProvider(std::vector<std::string> responses) {
    for (auto& r : responses) queue_.push_back(std::move(r));
  }
  Completion complete(const CompletionRequest& request) override {
    requests.push_back(request);
    Completion c;
    if (queue_.empty()) {
      c.text = "";
      c.finish_reason = FinishReason::kEnd;
      return c;
    }
    c.text = queue_.front();
    queue_.pop_front();
    c.finish_reason = FinishReason::kStopSequence;
    return c;
  }
  std::string name() const override { return "scripted"; }

  std::vector<CompletionRequest> requests;

 private:
  std::deque<std::string> queue_;
};

// Retriever built from explicit scorers, for stubbing.
class ScorerRetriever : public EditRetriever {
 public:
  ScorerRetriever(PairScorer pre, PairScorer dis, bool use_dis = true)
      : pre_(std::move(pre)), dis_(std::move(dis)), use_dis_(use_dis) {}
  RetrievalOutcome retrieve(const EditMemory& memory,
                            const std::string& question) const override {
    RetrieveOptions options;
    options.use_disambiguator = use_dis_;
    return memqa::retrieve(memory, question, pre_, dis_, options);
  }

 private:
  PairScorer pre_;
  PairScorer dis_;
  bool use_dis_;
};

}  // namespace memqa::testing

#endif  // MEMQA_TESTS_SUPPORT_FIXTURES_HPP_
