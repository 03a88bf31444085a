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

#ifndef MEMQA_TRAINSET_HPP_
#define MEMQA_TRAINSET_HPP_

#include <optional>
#include <string>
#include <vector>

#include "memqa/detector.hpp"
#include "memqa/llm.hpp"
#include "memqa/world.hpp"

namespace memqa {

enum class TrainsetMode { kTemplated, kLlm };

struct TrainsetBuildStats {
  size_t input_edits = 0;
  size_t filtered_out = 0;   // dropped for sharing (s, r) with protected facts
  size_t parse_failures = 0; // llm outputs that did not yield three questions
  size_t groups = 0;
  size_t pairs = 0;
  std::vector<std::string> failed_statements;
};

// Builds detector training pairs from an edit pool. Candidates sharing a
// normalized (subject, relation) with a protected fact are dropped first.
// Templated mode renders each relation's question paraphrases; llm mode
// prompts the provider to phrase three questions per statement and skips
// statements whose output does not parse.
std::vector<TrainPair> build_trainset(const std::vector<Fact>& edit_facts,
                                      const RelationVocabulary& vocab,
                                      const std::vector<Fact>& protected_facts, TrainsetMode mode,
                                      CompletionProvider* llm, TrainsetBuildStats* stats = nullptr);

// Instruction plus worked examples for the question-generation prompt;
// the statement is appended as a final "Fact:" block ending at
// "Question 1:" for the model to continue.
std::string question_generation_prompt(const std::string& statement);

// Parses "Question 1/2/3:" lines out of a completion that continues the
// prompt above (the first line is question 1's remainder).
std::optional<std::vector<std::string>> parse_generated_questions(const std::string& completion);

}  // namespace memqa

#endif  // MEMQA_TRAINSET_HPP_
