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

#ifndef MEMQA_ORCHESTRATOR_HPP_
#define MEMQA_ORCHESTRATOR_HPP_

#include <optional>
#include <string>
#include <vector>

#include "memqa/gazetteer.hpp"
#include "memqa/llm.hpp"
#include "memqa/protocol.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/rng.hpp"

namespace memqa {

// Few-shot demonstrations plus the protocol line prefixes. The default
// pack carries four worked sessions.
struct PromptPack {
  std::string demonstrations;
  std::string question_prefix = kQuestionPrefix;
  std::string entity_prefix = kEntityOfQuestionPrefix;
  std::string subquestion_prefix = kSubquestionPrefix;
  std::string answer_prefix = kGeneratedAnswerPrefix;
  std::string extraction_prefix = kExtractionPrefix;
  std::string final_prefix = kFinalAnswerPrefix;

  static PromptPack standard();
};

enum class AnswerSource { kMemoryInjected, kModelGenerated, kUnknown };
enum class Termination { kFinalAnswer, kHopBudget, kMalformed };

std::string to_string(AnswerSource source);
std::string to_string(Termination termination);

struct HopRecord {
  std::string subquestion;
  std::string answer;  // line content after the answer prefix
  AnswerSource source = AnswerSource::kUnknown;
  std::string extracted_entity;
  RetrievalOutcome retrieval;
};

struct Transcript {
  std::string question;
  std::optional<std::string> knowledge_prompt;  // full rendered line
  std::vector<HopRecord> hops;
  std::string final_answer;
  Termination termination = Termination::kFinalAnswer;
  std::optional<size_t> malformed_line;  // first offending line index
};

struct SessionConfig {
  int max_hops = 5;
  int max_tokens = 96;
  bool enable_knowledge_prompt = true;  // M_gen
  bool enable_disambiguator = true;     // M_dis
  std::string model;                    // provider model name passthrough
};

// Runs one question through the decompose / detect-and-answer / extract
// loop. Retrieval hits inject the edit statement verbatim as the answer
// line; misses let the model finish the line from its own knowledge.
// Protocol violations terminate the transcript as malformed rather than
// throwing; provider errors propagate.
Transcript answer_question(const std::string& question, const EditMemory& memory,
                           const EditRetriever& retriever, const Gazetteer* gazetteer,
                           CompletionProvider& provider, const PromptPack& pack,
                           const SessionConfig& config, Rng& session_rng);

// Strict line-prefix parse of a rendered session. Unparseable input
// yields termination kMalformed with the first offending line index;
// answer sources are unknown after parsing.
Transcript parse_transcript(const std::string& raw, const PromptPack& pack);

// Plain-text rendering, identical to the prompt continuation the session
// produced. parse_transcript(render_transcript(t)) preserves the textual
// fields of well-formed transcripts.
std::string render_transcript(const Transcript& transcript, const PromptPack& pack);

// Deduced path <s1, o1, ..., on> with normalized entity labels. Throws
// MalformedTranscriptError on malformed transcripts.
std::vector<std::string> extract_path(const Transcript& transcript, const Entity& start_subject);

// JSON dump of one session (question, lines, hops, retrieval
// diagnostics, termination) as a string.
std::string transcript_to_json(const Transcript& transcript);

}  // namespace memqa

#endif  // MEMQA_ORCHESTRATOR_HPP_
