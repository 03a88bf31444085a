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

#include "memqa/orchestrator.hpp"

#include "json.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

// Demonstration sessions shown before the live question. The first one
// anchors the exact line grammar; the others vary hop count.
constexpr const char* kDemonstrations =
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
    "Final answer: Ottawa\n"
    "\n"
    "Question: What is the capital of the country where the Eiffel Tower is located?\n"
    "Entity of Question: Eiffel Tower, a tower.\n"
    "Subquestion: In which country is the Eiffel Tower located?\n"
    "Generated answer: The Eiffel Tower is located in France.\n"
    "According to Generated answer, the entity of Subquestion is: France\n"
    "Subquestion: What is the capital of France?\n"
    "Generated answer: The capital of France is Paris.\n"
    "According to Generated answer, the entity of Subquestion is: Paris\n"
    "Final answer: Paris\n"
    "\n"
    "Question: What is the official language of the country where Nintendo is headquartered?\n"
    "Entity of Question: Nintendo, an organization.\n"
    "Subquestion: In which country is Nintendo headquartered?\n"
    "Generated answer: Nintendo is headquartered in Japan.\n"
    "According to Generated answer, the entity of Subquestion is: Japan\n"
    "Subquestion: What is the official language of Japan?\n"
    "Generated answer: The official language of Japan is Japanese.\n"
    "According to Generated answer, the entity of Subquestion is: Japanese\n"
    "Final answer: Japanese\n"
    "\n"
    "Question: What is the capital of the country of citizenship of the spouse of the performer "
    "of Thriller?\n"
    "Entity of Question: Thriller, an album.\n"
    "Subquestion: Who performed Thriller?\n"
    "Generated answer: Thriller was performed by Michael Jackson.\n"
    "According to Generated answer, the entity of Subquestion is: Michael Jackson\n"
    "Subquestion: Who is Michael Jackson's spouse?\n"
    "Generated answer: Michael Jackson's spouse is Lisa Marie Presley.\n"
    "According to Generated answer, the entity of Subquestion is: Lisa Marie Presley\n"
    "Subquestion: What is the country of citizenship of Lisa Marie Presley?\n"
    "Generated answer: Lisa Marie Presley is a citizen of the United States of America.\n"
    "According to Generated answer, the entity of Subquestion is: United States of America\n"
    "Subquestion: What is the capital of the United States of America?\n"
    "Generated answer: The capital of the United States of America is Washington, D.C.\n"
    "According to Generated answer, the entity of Subquestion is: Washington, D.C.\n"
    "Final answer: Washington, D.C.\n";

std::string content_after(const std::string& line, const std::string& prefix) {
  return trim(line.substr(prefix.size()));
}

}  // namespace

PromptPack PromptPack::standard() {
  PromptPack pack;
  pack.demonstrations = kDemonstrations;
  return pack;
}

std::string to_string(AnswerSource source) {
  switch (source) {
    case AnswerSource::kMemoryInjected:
      return "memory-injected";
    case AnswerSource::kModelGenerated:
      return "model-generated";
    case AnswerSource::kUnknown:
      return "unknown";
  }
  return "unknown";
}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::kFinalAnswer:
      return "final-answer";
    case Termination::kHopBudget:
      return "hop-budget";
    case Termination::kMalformed:
      return "malformed";
  }
  return "malformed";
}

Transcript answer_question(const std::string& question, const EditMemory& memory,
                           const EditRetriever& retriever, const Gazetteer* gazetteer,
                           CompletionProvider& provider, const PromptPack& pack,
                           const SessionConfig& config, Rng& session_rng) {
  Transcript transcript;
  transcript.question = trim(question);

  std::string prompt = pack.demonstrations;
  if (!prompt.empty() && prompt.back() != '\n') prompt += "\n";
  prompt += "\n";
  prompt += pack.question_prefix + " " + transcript.question + "\n";

  if (config.enable_knowledge_prompt && gazetteer != nullptr) {
    if (auto entity = recognize_entity(transcript.question, *gazetteer)) {
      Fact membership = pick_membership_fact(*entity, *gazetteer, session_rng);
      transcript.knowledge_prompt = render_prompt(*entity, membership);
      prompt += *transcript.knowledge_prompt + "\n";
    }
    // Recognition misses simply omit the line.
  }

  auto request = [&](const std::vector<std::string>& stop) {
    CompletionRequest req;
    req.prompt = prompt;
    req.max_tokens = config.max_tokens;
    req.stop = stop;
    req.model = config.model;
    return provider.complete(req);
  };
  auto fail = [&](size_t line_hint) {
    transcript.termination = Termination::kMalformed;
    transcript.malformed_line = line_hint;
    return transcript;
  };

  for (int hop = 0; hop < config.max_hops; ++hop) {
    // One protocol line: the next subquestion or the final answer. Text
    // after a final answer is model overrun and is ignored; any other
    // extra content is a protocol break.
    Completion step = request({pack.answer_prefix});
    std::optional<std::string> subquestion;
    std::optional<std::string> final_answer;
    bool broken = false;
    for (const std::string& line : split_lines(step.text)) {
      if (trim(line).empty()) continue;
      if (!subquestion && !final_answer && starts_with(line, pack.final_prefix)) {
        final_answer = content_after(line, pack.final_prefix);
        break;
      }
      if (!subquestion && !final_answer && starts_with(line, pack.subquestion_prefix)) {
        subquestion = content_after(line, pack.subquestion_prefix);
        continue;
      }
      broken = true;
      break;
    }
    if (final_answer && !broken) {
      transcript.final_answer = *final_answer;
      transcript.termination = Termination::kFinalAnswer;
      return transcript;
    }
    if (broken || !subquestion || subquestion->empty()) {
      return fail(transcript.hops.size() * 3 + 2);
    }

    HopRecord record;
    record.subquestion = *subquestion;
    prompt += pack.subquestion_prefix + " " + record.subquestion + "\n";

    record.retrieval = retriever.retrieve(memory, record.subquestion);
    if (record.retrieval.hit) {
      // Conflict detected: the stored statement instructs the model.
      record.answer = memory.at(record.retrieval.hit->position).statement;
      record.source = AnswerSource::kMemoryInjected;
      prompt += pack.answer_prefix + " " + record.answer + "\n";
    } else {
      prompt += pack.answer_prefix;
      Completion answer = request({"\n"});
      record.answer = trim(answer.text);
      record.source = AnswerSource::kModelGenerated;
      if (record.answer.empty() || record.answer.find('\n') != std::string::npos) {
        return fail(transcript.hops.size() * 3 + 3);
      }
      prompt += " " + record.answer + "\n";
    }

    prompt += pack.extraction_prefix;
    Completion extraction = request({"\n"});
    record.extracted_entity = trim(extraction.text);
    if (record.extracted_entity.empty() ||
        record.extracted_entity.find('\n') != std::string::npos) {
      return fail(transcript.hops.size() * 3 + 4);
    }
    prompt += " " + record.extracted_entity + "\n";

    transcript.hops.push_back(std::move(record));
  }

  transcript.termination = Termination::kHopBudget;
  return transcript;
}

Transcript parse_transcript(const std::string& raw, const PromptPack& pack) {
  Transcript t;
  std::vector<std::string> lines = split_lines(raw);

  // Grammar: Question, optional knowledge-prompt line, one or more
  // (Subquestion, Generated answer, extraction) triples, Final answer.
  size_t i = 0;
  auto malformed = [&](size_t line_index) {
    t.termination = Termination::kMalformed;
    t.malformed_line = line_index;
    return t;
  };
  auto skip_blank = [&]() {
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
  };

  skip_blank();
  if (i >= lines.size() || !starts_with(lines[i], pack.question_prefix)) {
    return malformed(i);
  }
  t.question = content_after(lines[i], pack.question_prefix);
  ++i;

  skip_blank();
  if (i < lines.size() && starts_with(lines[i], pack.entity_prefix)) {
    t.knowledge_prompt = lines[i];
    ++i;
  }

  bool saw_final = false;
  while (true) {
    skip_blank();
    if (i >= lines.size()) break;
    if (starts_with(lines[i], pack.final_prefix)) {
      t.final_answer = content_after(lines[i], pack.final_prefix);
      saw_final = true;
      ++i;
      break;
    }
    if (!starts_with(lines[i], pack.subquestion_prefix)) return malformed(i);
    HopRecord hop;
    hop.subquestion = content_after(lines[i], pack.subquestion_prefix);
    ++i;
    skip_blank();
    if (i >= lines.size() || !starts_with(lines[i], pack.answer_prefix)) return malformed(i);
    hop.answer = content_after(lines[i], pack.answer_prefix);
    ++i;
    skip_blank();
    if (i >= lines.size() || !starts_with(lines[i], pack.extraction_prefix)) return malformed(i);
    hop.extracted_entity = content_after(lines[i], pack.extraction_prefix);
    ++i;
    if (hop.subquestion.empty() || hop.answer.empty() || hop.extracted_entity.empty()) {
      return malformed(i - 1);
    }
    t.hops.push_back(std::move(hop));
  }

  if (!saw_final || t.hops.empty()) return malformed(i);
  skip_blank();
  if (i < lines.size()) return malformed(i);  // trailing garbage
  t.termination = Termination::kFinalAnswer;
  return t;
}

std::string render_transcript(const Transcript& transcript, const PromptPack& pack) {
  std::string out = pack.question_prefix + " " + transcript.question + "\n";
  if (transcript.knowledge_prompt) out += *transcript.knowledge_prompt + "\n";
  for (const HopRecord& hop : transcript.hops) {
    out += pack.subquestion_prefix + " " + hop.subquestion + "\n";
    out += pack.answer_prefix + " " + hop.answer + "\n";
    out += pack.extraction_prefix + " " + hop.extracted_entity + "\n";
  }
  if (transcript.termination == Termination::kFinalAnswer) {
    out += pack.final_prefix + " " + transcript.final_answer + "\n";
  }
  return out;
}

std::vector<std::string> extract_path(const Transcript& transcript, const Entity& start_subject) {
  if (transcript.termination == Termination::kMalformed) {
    throw MalformedTranscriptError("cannot extract a path from a malformed transcript");
  }
  std::vector<std::string> path;
  path.reserve(transcript.hops.size() + 1);
  path.push_back(start_subject.norm);
  for (const HopRecord& hop : transcript.hops) {
    path.push_back(normalize_label(hop.extracted_entity));
  }
  return path;
}

std::string transcript_to_json(const Transcript& transcript) {
  nlohmann::json hops = nlohmann::json::array();
  for (const HopRecord& hop : transcript.hops) {
    nlohmann::json retrieval = {
        {"pre_candidates", hop.retrieval.pre_candidates},
        {"dis_survivors", hop.retrieval.dis_survivors},
        {"dis_predictions", hop.retrieval.dis_predictions},
        {"degenerate_query", hop.retrieval.degenerate_query},
        {"hit", hop.retrieval.hit.has_value()},
    };
    if (hop.retrieval.hit) {
      retrieval["hit_position"] = hop.retrieval.hit->position;
      retrieval["hit_score"] = hop.retrieval.hit->score;
      retrieval["hit_stage"] =
          hop.retrieval.hit->stage == HitStage::kPreUnique ? "pre-unique" : "disambiguated";
    }
    hops.push_back({{"subquestion", hop.subquestion},
                    {"answer", hop.answer},
                    {"source", to_string(hop.source)},
                    {"entity", hop.extracted_entity},
                    {"retrieval", retrieval}});
  }
  PromptPack pack;  // bare prefixes; demonstrations play no part in rendering
  nlohmann::json j = {
      {"question", transcript.question},
      {"knowledge_prompt",
       transcript.knowledge_prompt ? nlohmann::json(*transcript.knowledge_prompt)
                                   : nlohmann::json()},
      {"lines", split_lines(render_transcript(transcript, pack))},
      {"hops", hops},
      {"final_answer", transcript.final_answer},
      {"termination", to_string(transcript.termination)},
  };
  if (transcript.malformed_line) j["malformed_line"] = *transcript.malformed_line;
  return j.dump();
}

}  // namespace memqa
