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

#include "memqa/trainset.hpp"

#include "memqa/text.hpp"

namespace memqa {

namespace {

// Instruction and worked examples for three-way question phrasing.
constexpr const char* kQuestionGenHeader =
    "Please generate three different phrased Questions for each fact\n"
    "\n"
    "Fact: The univeristy where Bob Dylan was educated is University of Minnesota.\n"
    "Question 1: What is the name of the educational institution where Bob Dylan studied?\n"
    "Question 2: What is the name of the university where Bob Dylan was educated?\n"
    "Question 3: At which university did Bob Dylan receive his education?\n"
    "\n"
    "Fact: The capital of United Kingdom is Angri.\n"
    "Question 1: What is the name of the capital city of United Kingdom?\n"
    "Question 2: Which city serves as the capital of United Kingdom?\n"
    "Question 3: In which city is the capital of United Kingdom located?\n"
    "\n"
    "Fact: basketball was created in the country of Spain.\n"
    "Question 1: Where is basketball originated from?\n"
    "Question 2: What is the name of the country of origin of basketball?\n"
    "Question 3: Where did the sport of basketball originate?\n"
    "\n"
    "Fact: John Coltrane is married to Anne Hathaway.\n"
    "Question 1: Who is John Coltrane's spouse?\n"
    "Question 2: To whom is John Coltrane married?\n"
    "Question 3: Which person is married to John Coltrane?\n"
    "\n"
    "Fact: Miranda Kerr is a citizen of Australia.\n"
    "Question 1: Which country is Miranda Kerr a citizen of?\n"
    "Question 2: What is the name of the country that Miranda Kerr belongs to?\n"
    "Question 3: What is Miranda Kerr's nationality?\n";

}  // namespace

std::string question_generation_prompt(const std::string& statement) {
  std::string prompt(kQuestionGenHeader);
  prompt += "\nFact: " + statement + "\nQuestion 1:";
  return prompt;
}

std::optional<std::vector<std::string>> parse_generated_questions(const std::string& completion) {
  std::vector<std::string> lines = split_lines(completion);
  std::vector<std::string> questions;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty()) {
      if (questions.empty()) continue;  // leading blank before question 1
      break;                            // blank line ends the block
    }
    if (questions.empty()) {
      // First line continues "Question 1:".
      questions.push_back(line);
      continue;
    }
    std::string expected = "Question " + std::to_string(questions.size() + 1) + ":";
    if (!starts_with(line, expected)) break;
    questions.push_back(trim(line.substr(expected.size())));
    if (questions.size() == 3) break;
  }
  if (questions.size() != 3) return std::nullopt;
  for (const std::string& q : questions) {
    if (q.empty()) return std::nullopt;
  }
  return questions;
}

std::vector<TrainPair> build_trainset(const std::vector<Fact>& edit_facts,
                                      const RelationVocabulary& vocab,
                                      const std::vector<Fact>& protected_facts, TrainsetMode mode,
                                      CompletionProvider* llm, TrainsetBuildStats* stats) {
  if (mode == TrainsetMode::kLlm && llm == nullptr) {
    throw ConfigError("llm trainset mode needs a completion provider");
  }
  TrainsetBuildStats local;
  TrainsetBuildStats& s = stats != nullptr ? *stats : local;
  s.input_edits = edit_facts.size();

  std::vector<Fact> kept = filter_shared_sr(edit_facts, protected_facts);
  s.filtered_out = edit_facts.size() - kept.size();

  TemplateSet templates = vocab.statement_templates();
  std::vector<TrainPair> pairs;
  for (const Fact& fact : kept) {
    std::string statement = verbalize(fact, templates);
    std::vector<std::string> questions;
    if (mode == TrainsetMode::kTemplated) {
      const RelationPhrasing& phr = vocab.phrasing(fact.relation);
      const std::vector<std::string>& patterns =
          phr.paraphrases.empty() ? std::vector<std::string>{phr.subquestion} : phr.paraphrases;
      for (const std::string& pattern : patterns) {
        std::string q = pattern;
        size_t pos = q.find("SUBJECT");
        if (pos != std::string::npos) q.replace(pos, 7, fact.subject.label);
        questions.push_back(std::move(q));
      }
    } else {
      CompletionRequest request;
      request.prompt = question_generation_prompt(statement);
      request.stop = {"\n\n", "Fact:"};
      request.max_tokens = 96;
      Completion completion = llm->complete(request);
      auto parsed = parse_generated_questions(completion.text);
      if (!parsed) {
        ++s.parse_failures;
        s.failed_statements.push_back(statement);
        continue;
      }
      questions = std::move(*parsed);
    }
    for (std::string& q : questions) {
      TrainPair p;
      p.statement = statement;
      p.question = std::move(q);
      pairs.push_back(std::move(p));
    }
  }
  regroup_by_statement(pairs);
  s.pairs = pairs.size();
  int64_t max_group = -1;
  for (const TrainPair& p : pairs) max_group = std::max(max_group, p.group);
  s.groups = static_cast<size_t>(max_group + 1);
  return pairs;
}

}  // namespace memqa
