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

#include "memqa/world.hpp"

#include <fstream>

#include "json.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

constexpr std::string_view kSubjectSlot = "SUBJECT";

std::string substitute_subject(const std::string& pattern, const std::string& subject) {
  size_t pos = pattern.find(kSubjectSlot);
  if (pos == std::string::npos) return pattern;
  std::string out = pattern;
  out.replace(pos, kSubjectSlot.size(), subject);
  return out;
}

// Inverts a SUBJECT-only pattern: the text must carry the pattern's fixed
// head and tail, the span between them is the subject.
std::optional<std::string> match_subject(const std::string& pattern, const std::string& text) {
  size_t pos = pattern.find(kSubjectSlot);
  if (pos == std::string::npos) return std::nullopt;
  std::string head = to_lower(pattern.substr(0, pos));
  std::string tail = to_lower(pattern.substr(pos + kSubjectSlot.size()));
  std::string low = to_lower(text);
  if (!starts_with(low, head)) return std::nullopt;
  if (low.size() < head.size() + tail.size()) return std::nullopt;
  if (low.compare(low.size() - tail.size(), tail.size(), tail) != 0) return std::nullopt;
  std::string span = trim(text.substr(head.size(), text.size() - head.size() - tail.size()));
  if (span.empty()) return std::nullopt;
  return span;
}

}  // namespace

void RelationVocabulary::add(const std::string& relation, RelationPhrasing phrasing) {
  if (phrasing.statement.find("SUBJECT") == std::string::npos ||
      phrasing.statement.find("OBJECT") == std::string::npos) {
    throw Error("statement pattern for '" + relation + "' needs SUBJECT and OBJECT slots");
  }
  if (phrasing.subquestion.find("SUBJECT") == std::string::npos) {
    throw Error("subquestion pattern for '" + relation + "' needs a SUBJECT slot");
  }
  if (phrasing.hop_phrase.find("SUBJECT") == std::string::npos) {
    throw Error("hop phrase for '" + relation + "' needs a SUBJECT slot");
  }
  relations_[relation] = std::move(phrasing);
}

bool RelationVocabulary::contains(const std::string& relation) const {
  return relations_.count(relation) > 0;
}

const RelationPhrasing& RelationVocabulary::phrasing(const std::string& relation) const {
  auto it = relations_.find(relation);
  if (it == relations_.end()) throw UnknownRelationError(relation);
  return it->second;
}

TemplateSet RelationVocabulary::statement_templates() const {
  TemplateSet t;
  for (const auto& [relation, phr] : relations_) t.add(relation, phr.statement);
  return t;
}

std::string RelationVocabulary::render_subquestion(const std::string& relation,
                                                   const std::string& subject) const {
  return substitute_subject(phrasing(relation).subquestion, subject);
}

std::vector<std::string> RelationVocabulary::atomic_questions(const std::string& relation,
                                                              const std::string& subject) const {
  const RelationPhrasing& phr = phrasing(relation);
  std::vector<std::string> out;
  out.push_back(substitute_subject(phr.subquestion, subject));
  for (const std::string& p : phr.paraphrases) {
    std::string q = substitute_subject(p, subject);
    bool dup = false;
    for (const std::string& seen : out) dup = dup || seen == q;
    if (!dup) out.push_back(std::move(q));
  }
  return out;
}

std::optional<std::pair<std::string, std::string>> RelationVocabulary::parse_subquestion(
    const std::string& subquestion) const {
  for (const auto& [relation, phr] : relations_) {
    if (auto subject = match_subject(phr.subquestion, subquestion)) {
      return std::make_pair(*subject, relation);
    }
  }
  return std::nullopt;
}

RelationVocabulary default_relation_vocabulary() {
  RelationVocabulary v;
  v.add("plays for",
        {"SUBJECT plays for OBJECT.",
         "Which team does SUBJECT play for?",
         {"Which team does SUBJECT play for?", "What team is SUBJECT a member of?",
          "SUBJECT currently plays for which team?"},
         "the team that SUBJECT plays for"});
  v.add("located in",
        {"SUBJECT is located in OBJECT.",
         "In which region is SUBJECT located?",
         {"In which region is SUBJECT located?", "Where is SUBJECT located?",
          "Which region contains SUBJECT?"},
         "the region where SUBJECT is located"});
  v.add("capital",
        {"The capital of SUBJECT is OBJECT.",
         "What is the capital of SUBJECT?",
         {"What is the capital of SUBJECT?", "Which city serves as the capital of SUBJECT?",
          "What is the name of the capital city of SUBJECT?"},
         "the capital of SUBJECT"});
  v.add("led by",
        {"SUBJECT is led by OBJECT.",
         "Who leads SUBJECT?",
         {"Who leads SUBJECT?", "Who is the leader of SUBJECT?",
          "Which person is in charge of SUBJECT?"},
         "the leader of SUBJECT"});
  v.add("founded by",
        {"SUBJECT was founded by OBJECT.",
         "Who founded SUBJECT?",
         {"Who founded SUBJECT?", "Who is the founder of SUBJECT?",
          "Which person established SUBJECT?"},
         "the founder of SUBJECT"});
  v.add("works for",
        {"SUBJECT works for OBJECT.",
         "Which organization does SUBJECT work for?",
         {"Which organization does SUBJECT work for?", "Who employs SUBJECT?",
          "SUBJECT is employed by which organization?"},
         "the organization that SUBJECT works for"});
  v.add("citizen of",
        {"SUBJECT is a citizen of OBJECT.",
         "What is the country of citizenship of SUBJECT?",
         {"What is the country of citizenship of SUBJECT?",
          "Which country is SUBJECT a citizen of?", "What is the nationality of SUBJECT?"},
         "the country of citizenship of SUBJECT"});
  v.add("official language",
        {"The official language of SUBJECT is OBJECT.",
         "What is the official language of SUBJECT?",
         {"What is the official language of SUBJECT?",
          "Which language is official in SUBJECT?",
          "What language do the authorities of SUBJECT use?"},
         "the official language of SUBJECT"});
  v.add("headquartered in",
        {"SUBJECT is headquartered in OBJECT.",
         "Where is SUBJECT headquartered?",
         {"Where is SUBJECT headquartered?", "In which place is SUBJECT headquartered?",
          "Where are the headquarters of SUBJECT?"},
         "the place where SUBJECT is headquartered"});
  v.add("named after",
        {"SUBJECT is named after OBJECT.",
         "What is SUBJECT named after?",
         {"What is SUBJECT named after?", "After what is SUBJECT named?",
          "What gave SUBJECT its name?"},
         "the namesake of SUBJECT"});
  return v;
}

RelationVocabulary load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open world file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
  RelationVocabulary v;
  for (const auto& [relation, rec] : j.at("relations").items()) {
    RelationPhrasing phr;
    phr.statement = rec.at("statement").get<std::string>();
    phr.subquestion = rec.at("subquestion").get<std::string>();
    phr.paraphrases = rec.value("paraphrases", std::vector<std::string>{});
    phr.hop_phrase = rec.at("hop_phrase").get<std::string>();
    v.add(relation, std::move(phr));
  }
  return v;
}

void save_world(const RelationVocabulary& vocab, const std::string& path) {
  nlohmann::json relations = nlohmann::json::object();
  for (const auto& [relation, phr] : vocab.relations()) {
    relations[relation] = {
        {"statement", phr.statement},
        {"subquestion", phr.subquestion},
        {"paraphrases", phr.paraphrases},
        {"hop_phrase", phr.hop_phrase},
    };
  }
  nlohmann::json j = {{"relations", relations}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write world file: " + path);
  out << j.dump(2) << "\n";
}

void QuestionIndex::add(const std::string& question, QuestionPlan plan) {
  plans_[trim(question)] = std::move(plan);
}

const QuestionPlan* QuestionIndex::find(const std::string& question) const {
  auto it = plans_.find(trim(question));
  if (it == plans_.end()) return nullptr;
  return &it->second;
}

QuestionIndex QuestionIndex::from_instances(const std::vector<MultiHopInstance>& instances) {
  QuestionIndex index;
  for (const MultiHopInstance& inst : instances) {
    QuestionPlan plan;
    plan.start_subject = inst.start_subject.label;
    for (const Hop& hop : inst.hops) plan.relations.push_back(hop.relation);
    for (const std::string& q : inst.questions) index.add(q, plan);
  }
  return index;
}

PairScorer oracle_scorer(const RelationVocabulary& vocab) {
  // Copies the vocabulary so the scorer owns what it needs.
  auto templates = std::make_shared<TemplateSet>(vocab.statement_templates());
  auto vocab_copy = std::make_shared<RelationVocabulary>(vocab);
  return [templates, vocab_copy](const std::string& statement, const std::string& question) {
    std::optional<Fact> fact = templates->parse_statement_any(statement);
    if (!fact) return 0.0;
    std::string want = normalize_label(question);
    for (const std::string& q : vocab_copy->atomic_questions(fact->relation,
                                                             fact->subject.label)) {
      if (normalize_label(q) == want) return 1.0;
    }
    return 0.0;
  };
}

}  // namespace memqa
