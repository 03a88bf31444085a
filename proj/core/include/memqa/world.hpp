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

#ifndef MEMQA_WORLD_HPP_
#define MEMQA_WORLD_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memqa/detector.hpp"
#include "memqa/knowledge.hpp"

namespace memqa {

// Per-relation phrasing. `statement` verbalizes a fact (SUBJECT and
// OBJECT slots), `subquestion` asks for the object given the subject
// (SUBJECT slot only), `paraphrases` are atomic-question variants used
// for detector training data, and `hop_phrase` is the noun phrase used
// to compose multi-hop questions.
struct RelationPhrasing {
  std::string statement;
  std::string subquestion;
  std::vector<std::string> paraphrases;  // usually 3; first mirrors subquestion
  std::string hop_phrase;
};

class RelationVocabulary {
 public:
  void add(const std::string& relation, RelationPhrasing phrasing);

  bool contains(const std::string& relation) const;
  const RelationPhrasing& phrasing(const std::string& relation) const;
  const std::map<std::string, RelationPhrasing>& relations() const { return relations_; }

  TemplateSet statement_templates() const;

  // Renders the subquestion for (subject, relation).
  std::string render_subquestion(const std::string& relation, const std::string& subject) const;

  // All atomic-question renderings for (subject, relation): the
  // subquestion plus every paraphrase, deduplicated in order.
  std::vector<std::string> atomic_questions(const std::string& relation,
                                            const std::string& subject) const;

  // Recovers (subject, relation) from a subquestion produced by
  // render_subquestion; tries every relation pattern.
  std::optional<std::pair<std::string, std::string>> parse_subquestion(
      const std::string& subquestion) const;

 private:
  std::map<std::string, RelationPhrasing> relations_;
};

// Built-in vocabulary used when a world spec does not carry its own.
RelationVocabulary default_relation_vocabulary();

// World file: the relation vocabulary bundled for the mock reasoner, the
// trainset builder, and the oracle detector.
RelationVocabulary load_world(const std::string& path);
void save_world(const RelationVocabulary& vocab, const std::string& path);

// Question index the mock uses to follow a multi-hop session: exact
// question text -> (start subject, hop relations).
struct QuestionPlan {
  std::string start_subject;
  std::vector<std::string> relations;
};

class QuestionIndex {
 public:
  void add(const std::string& question, QuestionPlan plan);
  const QuestionPlan* find(const std::string& question) const;
  size_t size() const { return plans_.size(); }

  static QuestionIndex from_instances(const std::vector<MultiHopInstance>& instances);

 private:
  std::map<std::string, QuestionPlan> plans_;
};

// Exact scope membership test for template-generated worlds: scores 1
// when the question is one of the atomic-question renderings of the
// statement's (subject, relation), else 0. Statements must parse under
// the vocabulary's statement templates.
PairScorer oracle_scorer(const RelationVocabulary& vocab);

}  // namespace memqa

#endif  // MEMQA_WORLD_HPP_
