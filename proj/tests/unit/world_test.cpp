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

#include <filesystem>

#include "doctest.h"
#include "memqa/synthetic.hpp"
#include "support/oracles.hpp"

using namespace memqa;

TEST_CASE("subquestion render and parse invert each other") {
  RelationVocabulary vocab = default_relation_vocabulary();
  for (const auto& [relation, phr] : vocab.relations()) {
    (void)phr;
    std::string q = vocab.render_subquestion(relation, "Korvalin Dema");
    auto parsed = vocab.parse_subquestion(q);
    REQUIRE(parsed.has_value());
    CHECK(parsed->first == "Korvalin Dema");
    CHECK(parsed->second == relation);
  }
  CHECK_FALSE(vocab.parse_subquestion("Completely unrelated sentence.").has_value());
}

TEST_CASE("world file round trips") {
  RelationVocabulary vocab = default_relation_vocabulary();
  std::string path =
      (std::filesystem::temp_directory_path() / "memqa_world_test.json").string();
  save_world(vocab, path);
  RelationVocabulary loaded = load_world(path);
  REQUIRE(loaded.relations().size() == vocab.relations().size());
  for (const auto& [relation, phr] : vocab.relations()) {
    const RelationPhrasing& other = loaded.phrasing(relation);
    CHECK(other.statement == phr.statement);
    CHECK(other.subquestion == phr.subquestion);
    CHECK(other.paraphrases == phr.paraphrases);
    CHECK(other.hop_phrase == phr.hop_phrase);
  }
}

TEST_CASE("oracle scorer recognizes exactly the atomic questions of an edit") {
  RelationVocabulary vocab = default_relation_vocabulary();
  PairScorer oracle = oracle_scorer(vocab);
  std::string statement = "Mereth Kale plays for Solvane United.";
  for (const std::string& q : vocab.atomic_questions("plays for", "Mereth Kale")) {
    CHECK(oracle(statement, q) == doctest::Approx(1.0));
  }
  CHECK(oracle(statement, "Which team does Someone Else play for?") == doctest::Approx(0.0));
  CHECK(oracle(statement, "Who leads Mereth Kale?") == doctest::Approx(0.0));
  CHECK(oracle("gibberish that parses nowhere", "Which team does X play for?") ==
        doctest::Approx(0.0));
}

TEST_CASE("question index maps every paraphrase to its plan") {
  WorldSpec spec;
  spec.entity_count = 60;
  spec.instance_count = 6;
  spec.train_edit_count = 0;
  spec.seed = 5;
  SyntheticWorld world = generate_world(spec);
  QuestionIndex index = QuestionIndex::from_instances(world.instances);
  CHECK(index.size() == world.instances.size() * 3);
  for (const MultiHopInstance& inst : world.instances) {
    for (const std::string& q : inst.questions) {
      const QuestionPlan* plan = index.find(q);
      REQUIRE(plan != nullptr);
      CHECK(plan->start_subject == inst.start_subject.label);
      CHECK(plan->relations.size() == inst.hop_count());
    }
  }
  CHECK(index.find("not a known question") == nullptr);
}
