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

#include "memqa/gazetteer.hpp"

#include "doctest.h"
#include "memqa/text.hpp"

using namespace memqa;

namespace {

Gazetteer demo_gazetteer() {
  Gazetteer g;
  g.add("Messi", {{"instance of", "human"}});
  g.add("Inter", {{"instance of", "sports team"}});
  g.add("Inter Miami", {{"instance of", "sports team"}, {"subclass of", "organization"}});
  g.add("Ivanka Trump", {{"instance of", "human"}});
  return g;
}

}  // namespace

TEST_CASE("recognize_entity finds the key entity") {
  Gazetteer gaz = demo_gazetteer();
  SUBCASE("single entity in the question") {
    auto hit = recognize_entity("Where is Messi's current team located?", gaz);
    REQUIRE(hit.has_value());
    CHECK(*hit == "Messi");
  }
  SUBCASE("no gazetteer term yields nothing") {
    CHECK_FALSE(recognize_entity("Where is the longest river?", gaz).has_value());
  }
  SUBCASE("longest span wins over its prefix") {
    auto hit = recognize_entity("Which city is Inter Miami based in?", gaz);
    REQUIRE(hit.has_value());
    CHECK(*hit == "Inter Miami");

    // Exhaustive span scan confirms no longer gazetteer span exists.
    std::vector<std::string> tokens = tokenize("Which city is Inter Miami based in?");
    size_t longest = 0;
    for (size_t start = 0; start < tokens.size(); ++start) {
      for (size_t len = 1; start + len <= tokens.size(); ++len) {
        std::string key;
        for (size_t i = 0; i < len; ++i) {
          if (!key.empty()) key += " ";
          key += tokens[start + i];
        }
        if (gaz.records().count(key)) longest = std::max(longest, len);
      }
    }
    CHECK(longest == 2);
  }
  SUBCASE("ties on length resolve to the earliest start") {
    Gazetteer g;
    g.add("alpha one", {{"instance of", "thing"}});
    g.add("beta two", {{"instance of", "thing"}});
    auto hit = recognize_entity("compare alpha one with beta two now", g);
    REQUIRE(hit.has_value());
    CHECK(*hit == "alpha one");
  }
  SUBCASE("the returned span is actually present in the question tokens") {
    Gazetteer gaz2 = demo_gazetteer();
    std::string question = "Did Ivanka Trump ever meet Messi?";
    auto hit = recognize_entity(question, gaz2);
    REQUIRE(hit.has_value());
    std::vector<std::string> qt = tokenize(question);
    std::vector<std::string> et = tokenize(*hit);
    bool found = false;
    for (size_t start = 0; start + et.size() <= qt.size(); ++start) {
      bool all = true;
      for (size_t i = 0; i < et.size(); ++i) all = all && qt[start + i] == et[i];
      found = found || all;
    }
    CHECK(found);
  }
}

TEST_CASE("pick_membership_fact") {
  Gazetteer gaz = demo_gazetteer();
  SUBCASE("singleton membership is deterministic") {
    Rng rng(1);
    Fact f = pick_membership_fact("Messi", gaz, rng);
    CHECK(f.relation == "instance of");
    CHECK(f.object.norm == "human");
  }
  SUBCASE("fixed seed reproduces the pick") {
    Rng a(42), b(42);
    Fact fa = pick_membership_fact("Inter Miami", gaz, a);
    Fact fb = pick_membership_fact("Inter Miami", gaz, b);
    CHECK(fa.relation == fb.relation);
    CHECK(fa.object.norm == fb.object.norm);
  }
  SUBCASE("two facts draw uniformly") {
    Rng rng(7);
    int first = 0;
    for (int i = 0; i < 10000; ++i) {
      Fact f = pick_membership_fact("Inter Miami", gaz, rng);
      if (f.relation == "instance of") ++first;
    }
    CHECK(first > 4800);
    CHECK(first < 5200);
  }
  SUBCASE("missing entity errors") {
    Rng rng(1);
    CHECK_THROWS_AS(pick_membership_fact("Nobody", gaz, rng), Error);
  }
}

TEST_CASE("render_prompt uses the fixed prefix and the right article") {
  CHECK(render_prompt("Messi", Fact::of("Messi", "instance of", "human")) ==
        "Entity of Question: Messi, a human.");
  CHECK(render_prompt("Ivanka Trump", Fact::of("Ivanka Trump", "instance of", "human")) ==
        "Entity of Question: Ivanka Trump, a human.");
  CHECK(render_prompt("Inter Miami", Fact::of("Inter Miami", "instance of", "organization")) ==
        "Entity of Question: Inter Miami, an organization.");
  CHECK(render_prompt("X", Fact::of("X", "subclass of", "award")) ==
        "Entity of Question: X, an award.");
}

TEST_CASE("gazetteer invariant: every record carries a membership") {
  Gazetteer g;
  CHECK_THROWS_AS(g.add("Empty", {}), MissingMembershipError);
}
