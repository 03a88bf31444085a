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

#ifndef MEMQA_GAZETTEER_HPP_
#define MEMQA_GAZETTEER_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memqa/knowledge.hpp"
#include "memqa/rng.hpp"

namespace memqa {

// Entity labels with their membership facts, matched against question
// token spans. Replaces a learned entity linker with a deterministic
// longest-match lookup; anything smarter can sit behind the same calls.
class Gazetteer {
 public:
  // Entities must carry at least one membership fact.
  void add(const std::string& label, std::vector<Membership> memberships);

  // Builds from the KB's membership records.
  static Gazetteer from_kb(const BaseKB& kb);

  bool contains(const std::string& label) const;
  const std::vector<Membership>& memberships(const std::string& label) const;
  size_t size() const { return by_tokens_.size(); }
  size_t max_label_tokens() const { return max_tokens_; }

  struct Record {
    std::string label;
    std::vector<Membership> memberships;
  };
  // Token-joined key -> record, for the recognizer.
  const std::map<std::string, Record>& records() const { return by_tokens_; }

 private:
  std::map<std::string, Record> by_tokens_;
  std::map<std::string, std::string> label_to_key_;  // normalized label -> token key
  size_t max_tokens_ = 0;
};

// Longest token-span match of a gazetteer label inside the question,
// case-insensitive; ties resolve to the earliest start. Empty when no
// label occurs.
std::optional<std::string> recognize_entity(const std::string& question, const Gazetteer& gaz);

// Uniform choice among the entity's membership facts using the session
// RNG. Throws MissingMembershipError when the record is empty.
Fact pick_membership_fact(const std::string& entity, const Gazetteer& gaz, Rng& rng);

// "Entity of Question: {entity}, a {object}." with "an" before a vowel.
std::string render_prompt(const std::string& entity, const Fact& membership);

inline constexpr const char* kKnowledgePromptPrefix = "Entity of Question: ";

}  // namespace memqa

#endif  // MEMQA_GAZETTEER_HPP_
