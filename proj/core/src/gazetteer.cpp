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

#include "memqa/text.hpp"

namespace memqa {

namespace {

std::string token_key(const std::string& label) {
  std::string key;
  for (const std::string& tok : tokenize(label)) {
    if (!key.empty()) key.push_back(' ');
    key += tok;
  }
  return key;
}

}  // namespace

void Gazetteer::add(const std::string& label, std::vector<Membership> memberships) {
  if (memberships.empty()) throw MissingMembershipError(label);
  std::string key = token_key(label);
  if (key.empty()) throw Error("gazetteer label has no tokens: " + label);
  size_t tokens = 1;
  for (char c : key) tokens += (c == ' ') ? 1 : 0;
  max_tokens_ = std::max(max_tokens_, tokens);
  // First writer wins on duplicate token sequences.
  auto [it, inserted] = by_tokens_.emplace(key, Record{trim(label), std::move(memberships)});
  (void)it;
  if (inserted) label_to_key_[normalize_label(label)] = key;
}

Gazetteer Gazetteer::from_kb(const BaseKB& kb) {
  Gazetteer g;
  for (const auto& [norm, rec] : kb.membership_records()) {
    (void)norm;
    if (!rec.second.empty()) g.add(rec.first, rec.second);
  }
  return g;
}

bool Gazetteer::contains(const std::string& label) const {
  return label_to_key_.count(normalize_label(label)) > 0;
}

const std::vector<Membership>& Gazetteer::memberships(const std::string& label) const {
  auto it = label_to_key_.find(normalize_label(label));
  if (it == label_to_key_.end()) throw Error("entity not in gazetteer: " + label);
  return by_tokens_.at(it->second).memberships;
}

std::optional<std::string> recognize_entity(const std::string& question, const Gazetteer& gaz) {
  std::vector<std::string> tokens = tokenize(question);
  if (tokens.empty() || gaz.size() == 0) return std::nullopt;

  size_t max_len = std::min(gaz.max_label_tokens(), tokens.size());
  for (size_t len = max_len; len >= 1; --len) {
    for (size_t start = 0; start + len <= tokens.size(); ++start) {
      std::string key;
      for (size_t i = 0; i < len; ++i) {
        if (!key.empty()) key.push_back(' ');
        key += tokens[start + i];
      }
      auto it = gaz.records().find(key);
      if (it != gaz.records().end()) return it->second.label;
    }
  }
  return std::nullopt;
}

Fact pick_membership_fact(const std::string& entity, const Gazetteer& gaz, Rng& rng) {
  const std::vector<Membership>& ms = gaz.memberships(entity);
  if (ms.empty()) throw MissingMembershipError(entity);
  const Membership& pick = ms[ms.size() == 1 ? 0 : rng.below(ms.size())];
  return Fact::of(entity, pick.relation, pick.object);
}

std::string render_prompt(const std::string& entity, const Fact& membership) {
  const std::string& object = membership.object.label;
  std::string line(kKnowledgePromptPrefix);
  line += entity;
  line += ", ";
  line += indefinite_article(object);
  line += " ";
  line += object;
  line += ".";
  return line;
}

}  // namespace memqa
