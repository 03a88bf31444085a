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

#ifndef MEMQA_KNOWLEDGE_HPP_
#define MEMQA_KNOWLEDGE_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "memqa/errors.hpp"

namespace memqa {

// An entity is identified by its normalized label. The display label is
// preserved for rendering.
struct Entity {
  std::string label;
  std::string norm;

  static Entity of(std::string display_label);
  bool operator==(const Entity& other) const { return norm == other.norm; }
};

// A knowledge fact (subject, relation, object). Relations are opaque
// identifier strings compared in normalized form.
struct Fact {
  Entity subject;
  std::string relation;
  Entity object;

  static Fact of(std::string subject, std::string relation, std::string object);
};

// Normalized (subject, relation) pair used as a lookup key.
using SrKey = std::pair<std::string, std::string>;
SrKey sr_key(const Fact& f);
SrKey sr_key(const std::string& subject, const std::string& relation);

// Relation id -> statement pattern. Patterns contain the literal slot
// tokens SUBJECT and OBJECT exactly once each.
class TemplateSet {
 public:
  TemplateSet() = default;

  // Throws Error if the pattern violates the slot grammar.
  void add(const std::string& relation, const std::string& pattern);

  bool contains(const std::string& relation) const;
  const std::string& pattern(const std::string& relation) const;  // throws UnknownRelation
  const std::map<std::string, std::string>& patterns() const { return patterns_; }

  // Inverse of verbalize: match a statement against the pattern of
  // `relation` and recover the subject/object spans. Case-insensitive on
  // the fixed pattern text. Empty optional when the statement does not fit.
  std::optional<Fact> parse_statement(const std::string& relation,
                                      const std::string& statement) const;

  // Tries every relation pattern in id order.
  std::optional<Fact> parse_statement_any(const std::string& statement) const;

 private:
  std::map<std::string, std::string> patterns_;
};

// Renders the relation pattern with subject/object display labels.
std::string verbalize(const Fact& fact, const TemplateSet& templates);

// An edit: the replacement fact plus its verbalized statement. The
// statement always equals the template rendering of the fact.
struct Edit {
  Fact fact;
  std::string statement;

  static Edit make(const Fact& fact, const TemplateSet& templates);
  // Validates that `statement` matches the rendering; throws Error otherwise.
  static Edit checked(Fact fact, std::string statement, const TemplateSet& templates);
};

// Ordered edit store with a normalized (subject, relation) index.
// Later duplicates on the same key replace the earlier entry in place.
class EditMemory {
 public:
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Edit>& entries() const { return entries_; }
  const Edit& at(size_t pos) const { return entries_[pos]; }
  size_t replacements() const { return replacements_; }

  const Edit* lookup(const std::string& subject, const std::string& relation) const;
  std::optional<size_t> position(const std::string& subject, const std::string& relation) const;

  friend EditMemory build_memory(const std::vector<Edit>& edits);

 private:
  std::vector<Edit> entries_;
  std::map<SrKey, size_t> index_;
  size_t replacements_ = 0;
};

EditMemory build_memory(const std::vector<Edit>& edits);

// Membership facts kept for the knowledge-prompt generator.
struct Membership {
  std::string relation;  // "instance of" | "subclass of"
  std::string object;
};

// Ground facts used to resolve hops the edit memory does not cover, plus
// per-entity membership facts and optional alias lists.
class BaseKB {
 public:
  void add_fact(const Fact& f);  // throws Error on conflicting duplicate key
  void add_memberships(const std::string& entity, std::vector<Membership> memberships);
  void add_aliases(const std::string& entity, std::vector<std::string> aliases);

  std::optional<Entity> lookup(const std::string& subject, const std::string& relation) const;
  const std::vector<Membership>* memberships(const std::string& entity) const;
  const std::vector<std::string>* aliases(const std::string& entity) const;

  size_t fact_count() const { return facts_.size(); }
  const std::map<SrKey, Entity>& facts() const { return facts_; }
  const std::map<std::string, std::pair<std::string, std::vector<Membership>>>&
  membership_records() const {
    return memberships_;
  }

 private:
  std::map<SrKey, Entity> facts_;
  // norm entity -> (display label, memberships)
  std::map<std::string, std::pair<std::string, std::vector<Membership>>> memberships_;
  std::map<std::string, std::vector<std::string>> aliases_;
};

// Hop description of a multi-hop instance: relation plus the object of
// the unedited chain.
struct Hop {
  std::string relation;
  Entity orig_object;
};

// One k-hop question with its three paraphrases and attached edits.
struct MultiHopInstance {
  std::string case_id;
  std::vector<std::string> questions;  // exactly 3
  Entity start_subject;
  std::vector<Hop> hops;          // n in {2,3,4}
  std::vector<Fact> edits;        // counterfactual replacement facts
  std::string answer;             // pre-edit answer
  std::string new_answer;         // post-edit answer
  std::vector<std::string> answer_aliases;
  std::optional<std::vector<std::string>> gold_path;  // entity labels, length n+1

  size_t hop_count() const { return hops.size(); }
  std::vector<Fact> original_chain() const;
};

// Entity sequence <s1, o1, ..., on>.
using Path = std::vector<Entity>;

// Walks the instance chain applying edits with cascading effects: each
// hop resolves through the edit memory first, then the base KB.
// Throws UnresolvableHopError when neither side covers a hop.
Path gold_path(const MultiHopInstance& instance, const EditMemory& batch, const BaseKB& kb);

// Keeps the candidates whose normalized (subject, relation) appears in
// no protected fact. Order preserved.
std::vector<Edit> filter_shared_sr(const std::vector<Edit>& candidate_edits,
                                   const std::vector<Fact>& protected_facts);
std::vector<Fact> filter_shared_sr(const std::vector<Fact>& candidate_edits,
                                   const std::vector<Fact>& protected_facts);

// File formats -------------------------------------------------------------

TemplateSet load_templates(const std::string& path);
void save_templates(const TemplateSet& templates, const std::string& path);

BaseKB load_kb(const std::string& path);
void save_kb(const BaseKB& kb, const std::string& path);

// Edits file: JSON array of {subject, relation, new_object}.
std::vector<Fact> load_edit_facts(const std::string& path);
void save_edit_facts(const std::vector<Fact>& facts, const std::string& path);

// Memory file: entries with statements plus the replacement count.
void save_memory(const EditMemory& memory, const std::string& path);
EditMemory load_memory(const std::string& path, const TemplateSet& templates);

}  // namespace memqa

#endif  // MEMQA_KNOWLEDGE_HPP_
