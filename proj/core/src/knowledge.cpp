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

#include "memqa/knowledge.hpp"

#include <fstream>

#include "json.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

constexpr std::string_view kSubjectSlot = "SUBJECT";
constexpr std::string_view kObjectSlot = "OBJECT";

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const nlohmann::json& j, const std::string& path, int indent = 2) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << j.dump(indent) << "\n";
}

// Positions of the two slots within a pattern, subject first.
struct SlotLayout {
  size_t subject_pos;
  size_t object_pos;
};

SlotLayout slot_layout(const std::string& pattern) {
  size_t s = pattern.find(kSubjectSlot);
  size_t o = pattern.find(kObjectSlot);
  return {s, o};
}

}  // namespace

Entity Entity::of(std::string display_label) {
  Entity e;
  e.norm = normalize_label(display_label);
  e.label = std::move(display_label);
  if (e.norm.empty()) throw Error("entity label is empty after normalization");
  return e;
}

Fact Fact::of(std::string subject, std::string relation, std::string object) {
  Fact f;
  f.subject = Entity::of(std::move(subject));
  f.relation = trim(relation);
  f.object = Entity::of(std::move(object));
  if (f.relation.empty()) throw Error("fact relation is empty");
  return f;
}

SrKey sr_key(const Fact& f) { return {f.subject.norm, normalize_label(f.relation)}; }

SrKey sr_key(const std::string& subject, const std::string& relation) {
  return {normalize_label(subject), normalize_label(relation)};
}

void TemplateSet::add(const std::string& relation, const std::string& pattern) {
  size_t s_first = pattern.find(kSubjectSlot);
  size_t o_first = pattern.find(kObjectSlot);
  if (s_first == std::string::npos || o_first == std::string::npos) {
    throw Error("pattern for '" + relation + "' must contain SUBJECT and OBJECT once: " + pattern);
  }
  if (pattern.find(kSubjectSlot, s_first + 1) != std::string::npos ||
      pattern.find(kObjectSlot, o_first + 1) != std::string::npos) {
    throw Error("pattern for '" + relation + "' repeats a slot: " + pattern);
  }
  patterns_[relation] = pattern;
}

bool TemplateSet::contains(const std::string& relation) const {
  return patterns_.count(relation) > 0;
}

const std::string& TemplateSet::pattern(const std::string& relation) const {
  auto it = patterns_.find(relation);
  if (it == patterns_.end()) throw UnknownRelationError(relation);
  return it->second;
}

std::optional<Fact> TemplateSet::parse_statement(const std::string& relation,
                                                 const std::string& statement) const {
  auto it = patterns_.find(relation);
  if (it == patterns_.end()) return std::nullopt;
  const std::string& pattern = it->second;
  SlotLayout layout = slot_layout(pattern);

  // Split the pattern into the three fixed pieces around the slots.
  size_t first_pos = std::min(layout.subject_pos, layout.object_pos);
  size_t second_pos = std::max(layout.subject_pos, layout.object_pos);
  bool subject_first = layout.subject_pos < layout.object_pos;
  size_t first_len = subject_first ? kSubjectSlot.size() : kObjectSlot.size();
  size_t second_len = subject_first ? kObjectSlot.size() : kSubjectSlot.size();

  std::string head = pattern.substr(0, first_pos);
  std::string mid = pattern.substr(first_pos + first_len, second_pos - first_pos - first_len);
  std::string tail = pattern.substr(second_pos + second_len);

  std::string low_stmt = to_lower(statement);
  std::string low_head = to_lower(head);
  std::string low_mid = to_lower(mid);
  std::string low_tail = to_lower(tail);

  if (!starts_with(low_stmt, low_head)) return std::nullopt;
  if (low_stmt.size() < low_head.size() + low_mid.size() + low_tail.size()) return std::nullopt;
  if (low_stmt.compare(low_stmt.size() - low_tail.size(), low_tail.size(), low_tail) != 0) {
    return std::nullopt;
  }
  size_t inner_begin = low_head.size();
  size_t inner_end = low_stmt.size() - low_tail.size();
  if (low_mid.empty()) return std::nullopt;  // adjoining slots are unresolvable
  size_t mid_pos = low_stmt.find(low_mid, inner_begin);
  if (mid_pos == std::string::npos || mid_pos + low_mid.size() > inner_end) return std::nullopt;

  std::string first_span = trim(statement.substr(inner_begin, mid_pos - inner_begin));
  std::string second_span =
      trim(statement.substr(mid_pos + mid.size(), inner_end - mid_pos - mid.size()));
  if (first_span.empty() || second_span.empty()) return std::nullopt;

  try {
    if (subject_first) return Fact::of(first_span, relation, second_span);
    return Fact::of(second_span, relation, first_span);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Fact> TemplateSet::parse_statement_any(const std::string& statement) const {
  for (const auto& [relation, pattern] : patterns_) {
    (void)pattern;
    if (auto f = parse_statement(relation, statement)) return f;
  }
  return std::nullopt;
}

std::string verbalize(const Fact& fact, const TemplateSet& templates) {
  const std::string& pattern = templates.pattern(fact.relation);
  SlotLayout layout = slot_layout(pattern);
  // Substitute from the rightmost slot so earlier offsets stay valid and
  // slot-like text inside labels is never rescanned.
  std::string out = pattern;
  if (layout.subject_pos > layout.object_pos) {
    out.replace(layout.subject_pos, kSubjectSlot.size(), fact.subject.label);
    out.replace(layout.object_pos, kObjectSlot.size(), fact.object.label);
  } else {
    out.replace(layout.object_pos, kObjectSlot.size(), fact.object.label);
    out.replace(layout.subject_pos, kSubjectSlot.size(), fact.subject.label);
  }
  return out;
}

Edit Edit::make(const Fact& fact, const TemplateSet& templates) {
  Edit e;
  e.fact = fact;
  e.statement = verbalize(fact, templates);
  return e;
}

Edit Edit::checked(Fact fact, std::string statement, const TemplateSet& templates) {
  std::string rendered = verbalize(fact, templates);
  if (rendered != statement) {
    throw Error("edit statement does not match its template rendering: \"" + statement +
                "\" vs \"" + rendered + "\"");
  }
  Edit e;
  e.fact = std::move(fact);
  e.statement = std::move(statement);
  return e;
}

const Edit* EditMemory::lookup(const std::string& subject, const std::string& relation) const {
  auto it = index_.find(sr_key(subject, relation));
  if (it == index_.end()) return nullptr;
  return &entries_[it->second];
}

std::optional<size_t> EditMemory::position(const std::string& subject,
                                           const std::string& relation) const {
  auto it = index_.find(sr_key(subject, relation));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EditMemory build_memory(const std::vector<Edit>& edits) {
  EditMemory m;
  for (const Edit& e : edits) {
    SrKey key = sr_key(e.fact);
    auto it = m.index_.find(key);
    if (it == m.index_.end()) {
      m.index_[key] = m.entries_.size();
      m.entries_.push_back(e);
    } else {
      // Last write wins; the entry keeps its original position.
      m.entries_[it->second] = e;
      ++m.replacements_;
    }
  }
  return m;
}

void BaseKB::add_fact(const Fact& f) {
  SrKey key = sr_key(f);
  auto it = facts_.find(key);
  if (it != facts_.end()) {
    if (!(it->second == f.object)) {
      throw Error("conflicting KB facts for (" + f.subject.label + ", " + f.relation + ")");
    }
    return;
  }
  facts_.emplace(std::move(key), f.object);
}

void BaseKB::add_memberships(const std::string& entity, std::vector<Membership> memberships) {
  std::string norm = normalize_label(entity);
  auto& slot = memberships_[norm];
  if (slot.first.empty()) slot.first = trim(entity);
  for (auto& m : memberships) slot.second.push_back(std::move(m));
}

void BaseKB::add_aliases(const std::string& entity, std::vector<std::string> aliases) {
  auto& slot = aliases_[normalize_label(entity)];
  for (auto& a : aliases) slot.push_back(std::move(a));
}

std::optional<Entity> BaseKB::lookup(const std::string& subject,
                                     const std::string& relation) const {
  auto it = facts_.find(sr_key(subject, relation));
  if (it == facts_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Membership>* BaseKB::memberships(const std::string& entity) const {
  auto it = memberships_.find(normalize_label(entity));
  if (it == memberships_.end()) return nullptr;
  return &it->second.second;
}

const std::vector<std::string>* BaseKB::aliases(const std::string& entity) const {
  auto it = aliases_.find(normalize_label(entity));
  if (it == aliases_.end()) return nullptr;
  return &it->second;
}

std::vector<Fact> MultiHopInstance::original_chain() const {
  std::vector<Fact> chain;
  chain.reserve(hops.size());
  Entity current = start_subject;
  for (const Hop& hop : hops) {
    Fact f;
    f.subject = current;
    f.relation = hop.relation;
    f.object = hop.orig_object;
    chain.push_back(f);
    current = hop.orig_object;
  }
  return chain;
}

Path gold_path(const MultiHopInstance& instance, const EditMemory& batch, const BaseKB& kb) {
  Path path;
  path.reserve(instance.hops.size() + 1);
  Entity current = instance.start_subject;
  path.push_back(current);
  for (const Hop& hop : instance.hops) {
    const Edit* edit = batch.lookup(current.label, hop.relation);
    std::optional<Entity> next;
    if (edit != nullptr) {
      next = edit->fact.object;
    } else {
      next = kb.lookup(current.label, hop.relation);
    }
    if (!next) throw UnresolvableHopError(current.label, hop.relation);
    path.push_back(*next);
    current = *next;
  }
  return path;
}

std::vector<Edit> filter_shared_sr(const std::vector<Edit>& candidate_edits,
                                   const std::vector<Fact>& protected_facts) {
  std::map<SrKey, bool> blocked;
  for (const Fact& f : protected_facts) blocked[sr_key(f)] = true;
  std::vector<Edit> out;
  out.reserve(candidate_edits.size());
  for (const Edit& e : candidate_edits) {
    if (!blocked.count(sr_key(e.fact))) out.push_back(e);
  }
  return out;
}

std::vector<Fact> filter_shared_sr(const std::vector<Fact>& candidate_edits,
                                   const std::vector<Fact>& protected_facts) {
  std::map<SrKey, bool> blocked;
  for (const Fact& f : protected_facts) blocked[sr_key(f)] = true;
  std::vector<Fact> out;
  out.reserve(candidate_edits.size());
  for (const Fact& f : candidate_edits) {
    if (!blocked.count(sr_key(f))) out.push_back(f);
  }
  return out;
}

TemplateSet load_templates(const std::string& path) {
  nlohmann::json j = read_json_file(path);
  if (!j.is_object()) throw Error("template file must be a JSON object: " + path);
  TemplateSet t;
  for (const auto& [relation, pattern] : j.items()) {
    if (!pattern.is_string()) throw Error("template for '" + relation + "' must be a string");
    t.add(relation, pattern.get<std::string>());
  }
  return t;
}

void save_templates(const TemplateSet& templates, const std::string& path) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [relation, pattern] : templates.patterns()) j[relation] = pattern;
  write_json_file(j, path);
}

BaseKB load_kb(const std::string& path) {
  nlohmann::json j = read_json_file(path);
  if (!j.is_array()) throw Error("KB file must be a JSON array: " + path);
  BaseKB kb;
  size_t index = 0;
  for (const auto& rec : j) {
    if (rec.contains("subject")) {
      kb.add_fact(Fact::of(rec.at("subject").get<std::string>(),
                           rec.at("relation").get<std::string>(),
                           rec.at("object").get<std::string>()));
    } else if (rec.contains("entity")) {
      std::string entity = rec.at("entity").get<std::string>();
      std::vector<Membership> ms;
      for (const auto& m : rec.at("memberships")) {
        ms.push_back({m.at("relation").get<std::string>(), m.at("object").get<std::string>()});
      }
      kb.add_memberships(entity, std::move(ms));
      if (rec.contains("aliases")) {
        kb.add_aliases(entity, rec.at("aliases").get<std::vector<std::string>>());
      }
    } else {
      throw SchemaError(index, "KB record needs either 'subject' or 'entity'");
    }
    ++index;
  }
  return kb;
}

void save_kb(const BaseKB& kb, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [key, object] : kb.facts()) {
    j.push_back({{"subject", key.first}, {"relation", key.second}, {"object", object.label}});
  }
  for (const auto& [norm, rec] : kb.membership_records()) {
    nlohmann::json ms = nlohmann::json::array();
    for (const Membership& m : rec.second) {
      ms.push_back({{"relation", m.relation}, {"object", m.object}});
    }
    nlohmann::json out = {{"entity", rec.first}, {"memberships", ms}};
    if (const auto* aliases = kb.aliases(norm); aliases != nullptr && !aliases->empty()) {
      out["aliases"] = *aliases;
    }
    j.push_back(out);
  }
  write_json_file(j, path);
}

std::vector<Fact> load_edit_facts(const std::string& path) {
  nlohmann::json j = read_json_file(path);
  if (!j.is_array()) throw Error("edits file must be a JSON array: " + path);
  std::vector<Fact> out;
  size_t index = 0;
  for (const auto& rec : j) {
    try {
      out.push_back(Fact::of(rec.at("subject").get<std::string>(),
                             rec.at("relation").get<std::string>(),
                             rec.at("new_object").get<std::string>()));
    } catch (const std::exception& e) {
      throw SchemaError(index, e.what());
    }
    ++index;
  }
  return out;
}

void save_edit_facts(const std::vector<Fact>& facts, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const Fact& f : facts) {
    j.push_back({{"subject", f.subject.label},
                 {"relation", f.relation},
                 {"new_object", f.object.label}});
  }
  write_json_file(j, path);
}

void save_memory(const EditMemory& memory, const std::string& path) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Edit& e : memory.entries()) {
    entries.push_back({{"subject", e.fact.subject.label},
                       {"relation", e.fact.relation},
                       {"new_object", e.fact.object.label},
                       {"statement", e.statement}});
  }
  nlohmann::json j = {{"entries", entries}, {"replacements", memory.replacements()}};
  write_json_file(j, path);
}

EditMemory load_memory(const std::string& path, const TemplateSet& templates) {
  nlohmann::json j = read_json_file(path);
  std::vector<Edit> edits;
  size_t index = 0;
  for (const auto& rec : j.at("entries")) {
    try {
      Fact f = Fact::of(rec.at("subject").get<std::string>(),
                        rec.at("relation").get<std::string>(),
                        rec.at("new_object").get<std::string>());
      edits.push_back(Edit::checked(f, rec.at("statement").get<std::string>(), templates));
    } catch (const std::exception& e) {
      throw SchemaError(index, e.what());
    }
    ++index;
  }
  return build_memory(edits);
}

}  // namespace memqa
