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

#include <fstream>

#include "json.hpp"
#include "memqa/evaluation.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

nlohmann::json read_json(const std::string& path) {
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

// Dotted-path lookup inside a record, e.g. "orig.answer".
const nlohmann::json* find_path(const nlohmann::json& rec, const std::string& path) {
  const nlohmann::json* cur = &rec;
  size_t begin = 0;
  while (begin <= path.size()) {
    size_t dot = path.find('.', begin);
    std::string key = path.substr(begin, dot == std::string::npos ? std::string::npos
                                                                  : dot - begin);
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &cur->at(key);
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  return cur;
}

std::string mapped(const FieldMapping* mapping, const std::string& canonical) {
  if (mapping == nullptr) return canonical;
  auto it = mapping->scalar.find(canonical);
  return it == mapping->scalar.end() ? canonical : it->second;
}

std::string mapped_sub(const std::map<std::string, std::string>& table,
                       const std::string& canonical) {
  auto it = table.find(canonical);
  return it == table.end() ? canonical : it->second;
}

std::string id_of(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<int64_t>());
  throw Error("case id must be a string or integer");
}

// Best-effort check that every attached edit matches a (subject,
// relation) of the edit-resolved chain. The walk follows edits through
// divergences; once it needs the KB (unavailable here) the remaining
// edits are accepted as-is.
void validate_edits(const MultiHopInstance& inst, size_t record_index) {
  std::vector<bool> consumed(inst.edits.size(), false);
  std::string current = inst.start_subject.norm;
  bool resolved_all = true;
  for (size_t i = 0; i < inst.hops.size(); ++i) {
    SrKey key{current, normalize_label(inst.hops[i].relation)};
    bool edited = false;
    for (size_t e = 0; e < inst.edits.size(); ++e) {
      if (sr_key(inst.edits[e]) == key) {
        consumed[e] = true;
        current = inst.edits[e].object.norm;
        edited = true;
        break;
      }
    }
    if (edited) continue;
    // Unedited hop: only the original chain resolves without a KB.
    bool on_original = (i == 0) || (current == inst.hops[i - 1].orig_object.norm);
    if (i > 0 && !on_original) {
      resolved_all = false;
      break;
    }
    if (i == 0 && current != inst.start_subject.norm) {
      resolved_all = false;
      break;
    }
    current = inst.hops[i].orig_object.norm;
  }
  if (resolved_all) {
    for (size_t e = 0; e < inst.edits.size(); ++e) {
      if (!consumed[e]) {
        throw SchemaError(record_index, "edit (" + inst.edits[e].subject.label + ", " +
                                            inst.edits[e].relation +
                                            ") matches no hop of the resolved chain");
      }
    }
  }
}

}  // namespace

FieldMapping load_mapping(const std::string& path) {
  nlohmann::json j = read_json(path);
  FieldMapping m;
  for (const auto& [key, value] : j.items()) {
    if (key == "hops" || key == "edits") {
      auto& table = key == "hops" ? m.hops : m.edits;
      for (const auto& [sub, name] : value.items()) table[sub] = name.get<std::string>();
    } else {
      m.scalar[key] = value.get<std::string>();
    }
  }
  return m;
}

std::vector<MultiHopInstance> load_dataset(const std::string& path,
                                           const std::optional<FieldMapping>& mapping) {
  nlohmann::json j = read_json(path);
  if (!j.is_array()) throw Error("dataset must be a JSON array: " + path);
  const FieldMapping* map = mapping ? &*mapping : nullptr;

  std::vector<MultiHopInstance> out;
  size_t index = 0;
  for (const auto& rec : j) {
    MultiHopInstance inst;
    try {
      const nlohmann::json* v = find_path(rec, mapped(map, "case_id"));
      if (v == nullptr) throw Error("missing case_id");
      inst.case_id = id_of(*v);

      v = find_path(rec, mapped(map, "questions"));
      if (v == nullptr || !v->is_array()) throw Error("missing questions array");
      inst.questions = v->get<std::vector<std::string>>();
      if (inst.questions.size() != 3) {
        throw Error("exactly 3 question paraphrases required, got " +
                    std::to_string(inst.questions.size()));
      }

      v = find_path(rec, mapped(map, "start_subject"));
      if (v == nullptr) throw Error("missing start_subject");
      inst.start_subject = Entity::of(v->get<std::string>());

      std::string hops_path = map && map->hops.count("path") ? map->hops.at("path") : "hops";
      v = find_path(rec, hops_path);
      if (v == nullptr || !v->is_array()) throw Error("missing hops array");
      std::string rel_key = map ? mapped_sub(map->hops, "relation") : "relation";
      std::string obj_key = map ? mapped_sub(map->hops, "orig_object") : "orig_object";
      for (const auto& hop : *v) {
        const nlohmann::json* r = find_path(hop, rel_key);
        const nlohmann::json* o = find_path(hop, obj_key);
        if (r == nullptr || o == nullptr) throw Error("hop record incomplete");
        inst.hops.push_back({trim(r->get<std::string>()), Entity::of(o->get<std::string>())});
      }
      if (inst.hops.size() < 2 || inst.hops.size() > 4) {
        throw Error("hop count must be 2, 3, or 4, got " + std::to_string(inst.hops.size()));
      }

      std::string edits_path = map && map->edits.count("path") ? map->edits.at("path") : "edits";
      v = find_path(rec, edits_path);
      if (v != nullptr && !v->is_null()) {
        std::string s_key = map ? mapped_sub(map->edits, "subject") : "subject";
        std::string r_key = map ? mapped_sub(map->edits, "relation") : "relation";
        std::string o_key = map ? mapped_sub(map->edits, "new_object") : "new_object";
        for (const auto& edit : *v) {
          const nlohmann::json* s = find_path(edit, s_key);
          const nlohmann::json* r = find_path(edit, r_key);
          const nlohmann::json* o = find_path(edit, o_key);
          if (s == nullptr || r == nullptr || o == nullptr) throw Error("edit record incomplete");
          inst.edits.push_back(Fact::of(s->get<std::string>(), r->get<std::string>(),
                                        o->get<std::string>()));
        }
      }

      v = find_path(rec, mapped(map, "answer"));
      if (v == nullptr) throw Error("missing answer");
      inst.answer = trim(v->get<std::string>());

      v = find_path(rec, mapped(map, "new_answer"));
      if (v == nullptr) throw Error("missing new_answer");
      inst.new_answer = trim(v->get<std::string>());

      v = find_path(rec, mapped(map, "answer_aliases"));
      if (v != nullptr && v->is_array()) {
        inst.answer_aliases = v->get<std::vector<std::string>>();
      }

      v = find_path(rec, mapped(map, "gold_path"));
      if (v != nullptr && v->is_array()) {
        auto labels = v->get<std::vector<std::string>>();
        if (labels.size() != inst.hops.size() + 1) {
          throw Error("gold_path length must be hop count + 1");
        }
        inst.gold_path = std::move(labels);
      }
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError(index, e.what());
    }
    validate_edits(inst, index);
    out.push_back(std::move(inst));
    ++index;
  }
  return out;
}

void save_dataset(const std::vector<MultiHopInstance>& instances, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const MultiHopInstance& inst : instances) {
    nlohmann::json hops = nlohmann::json::array();
    for (const Hop& hop : inst.hops) {
      hops.push_back({{"relation", hop.relation}, {"orig_object", hop.orig_object.label}});
    }
    nlohmann::json edits = nlohmann::json::array();
    for (const Fact& f : inst.edits) {
      edits.push_back({{"subject", f.subject.label},
                       {"relation", f.relation},
                       {"new_object", f.object.label}});
    }
    nlohmann::json rec = {
        {"case_id", inst.case_id},
        {"questions", inst.questions},
        {"start_subject", inst.start_subject.label},
        {"hops", hops},
        {"edits", edits},
        {"answer", inst.answer},
        {"new_answer", inst.new_answer},
    };
    if (!inst.answer_aliases.empty()) rec["answer_aliases"] = inst.answer_aliases;
    if (inst.gold_path) rec["gold_path"] = *inst.gold_path;
    j.push_back(rec);
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace memqa
