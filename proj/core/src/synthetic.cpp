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

#include "memqa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "memqa/rng.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

constexpr int kMaxRetriesPerInstance = 500;

const std::vector<std::string>& default_classes() {
  static const std::vector<std::string> classes = {
      "human",    "organization", "city",  "country",    "sports team",
      "company",  "language",     "award", "university", "island",
  };
  return classes;
}

// Pronounceable two-part names from a fixed syllable inventory.
class NameGenerator {
 public:
  explicit NameGenerator(Rng& rng) : rng_(rng) {}

  std::string fresh() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::string name = word();
      if (rng_.below(2) == 0) name += " " + word();
      std::string norm = normalize_label(name);
      if (taken_.insert(norm).second) return name;
    }
    throw SpecError("entity name space exhausted; reduce entity_count");
  }

 private:
  std::string word() {
    static const std::vector<std::string> starts = {"va", "me", "kor", "del", "zan", "tir",
                                                    "bru", "sol", "fen", "gal", "nor", "pela"};
    static const std::vector<std::string> mids = {"ri", "lo", "da", "ve", "mu", "sa",
                                                  "ki", "to", "ne", "ra"};
    static const std::vector<std::string> ends = {"n", "th", "mar", "dis", "ka", "rel",
                                                  "vo", "x", "lin", "dor"};
    std::string w = starts[rng_.below(starts.size())] + mids[rng_.below(mids.size())] +
                    ends[rng_.below(ends.size())];
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
  }

  Rng& rng_;
  std::set<std::string> taken_;
};

std::string nest_hop_phrase(const RelationVocabulary& vocab,
                            const std::vector<std::string>& relations,
                            const std::string& start_subject) {
  std::string phrase = start_subject;
  for (const std::string& relation : relations) {
    std::string pattern = vocab.phrasing(relation).hop_phrase;
    size_t pos = pattern.find("SUBJECT");
    pattern.replace(pos, 7, phrase);
    phrase = std::move(pattern);
  }
  return phrase;
}

std::vector<std::string> question_paraphrases(const std::string& nested) {
  return {
      "What is " + nested + "?",
      "Can you tell me what " + nested + " is?",
      "Please answer: what is " + nested + "?",
  };
}

// Largest-remainder apportionment of `total` across the weights.
std::map<size_t, size_t> apportion(const std::map<size_t, double>& weights, size_t total) {
  double weight_sum = 0.0;
  for (const auto& [hops, w] : weights) {
    (void)hops;
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw SpecError("hop mix weights must sum to a positive value");
  std::map<size_t, size_t> counts;
  std::vector<std::pair<double, size_t>> remainders;  // (-remainder, hops)
  size_t assigned = 0;
  for (const auto& [hops, w] : weights) {
    double exact = static_cast<double>(total) * w / weight_sum;
    size_t floor_count = static_cast<size_t>(std::floor(exact));
    counts[hops] = floor_count;
    assigned += floor_count;
    remainders.push_back({-(exact - std::floor(exact)), hops});
  }
  std::sort(remainders.begin(), remainders.end());
  size_t i = 0;
  while (assigned < total) {
    ++counts[remainders[i % remainders.size()].second];
    ++assigned;
    ++i;
  }
  return counts;
}

}  // namespace

void WorldSpec::validate() const {
  if (entity_count < 8) throw SpecError("entity_count must be at least 8");
  if (instance_count < 1) throw SpecError("instance_count must be at least 1");
  if (edit_rate < 0.0 || edit_rate > 1.0) throw SpecError("edit_rate must be within [0, 1]");
  for (const auto& [hops, weight] : hop_mix) {
    if (hops < 2 || hops > 4) throw SpecError("hop_mix keys must be 2, 3, or 4");
    if (weight < 0.0) throw SpecError("hop_mix weights must be non-negative");
  }
  if (hop_mix.empty()) throw SpecError("hop_mix must not be empty");
}

WorldSpec load_world_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open world spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
  WorldSpec spec;
  spec.entity_count = j.value("entities", spec.entity_count);
  spec.instance_count = j.value("instances", spec.instance_count);
  spec.edit_rate = j.value("edit_rate", spec.edit_rate);
  spec.min_edits_per_instance = j.value("min_edits", spec.min_edits_per_instance);
  spec.train_edit_count = j.value("train_edits", spec.train_edit_count);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("hops")) {
    spec.hop_mix.clear();
    for (const auto& [key, weight] : j.at("hops").items()) {
      spec.hop_mix[std::stoul(key)] = weight.get<double>();
    }
  }
  if (j.contains("classes")) spec.classes = j.at("classes").get<std::vector<std::string>>();
  if (j.contains("relations")) {
    RelationVocabulary vocab;
    for (const auto& [relation, rec] : j.at("relations").items()) {
      RelationPhrasing phr;
      phr.statement = rec.at("statement").get<std::string>();
      phr.subquestion = rec.at("subquestion").get<std::string>();
      phr.paraphrases = rec.value("paraphrases", std::vector<std::string>{});
      phr.hop_phrase = rec.at("hop_phrase").get<std::string>();
      vocab.add(relation, std::move(phr));
    }
    spec.relations = std::move(vocab);
  }
  spec.validate();
  return spec;
}

SyntheticWorld generate_world(const WorldSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  SyntheticWorld world;
  world.relations = spec.relations ? *spec.relations : default_relation_vocabulary();
  std::vector<std::string> relation_ids;
  for (const auto& [relation, phr] : world.relations.relations()) {
    (void)phr;
    relation_ids.push_back(relation);
  }

  // Entities with membership facts.
  NameGenerator names(rng);
  std::vector<std::string> entities;
  entities.reserve(spec.entity_count);
  const std::vector<std::string>& classes =
      spec.classes.empty() ? default_classes() : spec.classes;
  for (size_t i = 0; i < spec.entity_count; ++i) {
    std::string label = names.fresh();
    std::vector<Membership> ms;
    ms.push_back({"instance of", classes[rng.below(classes.size())]});
    if (rng.below(10) < 3) {
      ms.push_back({"subclass of", classes[rng.below(classes.size())]});
    }
    world.kb.add_memberships(label, std::move(ms));
    entities.push_back(std::move(label));
  }

  // Total KB: every (entity, relation) resolves to some other entity.
  std::map<SrKey, std::string> kb_object;  // norm key -> display label
  for (const std::string& subject : entities) {
    for (const std::string& relation : relation_ids) {
      std::string object;
      do {
        object = entities[rng.below(entities.size())];
      } while (normalize_label(object) == normalize_label(subject));
      world.kb.add_fact(Fact::of(subject, relation, object));
      kb_object[sr_key(subject, relation)] = object;
    }
  }

  std::map<size_t, size_t> per_hop = apportion(spec.hop_mix, spec.instance_count);
  std::vector<size_t> hop_sequence;
  for (const auto& [hops, count] : per_hop) {
    for (size_t i = 0; i < count; ++i) hop_sequence.push_back(hops);
  }

  // Keys any instance resolves through the KB on its post-edit walk, and
  // keys claimed by edits. Keeping the two sets disjoint across instances
  // makes batch injection exact.
  std::set<SrKey> kb_dependent_keys;
  std::set<SrKey> edited_keys;
  std::set<std::string> question_texts;

  for (size_t inst_no = 0; inst_no < hop_sequence.size(); ++inst_no) {
    size_t n = hop_sequence[inst_no];
    bool built = false;
    for (int attempt = 0; attempt < kMaxRetriesPerInstance && !built; ++attempt) {
      std::string s1 = entities[rng.below(entities.size())];
      std::vector<std::string> relations;
      for (size_t i = 0; i < n; ++i) relations.push_back(relation_ids[rng.below(relation_ids.size())]);

      // Edit plan.
      std::vector<bool> edited(n, false);
      size_t edit_count = 0;
      for (size_t i = 0; i < n; ++i) {
        if (rng.uniform() < spec.edit_rate) {
          edited[i] = true;
          ++edit_count;
        }
      }
      size_t min_edits = std::min(spec.min_edits_per_instance, n);
      while (edit_count < min_edits) {
        size_t i = rng.below(n);
        if (!edited[i]) {
          edited[i] = true;
          ++edit_count;
        }
      }

      // Original chain walk over the total KB.
      std::vector<Hop> hops;
      {
        std::string current = s1;
        for (size_t i = 0; i < n; ++i) {
          const std::string& object = kb_object.at(sr_key(current, relations[i]));
          hops.push_back({relations[i], Entity::of(object)});
          current = object;
        }
      }

      // Post-edit walk; collects the instance's keys and edits.
      std::vector<SrKey> new_kb_keys;
      std::vector<Fact> edits;
      std::vector<std::string> gold;
      bool ok = true;
      std::string current = s1;
      gold.push_back(s1);
      for (size_t i = 0; i < n && ok; ++i) {
        SrKey key = sr_key(current, relations[i]);
        if (edited[i]) {
          if (kb_dependent_keys.count(key) || edited_keys.count(key)) {
            ok = false;
            break;
          }
          const std::string& kb_next = kb_object.at(key);
          std::string target;
          int guard = 0;
          do {
            target = entities[rng.below(entities.size())];
            if (++guard > 1000) {
              ok = false;
              break;
            }
          } while (normalize_label(target) == normalize_label(current) ||
                   normalize_label(target) == normalize_label(kb_next));
          if (!ok) break;
          edits.push_back(Fact::of(current, relations[i], target));
          current = target;
        } else {
          if (edited_keys.count(key)) {
            ok = false;
            break;
          }
          new_kb_keys.push_back(key);
          current = kb_object.at(key);
        }
        gold.push_back(current);
      }
      if (!ok) continue;

      // Questions must be globally unique so the mock's index is exact.
      std::string nested = nest_hop_phrase(world.relations, relations, s1);
      std::vector<std::string> questions = question_paraphrases(nested);
      bool dup = false;
      for (const std::string& q : questions) dup = dup || question_texts.count(q) > 0;
      if (dup) continue;

      for (const SrKey& key : new_kb_keys) kb_dependent_keys.insert(key);
      for (const Fact& e : edits) edited_keys.insert(sr_key(e));
      for (const std::string& q : questions) question_texts.insert(q);

      MultiHopInstance inst;
      char case_id[32];
      std::snprintf(case_id, sizeof(case_id), "syn-%05zu", inst_no + 1);
      inst.case_id = case_id;
      inst.questions = std::move(questions);
      inst.start_subject = Entity::of(s1);
      inst.hops = std::move(hops);
      inst.edits = std::move(edits);
      inst.answer = inst.hops.back().orig_object.label;
      inst.new_answer = gold.back();
      inst.gold_path = std::move(gold);
      world.instances.push_back(std::move(inst));
      built = true;
    }
    if (!built) {
      throw SpecError("could not place instance " + std::to_string(inst_no + 1) +
                      " without key conflicts; increase entity_count");
    }
  }

  // Disjoint edit pool for detector training.
  std::set<SrKey> train_keys;
  for (size_t t = 0; t < spec.train_edit_count; ++t) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRetriesPerInstance && !placed; ++attempt) {
      std::string subject = entities[rng.below(entities.size())];
      const std::string& relation = relation_ids[rng.below(relation_ids.size())];
      SrKey key = sr_key(subject, relation);
      if (kb_dependent_keys.count(key) || edited_keys.count(key) || train_keys.count(key)) {
        continue;
      }
      std::string object;
      int guard = 0;
      bool ok = true;
      do {
        object = entities[rng.below(entities.size())];
        if (++guard > 1000) {
          ok = false;
          break;
        }
      } while (normalize_label(object) == normalize_label(subject) ||
               normalize_label(object) == normalize_label(kb_object.at(key)));
      if (!ok) continue;
      train_keys.insert(key);
      world.train_edits.push_back(Fact::of(subject, relation, object));
      placed = true;
    }
    if (!placed) {
      throw SpecError("could not place train edit " + std::to_string(t + 1) +
                      "; increase entity_count");
    }
  }

  return world;
}

}  // namespace memqa
