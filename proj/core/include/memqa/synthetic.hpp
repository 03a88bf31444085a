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

#ifndef MEMQA_SYNTHETIC_HPP_
#define MEMQA_SYNTHETIC_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memqa/knowledge.hpp"
#include "memqa/world.hpp"

namespace memqa {

// Parameters of a generated world. The base KB is total over
// (entity, relation), so every cascade resolves and the mock reasoner
// always has an answer.
struct WorldSpec {
  size_t entity_count = 300;
  size_t instance_count = 100;
  std::map<size_t, double> hop_mix = {{2, 1.0}, {3, 1.0}, {4, 1.0}};  // weights
  double edit_rate = 0.4;  // per-hop edit probability
  size_t min_edits_per_instance = 1;
  size_t train_edit_count = 300;  // disjoint pool for detector training
  uint64_t seed = 42;
  std::optional<RelationVocabulary> relations;  // built-in vocabulary when absent
  std::vector<std::string> classes;             // membership classes; defaults when empty

  void validate() const;
};

WorldSpec load_world_spec(const std::string& path);

struct SyntheticWorld {
  RelationVocabulary relations;
  BaseKB kb;
  std::vector<MultiHopInstance> instances;
  std::vector<Fact> train_edits;
};

// Deterministic for a fixed spec. Instances never interfere: no edit key
// of one instance appears on another instance's post-edit walk, so
// per-instance answers stay valid when a whole batch is injected at
// once. Train edits avoid every instance key. Throws SpecError when the
// entity pool is too small to keep instances disjoint.
SyntheticWorld generate_world(const WorldSpec& spec);

}  // namespace memqa

#endif  // MEMQA_SYNTHETIC_HPP_
