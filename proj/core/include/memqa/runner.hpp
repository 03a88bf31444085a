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

#ifndef MEMQA_RUNNER_HPP_
#define MEMQA_RUNNER_HPP_

#include <map>
#include <string>
#include <vector>

#include "memqa/evaluation.hpp"
#include "memqa/gazetteer.hpp"
#include "memqa/llm.hpp"
#include "memqa/orchestrator.hpp"
#include "memqa/retrieval.hpp"

namespace memqa {

struct RunOptions {
  SessionConfig session;
  MatchOptions match;
  size_t batch_size = 0;  // 0 injects every edit at once
  uint64_t seed = 1;
  int parallelism = 1;  // provider must be thread-safe when > 1
  bool collect_transcripts = false;
  std::map<std::string, std::string> config_echo;
};

struct RunOutput {
  std::vector<InstanceResult> results;
  Report report;
  std::vector<std::string> transcripts_json;  // instance-major, 3 per instance
};

// Builds stratified edit batches, injects each batch into a fresh memory,
// runs every paraphrase through the orchestrator, recomputes gold paths
// under the batch (falling back to precomputed paths when the KB cannot
// resolve), and scores. Per-session RNG seeds derive from (seed, case id,
// paraphrase) so scheduling cannot change results.
RunOutput run_instances(const std::vector<MultiHopInstance>& instances,
                        const TemplateSet& templates, const BaseKB& kb,
                        const Gazetteer* gazetteer, const EditRetriever& retriever,
                        CompletionProvider& provider, const PromptPack& pack,
                        const RunOptions& options);

}  // namespace memqa

#endif  // MEMQA_RUNNER_HPP_
