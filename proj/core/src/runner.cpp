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

#include "memqa/runner.hpp"

#include <atomic>
#include <thread>

#include "memqa/text.hpp"

namespace memqa {

namespace {

struct Task {
  size_t instance_index;
  size_t paraphrase_index;
  const EditMemory* memory;
};

}  // namespace

RunOutput run_instances(const std::vector<MultiHopInstance>& instances,
                        const TemplateSet& templates, const BaseKB& kb,
                        const Gazetteer* gazetteer, const EditRetriever& retriever,
                        CompletionProvider& provider, const PromptPack& pack,
                        const RunOptions& options) {
  size_t batch_size = options.batch_size == 0 ? std::max<size_t>(1, instances.size())
                                              : options.batch_size;
  std::vector<EditBatch> batches = stratified_batches(instances, batch_size, options.seed);

  // One memory per batch, injected all at once.
  std::vector<EditMemory> memories;
  memories.reserve(batches.size());
  for (const EditBatch& batch : batches) {
    std::vector<Edit> edits;
    edits.reserve(batch.edits.size());
    for (const Fact& f : batch.edits) edits.push_back(Edit::make(f, templates));
    memories.push_back(build_memory(edits));
  }

  RunOutput out;
  out.results.resize(instances.size());
  std::vector<Task> tasks;
  for (size_t b = 0; b < batches.size(); ++b) {
    for (size_t idx : batches[b].instance_indices) {
      const MultiHopInstance& inst = instances[idx];
      InstanceResult& result = out.results[idx];
      result.case_id = inst.case_id;
      result.hop_count = inst.hop_count();
      result.new_answer = inst.new_answer;
      result.answer_aliases = inst.answer_aliases;
      result.paraphrases.resize(inst.questions.size());

      // Gold path under this batch; precomputed paths cover KB-less runs.
      try {
        Path gold = gold_path(inst, memories[b], kb);
        std::vector<std::string> labels;
        labels.reserve(gold.size());
        for (const Entity& e : gold) labels.push_back(e.label);
        result.gold_path = std::move(labels);
      } catch (const UnresolvableHopError&) {
        result.gold_path = inst.gold_path;
      }
      if (result.gold_path) {
        result.gold_path_aliases.clear();
        for (const std::string& label : *result.gold_path) {
          const std::vector<std::string>* aliases = kb.aliases(label);
          result.gold_path_aliases.push_back(aliases ? *aliases : std::vector<std::string>{});
        }
      }

      for (size_t p = 0; p < inst.questions.size(); ++p) {
        tasks.push_back({idx, p, &memories[b]});
      }
    }
  }

  std::vector<std::string> transcripts(options.collect_transcripts ? tasks.size() : 0);
  std::map<std::pair<size_t, size_t>, size_t> transcript_slot;
  for (size_t t = 0; t < tasks.size(); ++t) {
    transcript_slot[{tasks[t].instance_index, tasks[t].paraphrase_index}] = t;
  }

  auto run_task = [&](const Task& task) {
    const MultiHopInstance& inst = instances[task.instance_index];
    const std::string& question = inst.questions[task.paraphrase_index];
    Rng session_rng(
        derive_seed(options.seed, hash64(0, inst.case_id), task.paraphrase_index));
    ParaphraseResult& pr =
        out.results[task.instance_index].paraphrases[task.paraphrase_index];
    Transcript transcript;
    try {
      transcript = answer_question(question, *task.memory, retriever, gazetteer, provider, pack,
                                   options.session, session_rng);
    } catch (const Error& e) {
      // Provider failures sink this paraphrase but not the run.
      pr.termination = Termination::kMalformed;
      pr.provider_error = e.what();
      return;
    }
    pr.final_answer = transcript.final_answer;
    pr.termination = transcript.termination;
    if (transcript.termination != Termination::kMalformed) {
      pr.deduced_path = extract_path(transcript, inst.start_subject);
    }
    for (const HopRecord& hop : transcript.hops) {
      ++pr.retrieve_calls;
      pr.pre_candidates_total += hop.retrieval.pre_candidates;
      pr.dis_predictions_total += hop.retrieval.dis_predictions;
      pr.memory_hits += hop.source == AnswerSource::kMemoryInjected ? 1 : 0;
    }
    if (options.collect_transcripts) {
      transcripts[transcript_slot.at({task.instance_index, task.paraphrase_index})] =
          transcript_to_json(transcript);
    }
  };

  int workers = std::max(1, options.parallelism);
  if (workers == 1 || tasks.size() <= 1) {
    for (const Task& task : tasks) run_task(task);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    size_t thread_count = std::min<size_t>(static_cast<size_t>(workers), tasks.size());
    for (size_t w = 0; w < thread_count; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          run_task(tasks[i]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  out.report = build_report(out.results, options.match);
  out.report.config_echo = options.config_echo;
  out.transcripts_json = std::move(transcripts);
  return out;
}

}  // namespace memqa
