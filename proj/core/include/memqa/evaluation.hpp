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

#ifndef MEMQA_EVALUATION_HPP_
#define MEMQA_EVALUATION_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memqa/knowledge.hpp"
#include "memqa/orchestrator.hpp"

namespace memqa {

// Dataset files -------------------------------------------------------------

// Canonical record fields: case_id, questions (exactly 3), start_subject,
// hops [{relation, orig_object}], edits [{subject, relation, new_object}],
// answer, new_answer, optional gold_path and answer_aliases. A mapping
// file renames foreign fields onto these.
struct FieldMapping {
  std::map<std::string, std::string> scalar;            // canonical -> foreign name
  std::map<std::string, std::string> hops;              // path/relation/orig_object
  std::map<std::string, std::string> edits;             // path/subject/relation/new_object
};

FieldMapping load_mapping(const std::string& path);

std::vector<MultiHopInstance> load_dataset(const std::string& path,
                                           const std::optional<FieldMapping>& mapping = {});
void save_dataset(const std::vector<MultiHopInstance>& instances, const std::string& path);

// Edit batches --------------------------------------------------------------

struct EditBatch {
  size_t id = 0;
  std::vector<size_t> instance_indices;          // into the dataset order
  std::vector<Fact> edits;                       // union of member edits, in order
  std::map<size_t, size_t> stratum_counts;       // hop count -> members
};

// Partitions the instances into batches of `batch_size` (the final batch
// may be smaller). Instances are stratified by hop count; every batch
// draws from the strata proportionally via largest-remainder rounding on
// the remaining pool, and within-stratum order is shuffled by the seed.
std::vector<EditBatch> stratified_batches(const std::vector<MultiHopInstance>& instances,
                                          size_t batch_size, uint64_t seed);

// Results and metrics --------------------------------------------------------

struct ParaphraseResult {
  std::string final_answer;
  std::vector<std::string> deduced_path;  // normalized labels
  Termination termination = Termination::kMalformed;
  std::string provider_error;  // non-empty when the session died on a provider failure
  // Retrieval diagnostics accumulated over this session's hops.
  size_t retrieve_calls = 0;
  size_t pre_candidates_total = 0;
  size_t dis_predictions_total = 0;
  size_t memory_hits = 0;
};

struct InstanceResult {
  std::string case_id;
  size_t hop_count = 0;
  std::string new_answer;
  std::vector<std::string> answer_aliases;
  std::optional<std::vector<std::string>> gold_path;            // labels
  std::vector<std::vector<std::string>> gold_path_aliases;      // per position, may be empty
  std::vector<ParaphraseResult> paraphrases;
  bool solved_acc = false;
  bool solved_hop = false;
};

struct MatchOptions {
  // Exact normalized equality by default; containment accepts answers
  // that embed the expected string.
  bool containment = false;
};

// An instance counts when any of its three paraphrases matches the
// post-edit answer or an alias.
double multi_hop_acc(std::vector<InstanceResult>& results, const MatchOptions& options = {});

// A paraphrase counts only when its deduced path equals the gold path
// element-wise; any-of-three at the instance level. Throws
// MissingGoldPathError when a gold path is absent.
double hop_acc(std::vector<InstanceResult>& results, const MatchOptions& options = {});

bool answers_match(const std::string& answer, const std::string& expected,
                   const std::vector<std::string>& aliases, const MatchOptions& options);

struct HopBreakdown {
  size_t instances = 0;
  size_t solved_acc = 0;
  size_t solved_hop = 0;
};

struct Report {
  double acc = 0.0;
  double hop_acc = 0.0;
  size_t instances = 0;
  size_t solved_acc = 0;
  size_t solved_hop = 0;
  std::map<size_t, HopBreakdown> by_hops;
  // Retrieval diagnostics over every retrieve call of the run.
  size_t retrieve_calls = 0;
  double mean_pre_candidates = 0.0;
  double mean_dis_predictions = 0.0;
  std::map<std::string, std::string> config_echo;
};

Report build_report(std::vector<InstanceResult>& results, const MatchOptions& options = {});

enum class ReportFormat { kTable, kJson, kCsv };
ReportFormat report_format_from_string(const std::string& s);

std::string emit_report(const Report& report, ReportFormat format);
Report parse_report_json(const std::string& text);
Report parse_report_csv(const std::string& text);

// Results file: JSON array of InstanceResult.
void save_results(const std::vector<InstanceResult>& results, const std::string& path);
std::vector<InstanceResult> load_results(const std::string& path);

}  // namespace memqa

#endif  // MEMQA_EVALUATION_HPP_
