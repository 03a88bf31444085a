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

#include "memqa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "memqa/rng.hpp"
#include "memqa/text.hpp"

namespace memqa {

std::vector<EditBatch> stratified_batches(const std::vector<MultiHopInstance>& instances,
                                          size_t batch_size, uint64_t seed) {
  if (batch_size < 1) throw Error("batch size must be >= 1");

  // Shuffled per-stratum queues, keyed by hop count.
  std::map<size_t, std::vector<size_t>> strata;
  for (size_t i = 0; i < instances.size(); ++i) {
    strata[instances[i].hop_count()].push_back(i);
  }
  for (auto& [hops, queue] : strata) {
    Rng rng(derive_seed(seed, hops));
    rng.shuffle(queue);
  }
  std::map<size_t, size_t> cursor;
  for (const auto& [hops, queue] : strata) {
    (void)queue;
    cursor[hops] = 0;
  }

  std::vector<EditBatch> batches;
  size_t remaining_total = instances.size();
  while (remaining_total > 0) {
    size_t take = std::min(batch_size, remaining_total);
    EditBatch batch;
    batch.id = batches.size();

    // Largest-remainder quota over the remaining pool of each stratum.
    struct Quota {
      size_t hops;
      size_t count;
      double remainder;
      size_t remaining;
    };
    std::vector<Quota> quotas;
    size_t assigned = 0;
    for (const auto& [hops, queue] : strata) {
      size_t remaining = queue.size() - cursor[hops];
      if (remaining == 0) continue;
      double exact = static_cast<double>(remaining) / static_cast<double>(remaining_total) *
                     static_cast<double>(take);
      size_t floor_count = std::min(remaining, static_cast<size_t>(std::floor(exact)));
      quotas.push_back({hops, floor_count, exact - std::floor(exact), remaining});
      assigned += floor_count;
    }
    // Hand out the leftover seats by remainder, then by remaining size.
    std::vector<size_t> order(quotas.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (quotas[a].remainder != quotas[b].remainder) {
        return quotas[a].remainder > quotas[b].remainder;
      }
      return quotas[a].remaining > quotas[b].remaining;
    });
    size_t cursor_in_order = 0;
    while (assigned < take) {
      Quota& q = quotas[order[cursor_in_order % order.size()]];
      ++cursor_in_order;
      if (q.count < q.remaining) {
        ++q.count;
        ++assigned;
      }
    }

    for (const Quota& q : quotas) {
      auto& queue = strata[q.hops];
      for (size_t i = 0; i < q.count; ++i) {
        batch.instance_indices.push_back(queue[cursor[q.hops]++]);
      }
      if (q.count > 0) batch.stratum_counts[q.hops] = q.count;
    }

    // Union of the members' edits, first occurrence wins.
    std::map<std::pair<SrKey, std::string>, bool> seen;
    for (size_t idx : batch.instance_indices) {
      for (const Fact& f : instances[idx].edits) {
        auto key = std::make_pair(sr_key(f), f.object.norm);
        if (seen.emplace(key, true).second) batch.edits.push_back(f);
      }
    }

    remaining_total -= take;
    batches.push_back(std::move(batch));
  }
  return batches;
}

bool answers_match(const std::string& answer, const std::string& expected,
                   const std::vector<std::string>& aliases, const MatchOptions& options) {
  std::string got = normalize_label(answer);
  if (got.empty()) return false;
  auto matches = [&](const std::string& target) {
    std::string want = normalize_label(target);
    if (want.empty()) return false;
    if (options.containment) return got.find(want) != std::string::npos;
    return got == want;
  };
  if (matches(expected)) return true;
  for (const std::string& alias : aliases) {
    if (matches(alias)) return true;
  }
  return false;
}

double multi_hop_acc(std::vector<InstanceResult>& results, const MatchOptions& options) {
  if (results.empty()) return 0.0;
  size_t solved = 0;
  for (InstanceResult& r : results) {
    r.solved_acc = false;
    for (const ParaphraseResult& p : r.paraphrases) {
      if (p.termination == Termination::kMalformed) continue;
      if (answers_match(p.final_answer, r.new_answer, r.answer_aliases, options)) {
        r.solved_acc = true;
        break;
      }
    }
    solved += r.solved_acc ? 1 : 0;
  }
  return static_cast<double>(solved) / static_cast<double>(results.size());
}

namespace {

bool path_matches(const std::vector<std::string>& deduced, const std::vector<std::string>& gold,
                  const std::vector<std::vector<std::string>>& gold_aliases) {
  if (deduced.size() != gold.size()) return false;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (deduced[i] == normalize_label(gold[i])) continue;
    bool alias_hit = false;
    if (i < gold_aliases.size()) {
      for (const std::string& alias : gold_aliases[i]) {
        if (deduced[i] == normalize_label(alias)) {
          alias_hit = true;
          break;
        }
      }
    }
    if (!alias_hit) return false;
  }
  return true;
}

}  // namespace

double hop_acc(std::vector<InstanceResult>& results, const MatchOptions& options) {
  (void)options;  // paths compare by normalized labels and per-entity aliases
  if (results.empty()) return 0.0;
  size_t solved = 0;
  for (InstanceResult& r : results) {
    if (!r.gold_path) throw MissingGoldPathError(r.case_id);
    r.solved_hop = false;
    for (const ParaphraseResult& p : r.paraphrases) {
      if (p.termination == Termination::kMalformed) continue;
      if (path_matches(p.deduced_path, *r.gold_path, r.gold_path_aliases)) {
        r.solved_hop = true;
        break;
      }
    }
    solved += r.solved_hop ? 1 : 0;
  }
  return static_cast<double>(solved) / static_cast<double>(results.size());
}

Report build_report(std::vector<InstanceResult>& results, const MatchOptions& options) {
  Report report;
  report.instances = results.size();
  report.acc = multi_hop_acc(results, options);
  report.hop_acc = hop_acc(results, options);
  for (const InstanceResult& r : results) {
    report.solved_acc += r.solved_acc ? 1 : 0;
    report.solved_hop += r.solved_hop ? 1 : 0;
    HopBreakdown& b = report.by_hops[r.hop_count];
    ++b.instances;
    b.solved_acc += r.solved_acc ? 1 : 0;
    b.solved_hop += r.solved_hop ? 1 : 0;
    for (const ParaphraseResult& p : r.paraphrases) {
      report.retrieve_calls += p.retrieve_calls;
      report.mean_pre_candidates += static_cast<double>(p.pre_candidates_total);
      report.mean_dis_predictions += static_cast<double>(p.dis_predictions_total);
    }
  }
  if (report.retrieve_calls > 0) {
    report.mean_pre_candidates /= static_cast<double>(report.retrieve_calls);
    report.mean_dis_predictions /= static_cast<double>(report.retrieve_calls);
  }
  return report;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "table") return ReportFormat::kTable;
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  throw ConfigError("unknown report format: " + s + " (expected table, json, or csv)");
}

namespace {

nlohmann::json report_to_json(const Report& r) {
  nlohmann::json by_hops = nlohmann::json::object();
  for (const auto& [hops, b] : r.by_hops) {
    by_hops[std::to_string(hops)] = {
        {"instances", b.instances},
        {"solved_acc", b.solved_acc},
        {"solved_hop", b.solved_hop},
        {"acc", b.instances == 0
                    ? 0.0
                    : static_cast<double>(b.solved_acc) / static_cast<double>(b.instances)},
        {"hop_acc", b.instances == 0
                        ? 0.0
                        : static_cast<double>(b.solved_hop) / static_cast<double>(b.instances)},
    };
  }
  return {
      {"acc", r.acc},
      {"hop_acc", r.hop_acc},
      {"instances", r.instances},
      {"solved_acc", r.solved_acc},
      {"solved_hop", r.solved_hop},
      {"by_hops", by_hops},
      {"retrieval",
       {{"calls", r.retrieve_calls},
        {"mean_pre_candidates", r.mean_pre_candidates},
        {"mean_dis_predictions", r.mean_dis_predictions}}},
      {"config", r.config_echo},
  };
}

std::string number_str(double v) { return nlohmann::json(v).dump(); }

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    return report_to_json(r).dump(2) + "\n";
  }
  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "field,scope,value\n";
    out << "acc,all," << number_str(r.acc) << "\n";
    out << "hop_acc,all," << number_str(r.hop_acc) << "\n";
    out << "instances,all," << r.instances << "\n";
    out << "solved_acc,all," << r.solved_acc << "\n";
    out << "solved_hop,all," << r.solved_hop << "\n";
    out << "retrieve_calls,all," << r.retrieve_calls << "\n";
    out << "mean_pre_candidates,all," << number_str(r.mean_pre_candidates) << "\n";
    out << "mean_dis_predictions,all," << number_str(r.mean_dis_predictions) << "\n";
    for (const auto& [hops, b] : r.by_hops) {
      out << "instances," << hops << "," << b.instances << "\n";
      out << "solved_acc," << hops << "," << b.solved_acc << "\n";
      out << "solved_hop," << hops << "," << b.solved_hop << "\n";
    }
    for (const auto& [key, value] : r.config_echo) {
      out << "config," << key << "," << value << "\n";
    }
    return out.str();
  }

  std::ostringstream out;
  out << "instances: " << r.instances << "\n";
  out << "Acc:       " << number_str(r.acc) << "  (" << r.solved_acc << "/" << r.instances
      << ")\n";
  out << "Hop-Acc:   " << number_str(r.hop_acc) << "  (" << r.solved_hop << "/" << r.instances
      << ")\n";
  out << "by hops:\n";
  for (const auto& [hops, b] : r.by_hops) {
    double acc = b.instances == 0
                     ? 0.0
                     : static_cast<double>(b.solved_acc) / static_cast<double>(b.instances);
    double hacc = b.instances == 0
                      ? 0.0
                      : static_cast<double>(b.solved_hop) / static_cast<double>(b.instances);
    out << "  " << hops << "-hop: n=" << b.instances << " Acc=" << number_str(acc)
        << " Hop-Acc=" << number_str(hacc) << "\n";
  }
  out << "retrieval: calls=" << r.retrieve_calls
      << " mean_pre_candidates=" << number_str(r.mean_pre_candidates)
      << " mean_dis_predictions=" << number_str(r.mean_dis_predictions) << "\n";
  if (!r.config_echo.empty()) {
    out << "config:\n";
    for (const auto& [key, value] : r.config_echo) {
      out << "  " << key << ": " << value << "\n";
    }
  }
  return out.str();
}

Report parse_report_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Report r;
  r.acc = j.at("acc").get<double>();
  r.hop_acc = j.at("hop_acc").get<double>();
  r.instances = j.at("instances").get<size_t>();
  r.solved_acc = j.at("solved_acc").get<size_t>();
  r.solved_hop = j.at("solved_hop").get<size_t>();
  for (const auto& [key, value] : j.at("by_hops").items()) {
    HopBreakdown b;
    b.instances = value.at("instances").get<size_t>();
    b.solved_acc = value.at("solved_acc").get<size_t>();
    b.solved_hop = value.at("solved_hop").get<size_t>();
    r.by_hops[std::stoul(key)] = b;
  }
  r.retrieve_calls = j.at("retrieval").at("calls").get<size_t>();
  r.mean_pre_candidates = j.at("retrieval").at("mean_pre_candidates").get<double>();
  r.mean_dis_predictions = j.at("retrieval").at("mean_dis_predictions").get<double>();
  if (j.contains("config")) {
    for (const auto& [key, value] : j.at("config").items()) {
      r.config_echo[key] = value.get<std::string>();
    }
  }
  return r;
}

Report parse_report_csv(const std::string& text) {
  Report r;
  bool first = true;
  for (const std::string& line : split_lines(text)) {
    if (first) {
      first = false;
      continue;
    }
    if (trim(line).empty()) continue;
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error("invalid report csv line: " + line);
    }
    std::string field = line.substr(0, c1);
    std::string scope = line.substr(c1 + 1, c2 - c1 - 1);
    std::string value = line.substr(c2 + 1);
    if (field == "config") {
      r.config_echo[scope] = value;
      continue;
    }
    double v = nlohmann::json::parse(value).get<double>();
    if (scope == "all") {
      if (field == "acc") r.acc = v;
      else if (field == "hop_acc") r.hop_acc = v;
      else if (field == "instances") r.instances = static_cast<size_t>(v);
      else if (field == "solved_acc") r.solved_acc = static_cast<size_t>(v);
      else if (field == "solved_hop") r.solved_hop = static_cast<size_t>(v);
      else if (field == "retrieve_calls") r.retrieve_calls = static_cast<size_t>(v);
      else if (field == "mean_pre_candidates") r.mean_pre_candidates = v;
      else if (field == "mean_dis_predictions") r.mean_dis_predictions = v;
    } else {
      HopBreakdown& b = r.by_hops[std::stoul(scope)];
      if (field == "instances") b.instances = static_cast<size_t>(v);
      else if (field == "solved_acc") b.solved_acc = static_cast<size_t>(v);
      else if (field == "solved_hop") b.solved_hop = static_cast<size_t>(v);
    }
  }
  return r;
}

void save_results(const std::vector<InstanceResult>& results, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const InstanceResult& r : results) {
    nlohmann::json paraphrases = nlohmann::json::array();
    for (const ParaphraseResult& p : r.paraphrases) {
      nlohmann::json pj = {{"final_answer", p.final_answer},
                           {"deduced_path", p.deduced_path},
                           {"termination", to_string(p.termination)},
                           {"retrieve_calls", p.retrieve_calls},
                           {"pre_candidates_total", p.pre_candidates_total},
                           {"dis_predictions_total", p.dis_predictions_total},
                           {"memory_hits", p.memory_hits}};
      if (!p.provider_error.empty()) pj["provider_error"] = p.provider_error;
      paraphrases.push_back(pj);
    }
    nlohmann::json rec = {
        {"case_id", r.case_id},
        {"hop_count", r.hop_count},
        {"new_answer", r.new_answer},
        {"answer_aliases", r.answer_aliases},
        {"paraphrases", paraphrases},
        {"solved_acc", r.solved_acc},
        {"solved_hop", r.solved_hop},
    };
    if (r.gold_path) rec["gold_path"] = *r.gold_path;
    if (!r.gold_path_aliases.empty()) rec["gold_path_aliases"] = r.gold_path_aliases;
    j.push_back(rec);
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write results: " + path);
  out << j.dump(2) << "\n";
}

std::vector<InstanceResult> load_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open results: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
  std::vector<InstanceResult> out;
  for (const auto& rec : j) {
    InstanceResult r;
    r.case_id = rec.at("case_id").get<std::string>();
    r.hop_count = rec.at("hop_count").get<size_t>();
    r.new_answer = rec.at("new_answer").get<std::string>();
    r.answer_aliases = rec.value("answer_aliases", std::vector<std::string>{});
    if (rec.contains("gold_path")) {
      r.gold_path = rec.at("gold_path").get<std::vector<std::string>>();
    }
    if (rec.contains("gold_path_aliases")) {
      r.gold_path_aliases = rec.at("gold_path_aliases").get<std::vector<std::vector<std::string>>>();
    }
    for (const auto& p : rec.at("paraphrases")) {
      ParaphraseResult pr;
      pr.final_answer = p.at("final_answer").get<std::string>();
      pr.deduced_path = p.at("deduced_path").get<std::vector<std::string>>();
      std::string term = p.at("termination").get<std::string>();
      pr.termination = term == "final-answer" ? Termination::kFinalAnswer
                       : term == "hop-budget" ? Termination::kHopBudget
                                              : Termination::kMalformed;
      pr.retrieve_calls = p.value("retrieve_calls", size_t{0});
      pr.pre_candidates_total = p.value("pre_candidates_total", size_t{0});
      pr.dis_predictions_total = p.value("dis_predictions_total", size_t{0});
      pr.memory_hits = p.value("memory_hits", size_t{0});
      pr.provider_error = p.value("provider_error", std::string{});
      r.paraphrases.push_back(std::move(pr));
    }
    r.solved_acc = rec.value("solved_acc", false);
    r.solved_hop = rec.value("solved_hop", false);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace memqa
