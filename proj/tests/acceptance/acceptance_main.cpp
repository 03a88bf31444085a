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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "memqa/detector.hpp"
#include "memqa/evaluation.hpp"
#include "memqa/gazetteer.hpp"
#include "memqa/llm.hpp"
#include "memqa/orchestrator.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/rng.hpp"
#include "memqa/runner.hpp"
#include "memqa/synthetic.hpp"
#include "memqa/text.hpp"
#include "memqa/trainset.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace memqa;
using memqa::testing::ScorerRetriever;

namespace {

#ifndef MEMQA_CLI_PATH
#define MEMQA_CLI_PATH "memqa"
#endif

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(number, name, pass, detail);
  } catch (const std::exception& e) {
    report(number, name, false, std::string("exception: ") + e.what());
  }
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<TrainPair> random_text_pairs(Rng& rng, size_t count) {
  static const char* vocab[] = {"mara", "keld", "von",  "tessa", "rilo", "dun",
                                "pasha", "grim", "oryx", "belt",  "cost", "hive"};
  std::vector<TrainPair> pairs;
  for (size_t i = 0; i < count; ++i) {
    std::string t, q;
    size_t tn = 2 + rng.below(4);
    size_t qn = 2 + rng.below(5);
    for (size_t k = 0; k < tn; ++k) t += std::string(vocab[rng.below(12)]) + " ";
    for (size_t k = 0; k < qn; ++k) q += std::string(vocab[rng.below(12)]) + " ";
    pairs.push_back({t, q, -1});
  }
  regroup_by_statement(pairs);
  return pairs;
}

// 1. Analytic gradients of the training loss match central differences.
std::pair<bool, std::string> criterion_gradients() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(0xACCE97);
  double worst = 0.0;
  int points = 0;

  EncoderConfig dual_cfg;
  dual_cfg.buckets = 256;
  dual_cfg.dim = 8;
  EncoderConfig joint_cfg;
  joint_cfg.buckets = 256;

  for (int point = 0; point < 25; ++point) {
    DualEncoderModel model(dual_cfg, rng.next());
    auto pairs = random_text_pairs(rng, 5);
    TrainPair pos = pairs[0];
    std::vector<std::string> negs = {pairs[1].question, pairs[2].question, pairs[3].question};
    LossGrad lg = bce_ns_loss(model, pos, negs);
    size_t probed = 0;
    for (size_t i = 0; i < lg.grad.size() && probed < 10; ++i) {
      if (lg.grad[i] == 0.0) continue;
      double fd = memqa::testing::central_difference(
          &model.weights()[i], 1e-3, [&]() { return bce_ns_loss(model, pos, negs).loss; });
      double scale = std::max({std::abs(fd), std::abs(lg.grad[i]), 1e-8});
      worst = std::max(worst, std::abs(fd - lg.grad[i]) / scale);
      ++probed;
    }
    if (probed == 0) return {false, "dual point had no touched coordinates"};
    ++points;
  }
  for (int point = 0; point < 25; ++point) {
    JointClassifierModel model(joint_cfg);
    for (float& w : model.weights()) {
      w = static_cast<float>((static_cast<double>(rng.below(2000)) - 1000.0) / 2500.0);
    }
    model.bias() = static_cast<float>((static_cast<double>(rng.below(100)) - 50.0) / 100.0);
    auto pairs = random_text_pairs(rng, 5);
    TrainPair pos = pairs[0];
    std::vector<std::string> negs = {pairs[1].question, pairs[2].question};
    LossGrad lg = bce_ns_loss(model, pos, negs);
    size_t probed = 0;
    for (size_t i = 0; i < lg.grad.size() && probed < 10; ++i) {
      if (lg.grad[i] == 0.0) continue;
      float* param = i < model.weights().size() ? &model.weights()[i] : &model.bias();
      double fd = memqa::testing::central_difference(
          param, 1e-3, [&]() { return bce_ns_loss(model, pos, negs).loss; });
      double scale = std::max({std::abs(fd), std::abs(lg.grad[i]), 1e-8});
      worst = std::max(worst, std::abs(fd - lg.grad[i]) / scale);
      ++probed;
    }
    if (probed == 0) return {false, "joint point had no touched coordinates"};
    ++points;
  }
  double seconds = elapsed_seconds(start);
  std::ostringstream detail;
  detail << points << " points, worst relative error " << worst << ", " << seconds << "s";
  return {worst <= 1e-4 && seconds < 10.0 && points == 50, detail.str()};
}

// 2. SR/BR equal an exhaustive scorer on random validation sets.
std::pair<bool, std::string> criterion_sr_br() {
  Rng rng(0xB10C);
  for (int trial = 0; trial < 200; ++trial) {
    auto val = random_text_pairs(rng, 2 + rng.below(12));
    PairScorer scorer = memqa::testing::hash_scorer(rng.next());
    double sr = success_rate(val, scorer);
    double br = block_rate(val, scorer);
    if (sr != memqa::testing::sr_bruteforce(val, scorer)) {
      return {false, "SR diverged on trial " + std::to_string(trial)};
    }
    if (br != memqa::testing::br_bruteforce(val, scorer)) {
      return {false, "BR diverged on trial " + std::to_string(trial)};
    }
    if (sr < 0.0 || sr > 1.0 || br < 0.0 || br > 1.0) {
      return {false, "metric out of range"};
    }
  }
  return {true, "200 validation sets, exact equality"};
}

// 3. Two-stage retrieval equals the brute-force oracle with all branches hit.
std::pair<bool, std::string> criterion_retrieval() {
  Rng rng(0xA16);
  size_t empty_z = 0, unique_z = 0, disamb = 0, empty_f = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    size_t size = rng.below(51);
    std::vector<Edit> edits;
    for (size_t i = 0; i < size; ++i) {
      Fact f = Fact::of("entity " + std::to_string(trial) + " " + std::to_string(i), "rel",
                        "target " + std::to_string(i));
      edits.push_back(Edit{f, "entity " + std::to_string(trial) + " " + std::to_string(i) +
                                  " maps to target " + std::to_string(i) + "."});
    }
    EditMemory memory = build_memory(edits);
    std::string question = "question number " + std::to_string(rng.below(17));
    // Shifted scorers keep all four outcome branches reachable.
    uint64_t salt_pre = rng.next();
    uint64_t salt_dis = rng.next();
    double shift = (static_cast<double>(rng.below(100)) / 100.0) - 0.5;
    PairScorer pre = [salt_pre, shift](const std::string& t, const std::string& q) {
      return std::min(1.0, std::max(0.0, memqa::testing::hash_scorer(salt_pre)(t, q) + shift));
    };
    PairScorer dis = memqa::testing::hash_scorer(salt_dis);

    RetrievalOutcome got = retrieve(memory, question, pre, dis);
    auto want = memqa::testing::retrieve_bruteforce(memory, question, pre, dis, true);

    if (got.pre_candidates != want.z_size) return {false, "|Z| mismatch"};
    if (got.dis_survivors != want.f_size) return {false, "|F| mismatch"};
    if (got.hit.has_value() != want.hit_pos.has_value()) return {false, "hit mismatch"};
    if (got.hit && got.hit->position != *want.hit_pos) return {false, "position mismatch"};
    if (got.hit) {
      std::string stage =
          got.hit->stage == HitStage::kPreUnique ? "pre-unique" : "disambiguated";
      if (stage != want.stage) return {false, "stage mismatch"};
    }
    size_t expected_predictions = want.z_size >= 2 ? want.z_size : 0;
    if (got.dis_predictions != expected_predictions) return {false, "prediction count mismatch"};

    if (want.z_size == 0) ++empty_z;
    if (want.z_size == 1) ++unique_z;
    if (want.z_size >= 2 && want.f_size > 0) ++disamb;
    if (want.z_size >= 2 && want.f_size == 0) ++empty_f;
  }
  std::ostringstream detail;
  detail << "1000 cases; branches |Z|=0:" << empty_z << " |Z|=1:" << unique_z
         << " disamb:" << disamb << " F=0:" << empty_f;
  return {empty_z > 0 && unique_z > 0 && disamb > 0 && empty_f > 0, detail.str()};
}

// 4. Both detector models train past 0.95 validation SR and BR in budget.
std::pair<bool, std::string> criterion_trainability() {
  auto start = std::chrono::steady_clock::now();

  WorldSpec spec;
  spec.entity_count = 500;
  spec.instance_count = 40;
  spec.train_edit_count = 160;
  spec.seed = 11;
  SyntheticWorld world = generate_world(spec);
  std::vector<Fact> protected_facts;
  for (const MultiHopInstance& inst : world.instances) {
    for (const Fact& f : inst.original_chain()) protected_facts.push_back(f);
    for (const Fact& f : inst.edits) protected_facts.push_back(f);
  }
  std::vector<TrainPair> trainset = build_trainset(world.train_edits, world.relations,
                                                   protected_facts, TrainsetMode::kTemplated,
                                                   nullptr);
  size_t groups = 0;
  {
    std::set<int64_t> ids;
    for (const TrainPair& p : trainset) ids.insert(p.group);
    groups = ids.size();
  }
  if (groups < 100) return {false, "only " + std::to_string(groups) + " edit groups"};

  EncoderConfig pre_cfg;
  pre_cfg.buckets = 8192;
  pre_cfg.dim = 192;
  TrainConfig pre_tc = pre_detector_defaults();
  pre_tc.learning_rate = 0.02;
  pre_tc.weight_decay = 10.0;
  pre_tc.max_epochs = 150;
  pre_tc.patience = 150;
  pre_tc.seed = 1;
  DualEncoderModel pre(pre_cfg, pre_tc.seed * 7 + 13);
  TrainResult pre_result = train(pre, trainset, pre_tc);

  EncoderConfig dis_cfg;
  dis_cfg.buckets = 8192;
  dis_cfg.seed = pre_cfg.seed * 2 + 1;
  TrainConfig dis_tc = disambiguator_defaults();
  dis_tc.learning_rate = 0.05;
  dis_tc.batch_size = 32;
  dis_tc.negatives = 4;
  dis_tc.weight_decay = 0.5;
  dis_tc.max_epochs = 120;
  dis_tc.patience = 120;
  dis_tc.seed = 1;
  JointClassifierModel dis(dis_cfg, /*agreement_prior=*/true);
  TrainResult dis_result = train(dis, trainset, dis_tc);

  double seconds = elapsed_seconds(start);
  std::ostringstream detail;
  detail << groups << " held-out-split groups; pre SR=" << pre_result.best_sr
         << " BR=" << pre_result.best_br << "; dis SR=" << dis_result.best_sr
         << " BR=" << dis_result.best_br << "; " << seconds << "s";
  bool pass = pre_result.best_sr >= 0.95 && pre_result.best_br >= 0.95 &&
              dis_result.best_sr >= 0.95 && dis_result.best_br >= 0.95 && seconds < 300.0;
  return {pass, detail.str()};
}

// 5. Oracle end-to-end run is perfect; no detection exposes unreliable reasoning.
std::pair<bool, std::string> criterion_end_to_end() {
  WorldSpec spec;
  spec.entity_count = 600;
  spec.instance_count = 100;
  spec.train_edit_count = 0;
  spec.seed = 97;
  SyntheticWorld world = generate_world(spec);
  std::map<size_t, size_t> hop_counts;
  for (const MultiHopInstance& inst : world.instances) hop_counts[inst.hop_count()]++;
  if (hop_counts.size() != 3) return {false, "hop mix is not 2/3/4"};

  TemplateSet templates = world.relations.statement_templates();
  Gazetteer gazetteer = Gazetteer::from_kb(world.kb);
  MockProvider provider(world.relations, world.kb,
                        QuestionIndex::from_instances(world.instances));
  PairScorer oracle = oracle_scorer(world.relations);
  ScorerRetriever oracle_retriever(oracle, oracle);

  RunOptions options;
  options.seed = 5;
  RunOutput with_oracle = run_instances(world.instances, templates, world.kb, &gazetteer,
                                        oracle_retriever, provider, PromptPack::standard(),
                                        options);

  NullRetriever none;
  RunOutput without = run_instances(world.instances, templates, world.kb, &gazetteer, none,
                                    provider, PromptPack::standard(), options);

  // The unreliable-reasoning construction: the edit diverts the path but
  // both routes converge on the same final entity.
  BaseKB kb;
  kb.add_fact(Fact::of("Startland", "rel one", "Old Mid"));
  kb.add_fact(Fact::of("Old Mid", "rel two", "Shared End"));
  kb.add_fact(Fact::of("New Mid", "rel two", "Shared End"));
  kb.add_memberships("Startland", {{"instance of", "place"}});

  RelationVocabulary vocab;
  vocab.add("rel one",
            {"SUBJECT routes one to OBJECT.", "What does SUBJECT route one to?",
             {"What does SUBJECT route one to?"}, "the one-route of SUBJECT"});
  vocab.add("rel two",
            {"SUBJECT routes two to OBJECT.", "What does SUBJECT route two to?",
             {"What does SUBJECT route two to?"}, "the two-route of SUBJECT"});

  MultiHopInstance inst;
  inst.case_id = "unreliable-1";
  inst.questions = {"What is the two-route of the one-route of Startland?",
                    "Tell me: what is the two-route of the one-route of Startland?",
                    "Please answer: what is the two-route of the one-route of Startland?"};
  inst.start_subject = Entity::of("Startland");
  inst.hops = {{"rel one", Entity::of("Old Mid")}, {"rel two", Entity::of("Shared End")}};
  inst.edits = {Fact::of("Startland", "rel one", "New Mid")};
  inst.answer = "Shared End";
  inst.new_answer = "Shared End";

  std::vector<MultiHopInstance> fixture = {inst};
  MockProvider fixture_provider(vocab, kb, QuestionIndex::from_instances(fixture));
  Gazetteer fixture_gaz = Gazetteer::from_kb(kb);
  RunOutput unreliable = run_instances(fixture, vocab.statement_templates(), kb, &fixture_gaz,
                                       none, fixture_provider, PromptPack::standard(), options);

  std::ostringstream detail;
  detail << "oracle Acc=" << with_oracle.report.acc << " Hop-Acc=" << with_oracle.report.hop_acc
         << "; none Acc=" << without.report.acc << " Hop-Acc=" << without.report.hop_acc
         << "; fixture Acc=" << unreliable.report.acc
         << " Hop-Acc=" << unreliable.report.hop_acc;
  bool pass = with_oracle.report.acc == 1.0 && with_oracle.report.hop_acc == 1.0 &&
              without.report.hop_acc <= without.report.acc + 1e-12 &&
              unreliable.report.acc == 1.0 && unreliable.report.hop_acc == 0.0;
  return {pass, detail.str()};
}

// 6. The worked-session fixture parses and replays with the injected edit.
std::pair<bool, std::string> criterion_worked_session() {
  PromptPack pack = PromptPack::standard();
  Transcript parsed = parse_transcript(memqa::testing::kWorkedSessionText, pack);
  if (parsed.termination != Termination::kFinalAnswer) return {false, "fixture did not parse"};
  if (parsed.hops.size() != 3) return {false, "expected 3 hops"};
  if (parsed.final_answer != "Ottawa") return {false, "final answer " + parsed.final_answer};
  std::vector<std::string> path = extract_path(parsed, Entity::of("Ivanka Trump"));
  std::vector<std::string> want = {"ivanka trump", "jared kushner", "canada", "ottawa"};
  if (path != want) return {false, "deduced path mismatch"};

  // Orchestrated replay: the hop-2 retrieval injects the stored statement.
  TemplateSet templates;
  templates.add("country of citizenship", "SUBJECT is a citizen of OBJECT.");
  EditMemory memory = build_memory(
      {Edit::make(Fact::of("Jared Kushner", "country of citizenship", "Canada"), templates)});
  memqa::testing::ScriptedProvider provider({
      "Subquestion: Who is Ivanka Trump's spouse?\n",
      " Ivanka Trump's spouse is Jared Kushner.",
      " Jared Kushner",
      "Subquestion: What is the country of citizenship of Jared Kushner?\n",
      " Canada",
      "Subquestion: What is the capital city of Canada?\n",
      " The capital city of Canada is Ottawa.",
      " Ottawa",
      "Final answer: Ottawa\n",
  });
  PairScorer stub = [](const std::string& statement, const std::string& question) {
    return (statement == "Jared Kushner is a citizen of Canada." &&
            question == "What is the country of citizenship of Jared Kushner?")
               ? 1.0
               : 0.0;
  };
  ScorerRetriever retriever(stub, stub);
  SessionConfig config;
  config.enable_knowledge_prompt = false;
  Rng rng(2);
  Transcript session = answer_question(
      "What is the capital city of the country of citizenship of Ivanka Trump's spouse?", memory,
      retriever, nullptr, provider, pack, config, rng);
  bool injected = session.hops.size() == 3 &&
                  session.hops[1].source == AnswerSource::kMemoryInjected &&
                  session.hops[1].answer == "Jared Kushner is a citizen of Canada." &&
                  session.final_answer == "Ottawa";
  return {injected, "parse + orchestrated injection verified"};
}

// 7. Gold paths match a brute-force walker, including the diversion fixture.
std::pair<bool, std::string> criterion_gold_path() {
  // The diversion fixture in its synthetic encoding.
  BaseKB kb;
  kb.add_fact(Fact::of("Messi", "plays for", "PSG"));
  kb.add_fact(Fact::of("PSG", "located in", "Europe"));
  kb.add_fact(Fact::of("Inter Miami", "located in", "North America"));
  TemplateSet templates;
  templates.add("plays for", "SUBJECT plays for OBJECT.");
  templates.add("located in", "SUBJECT is located in OBJECT.");
  MultiHopInstance inst;
  inst.case_id = "fig";
  inst.questions = {"a", "b", "c"};
  inst.start_subject = Entity::of("Messi");
  inst.hops = {{"plays for", Entity::of("PSG")}, {"located in", Entity::of("Europe")}};
  inst.edits = {Fact::of("Messi", "plays for", "Inter Miami")};
  inst.answer = "Europe";
  inst.new_answer = "North America";
  EditMemory batch =
      build_memory({Edit::make(Fact::of("Messi", "plays for", "Inter Miami"), templates)});
  Path post = gold_path(inst, batch, kb);
  Path pre = gold_path(inst, build_memory({}), kb);
  bool fixture_ok = post.size() == 3 && post[1].norm == "inter miami" &&
                    post[2].norm == "north america" && pre[1].norm == "psg" &&
                    pre[2].norm == "europe";
  if (!fixture_ok) return {false, "diversion fixture mismatch"};

  Rng rng(0x601d);
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<std::pair<std::string, std::string>, std::string> facts;
    BaseKB world;
    for (int e = 0; e < 10; ++e) {
      for (int r = 0; r < 3; ++r) {
        std::string subject = "n" + std::to_string(e);
        std::string relation = "r" + std::to_string(r);
        std::string object = "n" + std::to_string(rng.below(10));
        facts[{subject, relation}] = object;
        world.add_fact(Fact::of(subject, relation, object));
      }
    }
    size_t hops = 2 + rng.below(3);
    std::string start = "n" + std::to_string(rng.below(10));
    std::vector<std::string> relations;
    for (size_t h = 0; h < hops; ++h) relations.push_back("r" + std::to_string(rng.below(3)));

    MultiHopInstance random_inst;
    random_inst.case_id = "rand";
    random_inst.questions = {"a", "b", "c"};
    random_inst.start_subject = Entity::of(start);
    std::string current = start;
    for (const std::string& rel : relations) {
      std::string next = facts.at({current, rel});
      random_inst.hops.push_back({rel, Entity::of(next)});
      current = next;
    }
    random_inst.answer = current;
    random_inst.new_answer = current;

    std::vector<Fact> edit_facts;
    std::vector<Edit> edits;
    size_t edit_count = rng.below(5);
    for (size_t e = 0; e < edit_count; ++e) {
      Fact f = Fact::of("n" + std::to_string(rng.below(10)), "r" + std::to_string(rng.below(3)),
                        "n" + std::to_string(rng.below(10)));
      edit_facts.push_back(f);
      edits.push_back(Edit{f, "stub"});
    }
    auto expected =
        memqa::testing::walk_chain_bruteforce(start, relations, edit_facts, facts);
    Path got = gold_path(random_inst, build_memory(edits), world);
    if (!expected || got.size() != expected->size()) return {false, "walker size mismatch"};
    for (size_t i = 0; i < got.size(); ++i) {
      if (got[i].norm != normalize_label((*expected)[i])) {
        return {false, "walker mismatch on trial " + std::to_string(trial)};
      }
    }
  }
  return {true, "1000 random instances with 0-4 edits, plus the diversion fixture"};
}

// 8. Stratified batching stays within one instance of exact proportion.
std::pair<bool, std::string> criterion_stratified() {
  std::vector<MultiHopInstance> instances;
  size_t id = 0;
  for (size_t hops = 2; hops <= 4; ++hops) {
    for (int i = 0; i < 1000; ++i) {
      MultiHopInstance inst;
      inst.case_id = "s" + std::to_string(id++);
      inst.questions = {"a", "b", "c"};
      inst.start_subject = Entity::of("E" + std::to_string(id));
      for (size_t h = 0; h < hops; ++h) {
        inst.hops.push_back({"r", Entity::of("O" + std::to_string(id) + "_" + std::to_string(h))});
      }
      inst.answer = "x";
      inst.new_answer = "x";
      instances.push_back(std::move(inst));
    }
  }
  std::vector<EditBatch> batches = stratified_batches(instances, 100, 424242);
  if (batches.size() != 30) return {false, "expected 30 batches"};

  std::set<size_t> seen;
  for (const EditBatch& batch : batches) {
    if (batch.instance_indices.size() != 100) return {false, "batch size drifted"};
    for (size_t idx : batch.instance_indices) {
      if (!seen.insert(idx).second) return {false, "batches overlap"};
    }
    for (size_t hops = 2; hops <= 4; ++hops) {
      double got = batch.stratum_counts.count(hops)
                       ? static_cast<double>(batch.stratum_counts.at(hops))
                       : 0.0;
      if (std::abs(got - 100.0 / 3.0) > 1.0) {
        return {false, "stratum deviates by more than 1"};
      }
    }
  }
  if (seen.size() != instances.size()) return {false, "batches do not cover the set"};
  return {true, "30 batches of 100 over 1000/1000/1000, all within +-1"};
}

// 9. CLI runs repeat byte-identically under a fixed seed and the mock.
std::pair<bool, std::string> criterion_determinism() {
  fs::path dir = fs::temp_directory_path() / "memqa_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string base = dir.string();
  std::string cli = MEMQA_CLI_PATH;

  auto run = [&](const std::string& args) {
    std::string command = cli + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(command.c_str()));
  };
  auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };

  for (const char* tag : {"a", "b"}) {
    if (run("gen-synthetic --out-dir " + base + "/world_" + tag +
            " --instances 15 --entities 150 --train-edits 20 --seed 77") != 0) {
      return {false, "gen-synthetic failed"};
    }
  }
  for (const char* file :
       {"dataset.json", "kb.json", "templates.json", "world.json", "train_edits.json"}) {
    if (slurp(dir / ("world_a/" + std::string(file))) !=
        slurp(dir / ("world_b/" + std::string(file)))) {
      return {false, std::string("gen output differs: ") + file};
    }
  }
  for (const char* tag : {"a", "b"}) {
    if (run("run --dataset " + base + "/world_a/dataset.json --kb " + base +
            "/world_a/kb.json --templates " + base + "/world_a/templates.json --world " + base +
            "/world_a/world.json --provider mock --detector oracle --seed 13 "
            "--dump-transcripts --out-dir " +
            base + "/run_" + tag) != 0) {
      return {false, "run failed"};
    }
  }
  for (const char* file : {"results.json", "report.json", "report.txt", "transcripts.jsonl"}) {
    if (slurp(dir / ("run_a/" + std::string(file))) !=
        slurp(dir / ("run_b/" + std::string(file)))) {
      return {false, std::string("run output differs: ") + file};
    }
  }
  return {true, "gen-synthetic and run outputs byte-identical across repeats"};
}

// 10. The report's disambiguator prediction mean respects the fixture bound.
std::pair<bool, std::string> criterion_diagnostics() {
  WorldSpec spec;
  spec.entity_count = 150;
  spec.instance_count = 10;
  spec.train_edit_count = 0;
  spec.seed = 404;
  SyntheticWorld world = generate_world(spec);
  TemplateSet templates = world.relations.statement_templates();
  Gazetteer gazetteer = Gazetteer::from_kb(world.kb);
  MockProvider provider(world.relations, world.kb,
                        QuestionIndex::from_instances(world.instances));

  // Stub detector: the pre stage passes every entry of a small memory, so
  // no retrieve call can see more than five candidates; the true oracle
  // then disambiguates.
  PairScorer pass_all = [](const std::string&, const std::string&) { return 0.6; };
  PairScorer oracle = oracle_scorer(world.relations);
  ScorerRetriever retriever(pass_all, oracle);

  // Keep memories at five entries: batch size 1 with at most 5 edits each.
  std::vector<MultiHopInstance> capped = world.instances;
  for (MultiHopInstance& inst : capped) {
    if (inst.edits.size() > 5) inst.edits.resize(5);
  }
  RunOptions options;
  options.seed = 6;
  options.batch_size = 1;
  RunOutput out = run_instances(capped, templates, world.kb, &gazetteer, retriever, provider,
                                PromptPack::standard(), options);

  std::string json = emit_report(out.report, ReportFormat::kJson);
  bool has_field = json.find("mean_dis_predictions") != std::string::npos;
  std::ostringstream detail;
  detail << "mean_dis_predictions=" << out.report.mean_dis_predictions
         << " mean_pre_candidates=" << out.report.mean_pre_candidates;
  return {has_field && out.report.mean_dis_predictions <= 5.0 &&
              out.report.mean_pre_candidates <= 5.0,
          detail.str()};
}

}  // namespace

int main() {
  run_criterion(1, "training-loss gradients match finite differences", criterion_gradients);
  run_criterion(2, "SR/BR equal the exhaustive scorer", criterion_sr_br);
  run_criterion(3, "two-stage retrieval equals the brute-force oracle", criterion_retrieval);
  run_criterion(4, "both detector models train past 0.95 SR and BR", criterion_trainability);
  run_criterion(5, "oracle end-to-end run is perfect; unreliable reasoning reproduced",
                criterion_end_to_end);
  run_criterion(6, "worked-session fixture parses and replays with injection",
                criterion_worked_session);
  run_criterion(7, "gold paths match the brute-force chain walker", criterion_gold_path);
  run_criterion(8, "stratified batches stay within one of exact proportion",
                criterion_stratified);
  run_criterion(9, "seeded CLI commands are byte-reproducible", criterion_determinism);
  run_criterion(10, "retrieval diagnostics reported and bounded on the capped fixture",
                criterion_diagnostics);

  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all 10 criteria passed" << std::endl;
  return 0;
}
