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

#include <benchmark/benchmark.h>

#include "memqa/detector.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/rng.hpp"
#include "memqa/synthetic.hpp"
#include "memqa/trainset.hpp"

namespace {

using namespace memqa;

DualEncoderModel make_dual() {
  EncoderConfig cfg;
  cfg.buckets = 32768;
  cfg.dim = 64;
  return DualEncoderModel(cfg, 7);
}

JointClassifierModel make_joint() {
  EncoderConfig cfg;
  cfg.buckets = 32768;
  JointClassifierModel model(cfg, /*agreement_prior=*/true);
  Rng rng(11);
  for (float& w : model.weights()) w = static_cast<float>(rng.gaussian() * 0.05);
  return model;
}

EditMemory make_memory(size_t entries) {
  RelationVocabulary vocab = default_relation_vocabulary();
  TemplateSet templates = vocab.statement_templates();
  Rng rng(entries);
  std::vector<Edit> edits;
  for (size_t i = 0; i < entries; ++i) {
    Fact f = Fact::of("Subject " + std::to_string(i), "plays for",
                      "Target " + std::to_string(rng.below(10000)));
    edits.push_back(Edit::make(f, templates));
  }
  return build_memory(edits);
}

void BM_DualEmbed(benchmark::State& state) {
  DualEncoderModel model = make_dual();
  std::string text = "Which team does Korvalin Demalor play for?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.embed(text));
  }
}
BENCHMARK(BM_DualEmbed);

void BM_DualScore(benchmark::State& state) {
  DualEncoderModel model = make_dual();
  std::string t = "Korvalin Demalor plays for Solvane United.";
  std::string q = "Which team does Korvalin Demalor play for?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.score(t, q));
  }
}
BENCHMARK(BM_DualScore);

void BM_JointScore(benchmark::State& state) {
  JointClassifierModel model = make_joint();
  std::string t = "Korvalin Demalor plays for Solvane United.";
  std::string q = "Which team does Korvalin Demalor play for?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.score(t, q));
  }
}
BENCHMARK(BM_JointScore);

// Memory sizes bracket the deployment range up to a few thousand edits.
void BM_Retrieve(benchmark::State& state) {
  size_t entries = static_cast<size_t>(state.range(0));
  EditMemory memory = make_memory(entries);
  DualEncoderModel pre = make_dual();
  JointClassifierModel dis = make_joint();
  DetectorBundle bundle(pre, dis);
  std::string question = "Which team does Subject 17 play for?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(retrieve(memory, question, bundle));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * entries));
}
BENCHMARK(BM_Retrieve)->Arg(96)->Arg(1000)->Arg(2786);

void BM_PairLossDual(benchmark::State& state) {
  DualEncoderModel model = make_dual();
  TrainPair pos{"Korvalin Demalor plays for Solvane United.",
                "Which team does Korvalin Demalor play for?", 0};
  std::vector<std::string> negs;
  for (int i = 0; i < 20; ++i) negs.push_back("Who leads Varen " + std::to_string(i) + "?");
  for (auto _ : state) {
    benchmark::DoNotOptimize(bce_ns_loss(model, pos, negs));
  }
}
BENCHMARK(BM_PairLossDual);

void BM_SrBrEval(benchmark::State& state) {
  WorldSpec spec;
  spec.entity_count = 300;
  spec.instance_count = 4;
  spec.train_edit_count = 64;
  spec.seed = 3;
  SyntheticWorld world = generate_world(spec);
  std::vector<TrainPair> pairs = build_trainset(world.train_edits, world.relations, {},
                                                TrainsetMode::kTemplated, nullptr);
  DualEncoderModel model = make_dual();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_sr_br(pairs, model));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * pairs.size() * pairs.size()));
}
BENCHMARK(BM_SrBrEval);

void BM_TrainEpoch(benchmark::State& state) {
  WorldSpec spec;
  spec.entity_count = 300;
  spec.instance_count = 4;
  spec.train_edit_count = 64;
  spec.seed = 3;
  SyntheticWorld world = generate_world(spec);
  std::vector<TrainPair> pairs = build_trainset(world.train_edits, world.relations, {},
                                                TrainsetMode::kTemplated, nullptr);
  EncoderConfig cfg;
  cfg.buckets = 8192;
  cfg.dim = 64;
  TrainConfig tc = pre_detector_defaults();
  tc.learning_rate = 0.02;
  tc.max_epochs = 1;
  tc.patience = 1;
  for (auto _ : state) {
    DualEncoderModel model(cfg, 7);
    benchmark::DoNotOptimize(train(model, pairs, tc));
  }
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
