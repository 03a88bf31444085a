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

#ifndef MEMQA_DETECTOR_HPP_
#define MEMQA_DETECTOR_HPP_

#include <functional>
#include <string>
#include <vector>

#include "memqa/encoder.hpp"

namespace memqa {

// One supervised example: a statement and an atomic question in its
// scope. Pairs with identical statement text share a group; groups are
// never sampled as negatives against themselves and are excluded from
// the SR/BR comparison sets.
struct TrainPair {
  std::string statement;
  std::string question;
  int64_t group = -1;
};

// Reassigns groups so that identical statement texts share one id.
void regroup_by_statement(std::vector<TrainPair>& pairs);

std::vector<TrainPair> load_trainset(const std::string& path);
void save_trainset(const std::vector<TrainPair>& pairs, const std::string& path);

struct TrainConfig {
  double learning_rate = 1e-5;
  int batch_size = 1024;
  int negatives = 20;  // k
  int max_epochs = 50;
  int patience = 10;
  uint64_t seed = 1;
  double val_split = 0.2;  // validation fraction, split by group
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double prob_clamp = 1e-7;  // probabilities clamped to [c, 1-c] before log
  // Decoupled per-step pull of each weight toward its initialization.
  // Bounds how far trained rows can drift from the init scale without
  // touching rows the data never selects. 0 trains the bare objective.
  double weight_decay = 0.0;

  void validate() const;
};

// Role presets: the pre-detector trains with 20 negatives at batch 1024,
// the disambiguator with 1 negative at batch 256.
TrainConfig pre_detector_defaults();
TrainConfig disambiguator_defaults();

// Binary cross-entropy with negative sampling for one positive pair:
//   L = -log g(t, q)  -  (1/k) sum_n log(1 - g(t, q_n))
// Probabilities are clamped before the logs; gradients treat the clamped
// region as flat.
struct LossGrad {
  double loss = 0.0;
  // Dual: buckets*dim entries. Joint: buckets entries followed by the bias.
  std::vector<double> grad;
};

LossGrad bce_ns_loss(const DualEncoderModel& model, const TrainPair& positive,
                  const std::vector<std::string>& negative_questions, double prob_clamp = 1e-7);
LossGrad bce_ns_loss(const JointClassifierModel& model, const TrainPair& positive,
                  const std::vector<std::string>& negative_questions, double prob_clamp = 1e-7);

// Pairwise scoring hook used by the metrics and the retriever, so stub
// and oracle scorers plug in next to trained models.
using PairScorer = std::function<double(const std::string& statement,
                                        const std::string& question)>;

PairScorer scorer_of(const DualEncoderModel& model);
PairScorer scorer_of(const JointClassifierModel& model);

struct SrBr {
  double sr = 0.0;
  double br = 0.0;
};

// Success rate: the target pair outscores (>=) every candidate statement
// in the validation set. Block rate: every non-matching candidate scores
// below 0.5. Candidates sharing the target's statement text are excluded
// from both comparison sets.
SrBr evaluate_sr_br(const std::vector<TrainPair>& val, const PairScorer& scorer);
SrBr evaluate_sr_br(const std::vector<TrainPair>& val, const DualEncoderModel& model);
SrBr evaluate_sr_br(const std::vector<TrainPair>& val, const JointClassifierModel& model);

double success_rate(const std::vector<TrainPair>& val, const PairScorer& scorer);
double block_rate(const std::vector<TrainPair>& val, const PairScorer& scorer);

struct EpochStats {
  int epoch = 0;  // 0 records the initialization (loss is not populated)
  double loss = 0.0;
  double sr = 0.0;
  double br = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;  // entry 0 is the initialization
  int best_epoch = 0;
  double best_sr = 0.0;
  double best_br = 0.0;
  size_t train_pairs = 0;
  size_t val_pairs = 0;
  size_t train_groups = 0;
  size_t val_groups = 0;
};

// Trains in place and leaves the model at the checkpoint with the highest
// validation SR + BR (the initialization counts as a candidate). Stops at
// patience exhaustion of the SR + BR - 1 indicator or at max_epochs.
// Deterministic for a fixed seed. Throws InsufficientDataError when fewer
// than two groups land on the training side of the split.
TrainResult train(DualEncoderModel& model, const std::vector<TrainPair>& dataset,
                  const TrainConfig& cfg);
TrainResult train(JointClassifierModel& model, const std::vector<TrainPair>& dataset,
                  const TrainConfig& cfg);

}  // namespace memqa

#endif  // MEMQA_DETECTOR_HPP_
