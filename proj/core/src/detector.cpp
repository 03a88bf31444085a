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

#include "memqa/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "memqa/rng.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

double clamp_prob(double p, double c) { return std::min(std::max(p, c), 1.0 - c); }

// Embedding workspace for the dual model: raw sum, norm, and unit vector.
struct Embedding {
  std::vector<uint32_t> features;
  std::vector<double> unit;
  double norm = 0.0;
};

Embedding embed_raw(const DualEncoderModel& m, const std::string& text) {
  Embedding e;
  e.features = text_features(m.config(), text);
  if (e.features.empty()) throw DegenerateInputError(text);
  uint32_t dim = m.config().dim;
  e.unit.assign(dim, 0.0);
  const float* w = m.weights().data();
  for (uint32_t b : e.features) {
    const float* row = w + static_cast<size_t>(b) * dim;
    for (uint32_t k = 0; k < dim; ++k) e.unit[k] += row[k];
  }
  double norm_sq = 0.0;
  for (double v : e.unit) norm_sq += v * v;
  e.norm = std::sqrt(norm_sq);
  if (e.norm < 1e-12) throw DegenerateInputError(text);
  for (double& v : e.unit) v /= e.norm;
  return e;
}

double cosine(const Embedding& a, const Embedding& b) {
  double c = 0.0;
  for (size_t k = 0; k < a.unit.size(); ++k) c += a.unit[k] * b.unit[k];
  return c;
}

// d(cos)/d(row sums) scattered into the gradient buffer, scaled by
// `coeff`. The same bucket appearing in both texts accumulates twice.
void scatter_cosine_grad(const Embedding& t, const Embedding& q, double c, uint32_t dim,
                         double coeff, std::vector<double>* grad) {
  std::vector<double> dt(dim), dq(dim);
  for (uint32_t k = 0; k < dim; ++k) {
    dt[k] = coeff * (q.unit[k] - c * t.unit[k]) / t.norm;
    dq[k] = coeff * (t.unit[k] - c * q.unit[k]) / q.norm;
  }
  for (uint32_t b : t.features) {
    double* row = grad->data() + static_cast<size_t>(b) * dim;
    for (uint32_t k = 0; k < dim; ++k) row[k] += dt[k];
  }
  for (uint32_t b : q.features) {
    double* row = grad->data() + static_cast<size_t>(b) * dim;
    for (uint32_t k = 0; k < dim; ++k) row[k] += dq[k];
  }
}

// Accumulates the loss gradient for the dual model into `grad` scaled by
// `weight` and returns the loss. Caches let one batch reuse embeddings.
double dual_pair_loss_grad(const DualEncoderModel& m, const Embedding& t, const Embedding& q_pos,
                           const std::vector<const Embedding*>& q_negs, double prob_clamp,
                           double weight, std::vector<double>* grad) {
  uint32_t dim = m.config().dim;
  double loss = 0.0;

  double c_pos = cosine(t, q_pos);
  double g_pos = std::exp(2.0 * c_pos - 2.0);
  loss -= std::log(clamp_prob(g_pos, prob_clamp));
  if (grad != nullptr && g_pos > prob_clamp && g_pos < 1.0 - prob_clamp) {
    scatter_cosine_grad(t, q_pos, c_pos, dim, weight * -2.0, grad);
  }

  if (!q_negs.empty()) {
    double inv_k = 1.0 / static_cast<double>(q_negs.size());
    for (const Embedding* qn : q_negs) {
      double c_neg = cosine(t, *qn);
      double g_neg = std::exp(2.0 * c_neg - 2.0);
      loss -= inv_k * std::log(clamp_prob(1.0 - g_neg, prob_clamp));
      if (grad != nullptr && g_neg > prob_clamp && g_neg < 1.0 - prob_clamp) {
        double coeff = weight * inv_k * 2.0 * g_neg / (1.0 - g_neg);
        scatter_cosine_grad(t, *qn, c_neg, dim, coeff, grad);
      }
    }
  }
  return loss;
}

// Joint model: z = bias + sum of weights over pair features. The bias
// gradient lives in the last slot of the buffer.
double joint_z(const JointClassifierModel& m, const std::vector<uint32_t>& features) {
  double z = m.bias();
  for (uint32_t b : features) z += m.weights()[b];
  return z;
}

void scatter_joint_grad(const std::vector<uint32_t>& features, double coeff, size_t bias_slot,
                        std::vector<double>* grad) {
  for (uint32_t b : features) (*grad)[b] += coeff;
  (*grad)[bias_slot] += coeff;
}

double joint_pair_loss_grad(const JointClassifierModel& m, const std::vector<uint32_t>& f_pos,
                            const std::vector<const std::vector<uint32_t>*>& f_negs,
                            double prob_clamp, double weight, std::vector<double>* grad) {
  size_t bias_slot = m.weights().size();
  double loss = 0.0;

  double g_pos = sigmoid(joint_z(m, f_pos));
  loss -= std::log(clamp_prob(g_pos, prob_clamp));
  if (grad != nullptr && g_pos > prob_clamp && g_pos < 1.0 - prob_clamp) {
    scatter_joint_grad(f_pos, weight * (g_pos - 1.0), bias_slot, grad);
  }

  if (!f_negs.empty()) {
    double inv_k = 1.0 / static_cast<double>(f_negs.size());
    for (const auto* fn : f_negs) {
      double g_neg = sigmoid(joint_z(m, *fn));
      loss -= inv_k * std::log(clamp_prob(1.0 - g_neg, prob_clamp));
      if (grad != nullptr && g_neg > prob_clamp && g_neg < 1.0 - prob_clamp) {
        scatter_joint_grad(*fn, weight * inv_k * g_neg, bias_slot, grad);
      }
    }
  }
  return loss;
}

struct AdamState {
  std::vector<float> m;
  std::vector<float> v;
  int64_t step = 0;
};

// One dense Adam step applied to `params` (float storage, double math).
// Weight decay is decoupled and pulls toward the initialization snapshot,
// so buckets the data never touches keep their init values exactly.
void adam_step(std::vector<float>& params, float* extra_param, AdamState& state,
               const std::vector<double>& grad, const std::vector<float>& init,
               const TrainConfig& cfg) {
  ++state.step;
  double b1 = cfg.adam_beta1;
  double b2 = cfg.adam_beta2;
  double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  double decay = cfg.learning_rate * cfg.weight_decay;
  size_t n = grad.size();
  for (size_t i = 0; i < n; ++i) {
    double g = grad[i];
    double m = b1 * state.m[i] + (1.0 - b1) * g;
    double v = b2 * state.v[i] + (1.0 - b2) * g * g;
    state.m[i] = static_cast<float>(m);
    state.v[i] = static_cast<float>(v);
    double update = cfg.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + cfg.adam_eps);
    float& param = i < params.size() ? params[i] : *extra_param;
    double value = param - update;
    if (decay != 0.0) value -= decay * (value - init[i]);
    param = static_cast<float>(value);
  }
}

// Group-wise validation split: shuffles group ids and takes the first
// ceil-rounded fraction as validation.
struct Split {
  std::vector<size_t> train_idx;
  std::vector<size_t> val_idx;
  size_t train_groups = 0;
  size_t val_groups = 0;
};

Split split_by_group(const std::vector<TrainPair>& data, double fraction, Rng& rng) {
  std::vector<int64_t> groups;
  std::map<int64_t, bool> seen;
  for (const TrainPair& p : data) {
    if (!seen.count(p.group)) {
      seen[p.group] = true;
      groups.push_back(p.group);
    }
  }
  if (groups.size() < 2) {
    throw InsufficientDataError("training needs at least 2 statement groups, got " +
                                std::to_string(groups.size()));
  }
  rng.shuffle(groups);
  size_t n_val = static_cast<size_t>(std::llround(fraction * static_cast<double>(groups.size())));
  n_val = std::max<size_t>(1, std::min(n_val, groups.size() - 1));
  std::map<int64_t, bool> val_groups;
  for (size_t i = 0; i < n_val; ++i) val_groups[groups[i]] = true;

  Split s;
  s.val_groups = n_val;
  s.train_groups = groups.size() - n_val;
  for (size_t i = 0; i < data.size(); ++i) {
    if (val_groups.count(data[i].group)) {
      s.val_idx.push_back(i);
    } else {
      s.train_idx.push_back(i);
    }
  }
  return s;
}

// Scores laid out as matrix[i][j] = g(statement of pair j, question of pair i).
SrBr sr_br_from_matrix(const std::vector<TrainPair>& val,
                       const std::vector<std::vector<double>>& matrix) {
  size_t n = val.size();
  size_t sr_hits = 0;
  size_t br_hits = 0;
  for (size_t i = 0; i < n; ++i) {
    double own = matrix[i][i];
    bool sr_ok = true;
    bool br_ok = true;
    for (size_t j = 0; j < n; ++j) {
      if (val[j].statement == val[i].statement) continue;  // same-statement exclusion
      if (matrix[i][j] > own) sr_ok = false;
      if (matrix[i][j] >= 0.5) br_ok = false;
      if (!sr_ok && !br_ok) break;
    }
    if (sr_ok) ++sr_hits;
    if (br_ok) ++br_hits;
  }
  SrBr out;
  out.sr = n == 0 ? 0.0 : static_cast<double>(sr_hits) / static_cast<double>(n);
  out.br = n == 0 ? 0.0 : static_cast<double>(br_hits) / static_cast<double>(n);
  return out;
}

}  // namespace

void regroup_by_statement(std::vector<TrainPair>& pairs) {
  std::unordered_map<std::string, int64_t> ids;
  for (TrainPair& p : pairs) {
    auto [it, inserted] = ids.emplace(p.statement, static_cast<int64_t>(ids.size()));
    p.group = it->second;
    (void)inserted;
  }
}

std::vector<TrainPair> load_trainset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trainset: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
  if (!j.is_array()) throw Error("trainset must be a JSON array: " + path);
  std::vector<TrainPair> pairs;
  size_t index = 0;
  for (const auto& rec : j) {
    TrainPair p;
    try {
      p.statement = rec.at("statement").get<std::string>();
      p.question = rec.at("question").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(index, e.what());
    }
    if (trim(p.statement).empty() || trim(p.question).empty()) {
      throw SchemaError(index, "statement and question must be non-empty");
    }
    pairs.push_back(std::move(p));
    ++index;
  }
  regroup_by_statement(pairs);
  return pairs;
}

void save_trainset(const std::vector<TrainPair>& pairs, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const TrainPair& p : pairs) {
    j.push_back({{"statement", p.statement}, {"question", p.question}, {"group_id", p.group}});
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write trainset: " + path);
  out << j.dump(2) << "\n";
}

void TrainConfig::validate() const {
  if (negatives < 1) throw Error("negatives per positive must be >= 1");
  if (val_split <= 0.0 || val_split >= 1.0) throw Error("validation split must be in (0, 1)");
  if (batch_size < 1) throw Error("batch size must be >= 1");
  if (max_epochs < 0) throw Error("max epochs must be >= 0");
}

TrainConfig pre_detector_defaults() {
  TrainConfig cfg;
  cfg.batch_size = 1024;
  cfg.negatives = 20;
  return cfg;
}

TrainConfig disambiguator_defaults() {
  TrainConfig cfg;
  cfg.batch_size = 256;
  cfg.negatives = 1;
  return cfg;
}

LossGrad bce_ns_loss(const DualEncoderModel& model, const TrainPair& positive,
                  const std::vector<std::string>& negative_questions, double prob_clamp) {
  LossGrad out;
  out.grad.assign(model.parameter_count(), 0.0);
  Embedding t = embed_raw(model, positive.statement);
  Embedding q = embed_raw(model, positive.question);
  std::vector<Embedding> negs;
  negs.reserve(negative_questions.size());
  std::vector<const Embedding*> neg_ptrs;
  for (const std::string& nq : negative_questions) {
    negs.push_back(embed_raw(model, nq));
  }
  for (const Embedding& e : negs) neg_ptrs.push_back(&e);
  out.loss = dual_pair_loss_grad(model, t, q, neg_ptrs, prob_clamp, 1.0, &out.grad);
  return out;
}

LossGrad bce_ns_loss(const JointClassifierModel& model, const TrainPair& positive,
                  const std::vector<std::string>& negative_questions, double prob_clamp) {
  LossGrad out;
  out.grad.assign(model.parameter_count(), 0.0);
  std::vector<uint32_t> f_pos = model.pair_features(positive.statement, positive.question);
  std::vector<std::vector<uint32_t>> f_negs;
  for (const std::string& nq : negative_questions) {
    f_negs.push_back(model.pair_features(positive.statement, nq));
  }
  std::vector<const std::vector<uint32_t>*> ptrs;
  for (const auto& f : f_negs) ptrs.push_back(&f);
  out.loss = joint_pair_loss_grad(model, f_pos, ptrs, prob_clamp, 1.0, &out.grad);
  return out;
}

PairScorer scorer_of(const DualEncoderModel& model) {
  return [&model](const std::string& t, const std::string& q) { return model.score(t, q); };
}

PairScorer scorer_of(const JointClassifierModel& model) {
  return [&model](const std::string& t, const std::string& q) { return model.score(t, q); };
}

SrBr evaluate_sr_br(const std::vector<TrainPair>& val, const PairScorer& scorer) {
  size_t n = val.size();
  std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) matrix[i][j] = scorer(val[j].statement, val[i].question);
  }
  return sr_br_from_matrix(val, matrix);
}

SrBr evaluate_sr_br(const std::vector<TrainPair>& val, const DualEncoderModel& model) {
  // Embeddings are cached per pair so evaluation is O(n) embeds + O(n^2) dots.
  size_t n = val.size();
  std::vector<Embedding> t_emb;
  std::vector<Embedding> q_emb;
  t_emb.reserve(n);
  q_emb.reserve(n);
  for (const TrainPair& p : val) {
    t_emb.push_back(embed_raw(model, p.statement));
    q_emb.push_back(embed_raw(model, p.question));
  }
  std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      matrix[i][j] = std::exp(2.0 * cosine(t_emb[j], q_emb[i]) - 2.0);
    }
  }
  return sr_br_from_matrix(val, matrix);
}

SrBr evaluate_sr_br(const std::vector<TrainPair>& val, const JointClassifierModel& model) {
  return evaluate_sr_br(val, scorer_of(model));
}

double success_rate(const std::vector<TrainPair>& val, const PairScorer& scorer) {
  return evaluate_sr_br(val, scorer).sr;
}

double block_rate(const std::vector<TrainPair>& val, const PairScorer& scorer) {
  return evaluate_sr_br(val, scorer).br;
}

namespace {

// Model-specific hooks for the shared training loop. Dual embeddings are
// cached per batch (they change at every optimizer step); the joint model
// pairs the question against the positive statement, so its preparation
// is just the pair itself.
struct DualHooks {
  using Model = DualEncoderModel;
  using Prepared = Embedding;

  static double item_loss_grad(const Model& m, const Prepared& t, const Prepared& q,
                               const std::vector<const Prepared*>& negs, double prob_clamp,
                               double weight, std::vector<double>* grad) {
    return dual_pair_loss_grad(m, t, q, negs, prob_clamp, weight, grad);
  }
  static std::vector<float>& params(Model& m) { return m.weights(); }
  static float* extra_param(Model&) { return nullptr; }
  static size_t param_count(const Model& m) { return m.parameter_count(); }
  static SrBr eval(const std::vector<TrainPair>& val, const Model& m) {
    return evaluate_sr_br(val, m);
  }
};

template <typename Model>
std::vector<float> snapshot(const Model& m, const float* extra) {
  std::vector<float> w = m.weights();
  if (extra != nullptr) w.push_back(*extra);
  return w;
}

template <typename Model>
void restore(Model& m, float* extra, const std::vector<float>& snap) {
  if (extra != nullptr) {
    std::copy(snap.begin(), snap.end() - 1, m.weights().begin());
    *extra = snap.back();
  } else {
    std::copy(snap.begin(), snap.end(), m.weights().begin());
  }
}

// Uniform negative sampling over the minibatch's questions, excluding the
// positive's group. Falls back to the whole training split when a batch
// holds no eligible question.
std::vector<size_t> sample_negatives(const std::vector<TrainPair>& data,
                                     const std::vector<size_t>& batch,
                                     const std::vector<size_t>& train_idx, size_t item,
                                     int k, Rng& rng) {
  int64_t group = data[item].group;
  std::vector<size_t> eligible;
  eligible.reserve(batch.size());
  for (size_t idx : batch) {
    if (data[idx].group != group) eligible.push_back(idx);
  }
  if (eligible.empty()) {
    for (size_t idx : train_idx) {
      if (data[idx].group != group) eligible.push_back(idx);
    }
  }
  std::vector<size_t> out;
  out.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    out.push_back(eligible[rng.below(eligible.size())]);
  }
  return out;
}

// Shared loop: dual and joint differ only in how a pair is prepared and
// how its loss/gradient are computed.
template <typename Hooks, typename PrepareStatement, typename PrepareQuestion>
TrainResult train_impl(typename Hooks::Model& model, const std::vector<TrainPair>& dataset,
                       const TrainConfig& cfg, PrepareStatement prep_t, PrepareQuestion prep_q) {
  cfg.validate();
  for (size_t i = 0; i < dataset.size(); ++i) {
    if (is_degenerate_text(dataset[i].statement)) throw DegenerateInputError(dataset[i].statement);
    if (is_degenerate_text(dataset[i].question)) throw DegenerateInputError(dataset[i].question);
  }

  Rng rng(cfg.seed);
  Split split = split_by_group(dataset, cfg.val_split, rng);
  if (split.train_groups < 2) {
    throw InsufficientDataError("training split has fewer than 2 groups; provide more data");
  }

  std::vector<TrainPair> val;
  val.reserve(split.val_idx.size());
  for (size_t idx : split.val_idx) val.push_back(dataset[idx]);

  TrainResult result;
  result.train_pairs = split.train_idx.size();
  result.val_pairs = split.val_idx.size();
  result.train_groups = split.train_groups;
  result.val_groups = split.val_groups;

  SrBr init = Hooks::eval(val, model);
  result.history.push_back({0, 0.0, init.sr, init.br});
  double best_sum = init.sr + init.br;
  result.best_epoch = 0;
  result.best_sr = init.sr;
  result.best_br = init.br;
  std::vector<float> best = snapshot(model, Hooks::extra_param(model));

  AdamState adam;
  adam.m.assign(Hooks::param_count(model), 0.0f);
  adam.v.assign(Hooks::param_count(model), 0.0f);
  std::vector<double> grad(Hooks::param_count(model), 0.0);
  const std::vector<float> init_snapshot = snapshot(model, Hooks::extra_param(model));

  int since_best = 0;
  std::vector<size_t> order = split.train_idx;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    size_t item_count = 0;

    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(cfg.batch_size)) {
      size_t end = std::min(order.size(), begin + static_cast<size_t>(cfg.batch_size));
      std::vector<size_t> batch(order.begin() + begin, order.begin() + end);

      // Negatives are drawn up front so the RNG stream does not depend on
      // per-item cache state.
      std::vector<std::vector<size_t>> negatives(batch.size());
      for (size_t bi = 0; bi < batch.size(); ++bi) {
        negatives[bi] =
            sample_negatives(dataset, batch, split.train_idx, batch[bi], cfg.negatives, rng);
      }

      // Per-batch caches; weights are constant until the Adam step below.
      std::map<const std::string*, typename Hooks::Prepared> stmt_cache;
      std::map<const std::string*, typename Hooks::Prepared> q_cache;
      auto statement_of = [&](size_t idx) -> const typename Hooks::Prepared& {
        auto it = stmt_cache.find(&dataset[idx].statement);
        if (it == stmt_cache.end()) {
          it = stmt_cache.emplace(&dataset[idx].statement, prep_t(dataset[idx])).first;
        }
        return it->second;
      };
      auto question_of = [&](size_t idx) -> const typename Hooks::Prepared& {
        auto it = q_cache.find(&dataset[idx].question);
        if (it == q_cache.end()) {
          it = q_cache.emplace(&dataset[idx].question, prep_q(dataset[idx])).first;
        }
        return it->second;
      };

      std::fill(grad.begin(), grad.end(), 0.0);
      double weight = 1.0 / static_cast<double>(batch.size());
      for (size_t bi = 0; bi < batch.size(); ++bi) {
        size_t idx = batch[bi];
        std::vector<const typename Hooks::Prepared*> negs;
        negs.reserve(negatives[bi].size());
        for (size_t nidx : negatives[bi]) negs.push_back(&question_of(nidx));
        loss_sum += Hooks::item_loss_grad(model, statement_of(idx), question_of(idx), negs,
                                          cfg.prob_clamp, weight, &grad);
        ++item_count;
      }
      adam_step(Hooks::params(model), Hooks::extra_param(model), adam, grad, init_snapshot, cfg);
    }

    SrBr stats = Hooks::eval(val, model);
    double epoch_loss = item_count == 0 ? 0.0 : loss_sum / static_cast<double>(item_count);
    result.history.push_back({epoch, epoch_loss, stats.sr, stats.br});

    if (stats.sr + stats.br > best_sum) {
      best_sum = stats.sr + stats.br;
      best = snapshot(model, Hooks::extra_param(model));
      result.best_epoch = epoch;
      result.best_sr = stats.sr;
      result.best_br = stats.br;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (since_best >= cfg.patience) break;
  }

  restore(model, Hooks::extra_param(model), best);
  return result;
}

}  // namespace

TrainResult train(DualEncoderModel& model, const std::vector<TrainPair>& dataset,
                  const TrainConfig& cfg) {
  // Statements and questions embed independently.
  return train_impl<DualHooks>(
      model, dataset, cfg,
      [&model](const TrainPair& p) { return embed_raw(model, p.statement); },
      [&model](const TrainPair& p) { return embed_raw(model, p.question); });
}

TrainResult train(JointClassifierModel& model, const std::vector<TrainPair>& dataset,
                  const TrainConfig& cfg) {
  // Joint: the "statement" preparation is the positive pair's features and
  // each "question" preparation pairs the question against that statement.
  // Because the pairing depends on the positive statement, the cache key
  // must include it; the shared loop keys caches by text pointer, so the
  // joint model prepares features inline instead.
  struct Adapter {
    using Model = JointClassifierModel;
    struct Prepared {
      const TrainPair* pair;
    };
    static double item_loss_grad(const Model& m, const Prepared& t, const Prepared& q,
                                 const std::vector<const Prepared*>& negs, double prob_clamp,
                                 double weight, std::vector<double>* grad) {
      (void)q;
      std::vector<uint32_t> f_pos = m.pair_features(t.pair->statement, t.pair->question);
      std::vector<std::vector<uint32_t>> f_negs;
      f_negs.reserve(negs.size());
      for (const Prepared* n : negs) {
        f_negs.push_back(m.pair_features(t.pair->statement, n->pair->question));
      }
      std::vector<const std::vector<uint32_t>*> ptrs;
      ptrs.reserve(f_negs.size());
      for (const auto& f : f_negs) ptrs.push_back(&f);
      return joint_pair_loss_grad(m, f_pos, ptrs, prob_clamp, weight, grad);
    }
    static std::vector<float>& params(Model& m) { return m.weights(); }
    static float* extra_param(Model& m) { return &m.bias(); }
    static size_t param_count(const Model& m) { return m.parameter_count(); }
    static SrBr eval(const std::vector<TrainPair>& val, const Model& m) {
      return evaluate_sr_br(val, m);
    }
  };
  return train_impl<Adapter>(
      model, dataset, cfg, [](const TrainPair& p) { return Adapter::Prepared{&p}; },
      [](const TrainPair& p) { return Adapter::Prepared{&p}; });
}

}  // namespace memqa
