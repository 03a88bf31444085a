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

// Workbench entry point. Subcommands: gen-synthetic, build-trainset,
// train-detector, eval-detector, build-memory, run, evaluate, report.
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "memqa/detector.hpp"
#include "memqa/evaluation.hpp"
#include "memqa/gazetteer.hpp"
#include "memqa/knowledge.hpp"
#include "memqa/llm.hpp"
#include "memqa/orchestrator.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/runner.hpp"
#include "memqa/synthetic.hpp"
#include "memqa/trainset.hpp"
#include "memqa/world.hpp"

namespace {

using namespace memqa;

namespace fs = std::filesystem;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
}

// gen-synthetic ---------------------------------------------------------------

struct GenArgs {
  std::string spec_path;
  std::string out_dir;
  int64_t seed = -1;
  int64_t entities = -1;
  int64_t instances = -1;
  int64_t train_edits = -1;
  double edit_rate = -1.0;
};

int cmd_gen_synthetic(const GenArgs& args) {
  WorldSpec spec;
  if (!args.spec_path.empty()) spec = load_world_spec(args.spec_path);
  if (args.seed >= 0) spec.seed = static_cast<uint64_t>(args.seed);
  if (args.entities >= 0) spec.entity_count = static_cast<size_t>(args.entities);
  if (args.instances >= 0) spec.instance_count = static_cast<size_t>(args.instances);
  if (args.train_edits >= 0) spec.train_edit_count = static_cast<size_t>(args.train_edits);
  if (args.edit_rate >= 0.0) spec.edit_rate = args.edit_rate;
  spec.validate();

  SyntheticWorld world = generate_world(spec);
  fs::create_directories(args.out_dir);
  fs::path dir(args.out_dir);
  save_dataset(world.instances, (dir / "dataset.json").string());
  save_kb(world.kb, (dir / "kb.json").string());
  save_templates(world.relations.statement_templates(), (dir / "templates.json").string());
  save_world(world.relations, (dir / "world.json").string());
  save_edit_facts(world.train_edits, (dir / "train_edits.json").string());

  size_t edit_total = 0;
  for (const MultiHopInstance& inst : world.instances) edit_total += inst.edits.size();
  std::cout << "generated " << world.instances.size() << " instances (" << edit_total
            << " edits), " << world.kb.fact_count() << " KB facts, " << world.train_edits.size()
            << " train edits -> " << args.out_dir << "\n";
  return 0;
}

// providers ------------------------------------------------------------------

struct ProviderArgs {
  std::string endpoint;
  std::string model;
  int64_t timeout_seconds = 60;
  bool chat_mode = false;
};

std::unique_ptr<HttpProvider> make_http_provider(const ProviderArgs& args) {
  if (args.endpoint.empty()) {
    throw ConfigError("the http provider needs --endpoint");
  }
  HttpProviderConfig cfg;
  cfg.base_url = args.endpoint;
  cfg.model = args.model;
  cfg.timeout_seconds = static_cast<int>(args.timeout_seconds);
  cfg.chat_mode = args.chat_mode;
  if (const char* key = std::getenv(kApiKeyEnvVar); key != nullptr) cfg.api_key = key;
  return std::make_unique<HttpProvider>(std::move(cfg));
}

// build-trainset ---------------------------------------------------------------

struct TrainsetArgs {
  std::string edits_path;
  std::string world_path;
  std::string mode = "templated";
  std::vector<std::string> protected_datasets;
  std::string out_path;
  ProviderArgs provider;
};

int cmd_build_trainset(const TrainsetArgs& args) {
  std::vector<Fact> edits = load_edit_facts(args.edits_path);
  RelationVocabulary vocab = load_world(args.world_path);

  std::vector<Fact> protected_facts;
  for (const std::string& path : args.protected_datasets) {
    for (const MultiHopInstance& inst : load_dataset(path)) {
      for (const Fact& f : inst.original_chain()) protected_facts.push_back(f);
      for (const Fact& f : inst.edits) protected_facts.push_back(f);
    }
  }

  TrainsetMode mode;
  std::unique_ptr<HttpProvider> llm;
  if (args.mode == "templated") {
    mode = TrainsetMode::kTemplated;
  } else if (args.mode == "llm") {
    mode = TrainsetMode::kLlm;
    llm = make_http_provider(args.provider);
  } else {
    throw ConfigError("unknown trainset mode: " + args.mode);
  }

  TrainsetBuildStats stats;
  std::vector<TrainPair> pairs =
      build_trainset(edits, vocab, protected_facts, mode, llm.get(), &stats);
  save_trainset(pairs, args.out_path);

  std::cout << "trainset: " << stats.pairs << " pairs in " << stats.groups << " groups ("
            << stats.filtered_out << " edits filtered for protected (s,r)";
  if (stats.parse_failures > 0) std::cout << ", " << stats.parse_failures << " parse failures";
  std::cout << ") -> " << args.out_path << "\n";
  for (const std::string& failed : stats.failed_statements) {
    std::cerr << "unparsed generation for: " << failed << "\n";
  }
  return 0;
}

// train-detector ---------------------------------------------------------------

struct TrainArgs {
  std::string trainset_path;
  std::string role;
  std::string out_path;
  std::string history_path;
  double lr = -1.0;
  int64_t batch_size = -1;
  int64_t negatives = -1;
  int64_t epochs = -1;
  int64_t patience = -1;
  int64_t seed = -1;
  double val_split = -1.0;
  double weight_decay = -1.0;
  int64_t buckets = -1;
  int64_t dim = -1;
  int64_t encoder_seed = -1;
  int64_t init_seed = -1;
};

void write_history(const TrainResult& result, const std::string& path) {
  nlohmann::json history = nlohmann::json::array();
  for (const EpochStats& e : result.history) {
    history.push_back({{"epoch", e.epoch}, {"loss", e.loss}, {"sr", e.sr}, {"br", e.br}});
  }
  nlohmann::json j = {
      {"history", history},
      {"best_epoch", result.best_epoch},
      {"best_sr", result.best_sr},
      {"best_br", result.best_br},
      {"train_pairs", result.train_pairs},
      {"val_pairs", result.val_pairs},
      {"train_groups", result.train_groups},
      {"val_groups", result.val_groups},
  };
  write_text_file(path, j.dump(2) + "\n");
}

int cmd_train_detector(const TrainArgs& args) {
  std::vector<TrainPair> dataset = load_trainset(args.trainset_path);

  TrainConfig cfg;
  bool is_pre;
  if (args.role == "pre") {
    cfg = pre_detector_defaults();
    is_pre = true;
  } else if (args.role == "dis") {
    cfg = disambiguator_defaults();
    is_pre = false;
  } else {
    throw ConfigError("role must be 'pre' or 'dis', got '" + args.role + "'");
  }
  if (args.lr >= 0.0) cfg.learning_rate = args.lr;
  if (args.batch_size > 0) cfg.batch_size = static_cast<int>(args.batch_size);
  if (args.negatives > 0) cfg.negatives = static_cast<int>(args.negatives);
  if (args.epochs >= 0) cfg.max_epochs = static_cast<int>(args.epochs);
  if (args.patience > 0) cfg.patience = static_cast<int>(args.patience);
  if (args.seed >= 0) cfg.seed = static_cast<uint64_t>(args.seed);
  if (args.val_split > 0.0) cfg.val_split = args.val_split;
  if (args.weight_decay >= 0.0) cfg.weight_decay = args.weight_decay;

  EncoderConfig encoder;
  if (args.buckets > 0) encoder.buckets = static_cast<uint32_t>(args.buckets);
  if (args.dim > 0) encoder.dim = static_cast<uint32_t>(args.dim);
  if (args.encoder_seed >= 0) encoder.seed = static_cast<uint64_t>(args.encoder_seed);
  // The two roles hash with independent seeds unless overridden.
  if (args.encoder_seed < 0 && !is_pre) encoder.seed = encoder.seed * 2 + 1;

  TrainResult result;
  if (is_pre) {
    uint64_t init_seed =
        args.init_seed >= 0 ? static_cast<uint64_t>(args.init_seed) : cfg.seed * 7 + 13;
    DualEncoderModel model(encoder, init_seed);
    result = train(model, dataset, cfg);
    save_model(model, args.out_path);
  } else {
    JointClassifierModel model(encoder, /*agreement_prior=*/true);
    result = train(model, dataset, cfg);
    save_model(model, args.out_path);
  }
  std::string history_path =
      args.history_path.empty() ? args.out_path + ".history.json" : args.history_path;
  write_history(result, history_path);

  std::cout << "trained " << args.role << " detector: best epoch " << result.best_epoch
            << " SR=" << result.best_sr << " BR=" << result.best_br << " (" << result.train_pairs
            << " train / " << result.val_pairs << " val pairs) -> " << args.out_path << "\n";
  return 0;
}

// eval-detector ----------------------------------------------------------------

int cmd_eval_detector(const std::string& model_path, const std::string& trainset_path) {
  std::vector<TrainPair> val = load_trainset(trainset_path);
  SrBr stats;
  try {
    DualEncoderModel model = load_pre_model(model_path);
    stats = evaluate_sr_br(val, model);
  } catch (const CorruptArtifactError&) {
    JointClassifierModel model = load_dis_model(model_path);
    stats = evaluate_sr_br(val, model);
  }
  std::cout << "SR=" << stats.sr << " BR=" << stats.br << " (" << val.size() << " pairs)\n";
  return 0;
}

// build-memory -----------------------------------------------------------------

int cmd_build_memory(const std::string& edits_path, const std::string& templates_path,
                     const std::string& out_path) {
  std::vector<Fact> facts = load_edit_facts(edits_path);
  TemplateSet templates = load_templates(templates_path);
  std::vector<Edit> edits;
  edits.reserve(facts.size());
  for (const Fact& f : facts) edits.push_back(Edit::make(f, templates));
  EditMemory memory = build_memory(edits);
  save_memory(memory, out_path);
  std::cout << "memory: " << memory.size() << " entries, " << memory.replacements()
            << " replacements -> " << out_path << "\n";
  return 0;
}

// run ---------------------------------------------------------------------------

struct RunArgs {
  std::string config_path;
  std::string dataset_path;
  std::string kb_path;
  std::string templates_path;
  std::string world_path;
  std::string memory_path;  // fixed memory instead of batch edits
  std::string provider = "mock";
  std::string detector = "bundle";
  std::string bundle_path;
  std::string pre_model_path;
  std::string dis_model_path;
  std::string batch_size = "all";
  bool no_dis = false;
  bool no_gen = false;
  bool containment = false;
  int64_t seed = 1;
  int64_t max_hops = 5;
  int64_t max_tokens = 96;
  int64_t parallel = 4;
  std::string out_dir;
  bool dump_transcripts = false;
  ProviderArgs http;
};

// Values from --config fill every field the command line left untouched.
void merge_run_config(RunArgs& args, const CLI::App* cmd) {
  if (args.config_path.empty()) return;
  nlohmann::json j = read_json_file(args.config_path);
  auto unset = [&](const std::string& flag) { return cmd->count(flag) == 0; };
  auto fill_str = [&](const char* key, const char* flag, std::string& slot) {
    if (j.contains(key) && unset(flag)) slot = j.at(key).get<std::string>();
  };
  auto fill_int = [&](const char* key, const char* flag, int64_t& slot) {
    if (j.contains(key) && unset(flag)) slot = j.at(key).get<int64_t>();
  };
  auto fill_bool = [&](const char* key, const char* flag, bool& slot) {
    if (j.contains(key) && unset(flag)) slot = j.at(key).get<bool>();
  };
  fill_str("dataset", "--dataset", args.dataset_path);
  fill_str("kb", "--kb", args.kb_path);
  fill_str("templates", "--templates", args.templates_path);
  fill_str("world", "--world", args.world_path);
  fill_str("memory", "--memory", args.memory_path);
  fill_str("provider", "--provider", args.provider);
  fill_str("detector", "--detector", args.detector);
  fill_str("bundle", "--bundle", args.bundle_path);
  fill_str("pre_model", "--pre-model", args.pre_model_path);
  fill_str("dis_model", "--dis-model", args.dis_model_path);
  fill_str("batch_size", "--batch-size", args.batch_size);
  fill_bool("no_dis", "--no-dis", args.no_dis);
  fill_bool("no_gen", "--no-gen", args.no_gen);
  fill_bool("containment", "--containment", args.containment);
  fill_int("seed", "--seed", args.seed);
  fill_int("max_hops", "--max-hops", args.max_hops);
  fill_int("max_tokens", "--max-tokens", args.max_tokens);
  fill_int("parallel", "--parallel", args.parallel);
  fill_str("out_dir", "--out-dir", args.out_dir);
  fill_bool("dump_transcripts", "--dump-transcripts", args.dump_transcripts);
  fill_str("endpoint", "--endpoint", args.http.endpoint);
  fill_str("model", "--model", args.http.model);
  fill_int("timeout", "--timeout", args.http.timeout_seconds);
  fill_bool("chat", "--chat", args.http.chat_mode);
}

size_t parse_batch_size(const std::string& text, size_t total) {
  if (text == "all") return total == 0 ? 1 : total;
  try {
    long long v = std::stoll(text);
    if (v < 1) throw ConfigError("batch size must be >= 1 or 'all'");
    return static_cast<size_t>(v);
  } catch (const std::invalid_argument&) {
    throw ConfigError("batch size must be a number or 'all', got '" + text + "'");
  }
}

class OracleRetriever : public EditRetriever {
 public:
  OracleRetriever(PairScorer scorer, bool use_dis)
      : scorer_(std::move(scorer)), use_dis_(use_dis) {}
  RetrievalOutcome retrieve(const EditMemory& memory,
                            const std::string& question) const override {
    RetrieveOptions options;
    options.use_disambiguator = use_dis_;
    return memqa::retrieve(memory, question, scorer_, scorer_, options);
  }

 private:
  PairScorer scorer_;
  bool use_dis_;
};

int cmd_run(RunArgs& args, const CLI::App* cmd) {
  merge_run_config(args, cmd);
  if (args.dataset_path.empty()) throw ConfigError("run needs --dataset");
  if (args.kb_path.empty()) throw ConfigError("run needs --kb");
  if (args.templates_path.empty()) throw ConfigError("run needs --templates");
  if (args.out_dir.empty()) throw ConfigError("run needs --out-dir");

  std::vector<MultiHopInstance> instances = load_dataset(args.dataset_path);
  BaseKB kb = load_kb(args.kb_path);
  TemplateSet templates = load_templates(args.templates_path);

  std::optional<RelationVocabulary> vocab;
  if (!args.world_path.empty()) vocab = load_world(args.world_path);

  std::unique_ptr<CompletionProvider> provider;
  if (args.provider == "mock") {
    if (!vocab) throw ConfigError("the mock provider needs --world");
    provider =
        std::make_unique<MockProvider>(*vocab, kb, QuestionIndex::from_instances(instances));
  } else if (args.provider == "http") {
    provider = make_http_provider(args.http);
  } else {
    throw ConfigError("unknown provider: " + args.provider);
  }

  std::unique_ptr<DetectorBundle> bundle;
  std::unique_ptr<EditRetriever> retriever;
  if (args.detector == "bundle") {
    if (!args.bundle_path.empty()) {
      bundle = std::make_unique<DetectorBundle>(load_bundle(args.bundle_path));
    } else if (!args.pre_model_path.empty() && !args.dis_model_path.empty()) {
      bundle = std::make_unique<DetectorBundle>(
          load_bundle_parts(args.pre_model_path, args.dis_model_path));
    } else {
      throw ConfigError("detector 'bundle' needs --bundle or --pre-model/--dis-model");
    }
    retriever = std::make_unique<BundleRetriever>(*bundle, !args.no_dis);
  } else if (args.detector == "oracle") {
    if (!vocab) throw ConfigError("detector 'oracle' needs --world");
    retriever = std::make_unique<OracleRetriever>(oracle_scorer(*vocab), !args.no_dis);
  } else if (args.detector == "none") {
    retriever = std::make_unique<NullRetriever>();
  } else {
    throw ConfigError("unknown detector: " + args.detector +
                      " (expected bundle, oracle, or none)");
  }

  Gazetteer gazetteer = Gazetteer::from_kb(kb);

  RunOptions options;
  options.session.max_hops = static_cast<int>(args.max_hops);
  options.session.max_tokens = static_cast<int>(args.max_tokens);
  options.session.enable_knowledge_prompt = !args.no_gen;
  options.session.enable_disambiguator = !args.no_dis;
  options.session.model = args.http.model;
  options.match.containment = args.containment;
  options.seed = static_cast<uint64_t>(args.seed);
  options.parallelism = static_cast<int>(args.parallel);
  options.collect_transcripts = args.dump_transcripts;
  options.batch_size = parse_batch_size(args.batch_size, instances.size());

  // Fixed-memory mode: every instance runs against the file's edits.
  std::vector<MultiHopInstance> effective = instances;
  if (!args.memory_path.empty()) {
    EditMemory memory = load_memory(args.memory_path, templates);
    for (MultiHopInstance& inst : effective) inst.edits.clear();
    if (!effective.empty()) {
      for (const Edit& e : memory.entries()) effective.front().edits.push_back(e.fact);
    }
    options.batch_size = effective.empty() ? 1 : effective.size();
  }

  options.config_echo = {
      {"dataset", args.dataset_path},
      {"kb", args.kb_path},
      {"templates", args.templates_path},
      {"provider", args.provider},
      {"detector", args.detector},
      {"batch_size", args.batch_size},
      {"no_dis", args.no_dis ? "true" : "false"},
      {"no_gen", args.no_gen ? "true" : "false"},
      {"containment", args.containment ? "true" : "false"},
      {"seed", std::to_string(args.seed)},
      {"max_hops", std::to_string(args.max_hops)},
      {"max_tokens", std::to_string(args.max_tokens)},
  };

  RunOutput output = run_instances(effective, templates, kb, args.no_gen ? nullptr : &gazetteer,
                                   *retriever, *provider, PromptPack::standard(), options);

  fs::create_directories(args.out_dir);
  fs::path dir(args.out_dir);
  save_results(output.results, (dir / "results.json").string());
  write_text_file((dir / "report.json").string(), emit_report(output.report, ReportFormat::kJson));
  write_text_file((dir / "report.txt").string(), emit_report(output.report, ReportFormat::kTable));
  if (args.dump_transcripts) {
    std::ofstream out(dir / "transcripts.jsonl");
    for (const std::string& t : output.transcripts_json) out << t << "\n";
  }
  std::cout << emit_report(output.report, ReportFormat::kTable);
  return 0;
}

// evaluate / report --------------------------------------------------------------

int cmd_evaluate(const std::string& results_path, bool containment, const std::string& format,
                 const std::string& out_path, bool update_results) {
  std::vector<InstanceResult> results = load_results(results_path);
  MatchOptions options;
  options.containment = containment;
  Report report = build_report(results, options);
  std::string rendered = emit_report(report, report_format_from_string(format));
  if (!out_path.empty()) write_text_file(out_path, rendered);
  if (update_results) save_results(results, results_path);
  std::cout << rendered;
  return 0;
}

int cmd_report(const std::string& results_path, const std::string& format,
               const std::string& out_path, bool breakdown) {
  std::vector<InstanceResult> results = load_results(results_path);
  Report report = build_report(results, MatchOptions{});
  if (!breakdown) report.by_hops.clear();
  std::string rendered = emit_report(report, report_format_from_string(format));
  if (!out_path.empty()) write_text_file(out_path, rendered);
  std::cout << rendered;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memqa: memory-based knowledge editing workbench for multi-hop QA"};
  app.require_subcommand(1);
  std::function<int()> task;

  auto gen_args = std::make_shared<GenArgs>();
  CLI::App* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic world");
  gen->add_option("--spec", gen_args->spec_path, "World spec JSON");
  gen->add_option("--out-dir", gen_args->out_dir, "Output directory")->required();
  gen->add_option("--seed", gen_args->seed, "Override the spec seed");
  gen->add_option("--entities", gen_args->entities, "Override entity count");
  gen->add_option("--instances", gen_args->instances, "Override instance count");
  gen->add_option("--train-edits", gen_args->train_edits, "Override train edit count");
  gen->add_option("--edit-rate", gen_args->edit_rate, "Override per-hop edit rate");
  gen->callback([&, gen_args]() { task = [gen_args]() { return cmd_gen_synthetic(*gen_args); }; });

  auto ts_args = std::make_shared<TrainsetArgs>();
  CLI::App* ts = app.add_subcommand("build-trainset", "Build detector training pairs");
  ts->add_option("--edits", ts_args->edits_path, "Edit pool JSON")->required();
  ts->add_option("--world", ts_args->world_path, "World file with relation phrasing")->required();
  ts->add_option("--mode", ts_args->mode, "templated or llm");
  ts->add_option("--protected-dataset", ts_args->protected_datasets,
                 "Datasets whose (s,r) keys must stay out of the trainset");
  ts->add_option("--out", ts_args->out_path, "Output trainset path")->required();
  ts->add_option("--endpoint", ts_args->provider.endpoint, "Completions endpoint (llm mode)");
  ts->add_option("--model", ts_args->provider.model, "Model name (llm mode)");
  ts->add_option("--timeout", ts_args->provider.timeout_seconds, "HTTP timeout seconds");
  ts->add_flag("--chat", ts_args->provider.chat_mode, "Use the chat completions shape");
  ts->callback([&, ts_args]() { task = [ts_args]() { return cmd_build_trainset(*ts_args); }; });

  auto tr_args = std::make_shared<TrainArgs>();
  CLI::App* tr = app.add_subcommand("train-detector", "Train the pre-detector or disambiguator");
  tr->add_option("--trainset", tr_args->trainset_path, "Trainset JSON")->required();
  tr->add_option("--role", tr_args->role, "pre or dis")->required();
  tr->add_option("--out", tr_args->out_path, "Model artifact path")->required();
  tr->add_option("--history", tr_args->history_path, "Metrics log path");
  tr->add_option("--lr", tr_args->lr, "Learning rate");
  tr->add_option("--batch-size", tr_args->batch_size, "Minibatch size");
  tr->add_option("--negatives", tr_args->negatives, "Negatives per positive");
  tr->add_option("--epochs", tr_args->epochs, "Max epochs");
  tr->add_option("--patience", tr_args->patience, "Early-stopping patience");
  tr->add_option("--seed", tr_args->seed, "Training seed");
  tr->add_option("--val-split", tr_args->val_split, "Validation fraction");
  tr->add_option("--weight-decay", tr_args->weight_decay, "Decoupled decay toward the init");
  tr->add_option("--buckets", tr_args->buckets, "Encoder bucket count (power of two)");
  tr->add_option("--dim", tr_args->dim, "Embedding width (pre role)");
  tr->add_option("--encoder-seed", tr_args->encoder_seed, "Feature hash seed");
  tr->add_option("--init-seed", tr_args->init_seed, "Weight init seed (pre role)");
  tr->callback([&, tr_args]() { task = [tr_args]() { return cmd_train_detector(*tr_args); }; });

  auto ev_model = std::make_shared<std::string>();
  auto ev_set = std::make_shared<std::string>();
  CLI::App* ev = app.add_subcommand("eval-detector", "Print SR/BR of a model on a trainset");
  ev->add_option("--model", *ev_model, "Model artifact")->required();
  ev->add_option("--trainset", *ev_set, "Validation pairs")->required();
  ev->callback(
      [&, ev_model, ev_set]() { task = [=]() { return cmd_eval_detector(*ev_model, *ev_set); }; });

  auto bm_edits = std::make_shared<std::string>();
  auto bm_templates = std::make_shared<std::string>();
  auto bm_out = std::make_shared<std::string>();
  CLI::App* bm = app.add_subcommand("build-memory", "Verbalize edits into an edit memory");
  bm->add_option("--edits", *bm_edits, "Edits JSON")->required();
  bm->add_option("--templates", *bm_templates, "Statement templates JSON")->required();
  bm->add_option("--out", *bm_out, "Memory output path")->required();
  bm->callback([&, bm_edits, bm_templates, bm_out]() {
    task = [=]() { return cmd_build_memory(*bm_edits, *bm_templates, *bm_out); };
  });

  auto run_args = std::make_shared<RunArgs>();
  CLI::App* run = app.add_subcommand("run", "Answer a dataset and score it");
  run->add_option("--config", run_args->config_path, "JSON config; flags win");
  run->add_option("--dataset", run_args->dataset_path, "Dataset JSON");
  run->add_option("--kb", run_args->kb_path, "Base KB JSON");
  run->add_option("--templates", run_args->templates_path, "Statement templates JSON");
  run->add_option("--world", run_args->world_path, "World file (mock provider, oracle detector)");
  run->add_option("--memory", run_args->memory_path, "Fixed edit memory file");
  run->add_option("--provider", run_args->provider, "mock or http");
  run->add_option("--detector", run_args->detector, "bundle, oracle, or none");
  run->add_option("--bundle", run_args->bundle_path, "Detector bundle manifest");
  run->add_option("--pre-model", run_args->pre_model_path, "Pre-detector artifact");
  run->add_option("--dis-model", run_args->dis_model_path, "Disambiguator artifact");
  run->add_option("--batch-size", run_args->batch_size, "Edit batch size or 'all'");
  run->add_flag("--no-dis", run_args->no_dis, "Disable the conflict disambiguator");
  run->add_flag("--no-gen", run_args->no_gen, "Disable the knowledge prompt");
  run->add_flag("--containment", run_args->containment, "Containment answer matching");
  run->add_option("--seed", run_args->seed, "Run seed");
  run->add_option("--max-hops", run_args->max_hops, "Hop budget per session");
  run->add_option("--max-tokens", run_args->max_tokens, "Per-call token budget");
  run->add_option("--parallel", run_args->parallel, "Concurrent sessions");
  run->add_option("--out-dir", run_args->out_dir, "Output directory");
  run->add_flag("--dump-transcripts", run_args->dump_transcripts, "Write transcripts.jsonl");
  run->add_option("--endpoint", run_args->http.endpoint, "Completions endpoint (http)");
  run->add_option("--model", run_args->http.model, "Model name (http)");
  run->add_option("--timeout", run_args->http.timeout_seconds, "HTTP timeout seconds");
  run->add_flag("--chat", run_args->http.chat_mode, "Use the chat completions shape");
  run->callback(
      [&, run_args, run]() { task = [run_args, run]() { return cmd_run(*run_args, run); }; });

  auto eval_results = std::make_shared<std::string>();
  auto eval_format = std::make_shared<std::string>("table");
  auto eval_out = std::make_shared<std::string>();
  auto eval_contain = std::make_shared<bool>(false);
  auto eval_update = std::make_shared<bool>(false);
  CLI::App* evaluate = app.add_subcommand("evaluate", "Re-score a saved results file");
  evaluate->add_option("--results", *eval_results, "Results JSON")->required();
  evaluate->add_option("--format", *eval_format, "table, json, or csv");
  evaluate->add_option("--out", *eval_out, "Write the report here");
  evaluate->add_flag("--containment", *eval_contain, "Containment answer matching");
  evaluate->add_flag("--update-results", *eval_update, "Rewrite the results with fresh flags");
  evaluate->callback([&, eval_results, eval_format, eval_out, eval_contain, eval_update]() {
    task = [=]() {
      return cmd_evaluate(*eval_results, *eval_contain, *eval_format, *eval_out, *eval_update);
    };
  });

  auto rep_results = std::make_shared<std::string>();
  auto rep_format = std::make_shared<std::string>("table");
  auto rep_out = std::make_shared<std::string>();
  auto rep_breakdown = std::make_shared<bool>(false);
  CLI::App* rep = app.add_subcommand("report", "Format a report from saved results");
  rep->add_option("--results", *rep_results, "Results JSON")->required();
  rep->add_option("--format", *rep_format, "table, json, or csv");
  rep->add_option("--out", *rep_out, "Write the report here");
  rep->add_flag("--breakdown-by-hops", *rep_breakdown, "Include the per-hop breakdown");
  rep->callback([&, rep_results, rep_format, rep_out, rep_breakdown]() {
    task = [=]() { return cmd_report(*rep_results, *rep_format, *rep_out, *rep_breakdown); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return task ? task() : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
