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

#include "memqa/retrieval.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "memqa/rng.hpp"
#include "support/oracles.hpp"

using namespace memqa;
using memqa::testing::hash_scorer;
using memqa::testing::retrieve_bruteforce;

namespace {

EditMemory memory_of(const std::vector<std::string>& subjects) {
  std::vector<Edit> edits;
  for (const std::string& s : subjects) {
    Fact f = Fact::of(s, "plays for", s + " target");
    edits.push_back(Edit{f, s + " plays for " + s + " target."});
  }
  return build_memory(edits);
}

PairScorer table_scorer(std::map<std::string, double> by_statement) {
  return [table = std::move(by_statement)](const std::string& t, const std::string&) {
    auto it = table.find(t);
    return it == table.end() ? 0.0 : it->second;
  };
}

}  // namespace

TEST_CASE("retrieve branch behavior") {
  SUBCASE("empty memory yields no hit") {
    EditMemory memory = build_memory({});
    RetrievalOutcome out = retrieve(memory, "Which team does X play for?", hash_scorer(1),
                                    hash_scorer(2));
    CHECK_FALSE(out.hit.has_value());
    CHECK(out.pre_candidates == 0);
    CHECK(out.dis_predictions == 0);
  }

  SUBCASE("a unique pre-stage candidate returns without consulting the disambiguator") {
    EditMemory memory = memory_of({"alpha", "beta", "gamma"});
    size_t dis_calls = 0;
    PairScorer pre = table_scorer({{memory.at(1).statement, 0.9}});
    PairScorer dis = [&dis_calls](const std::string&, const std::string&) {
      ++dis_calls;
      return 1.0;
    };
    RetrievalOutcome out = retrieve(memory, "whatever question", pre, dis);
    REQUIRE(out.hit.has_value());
    CHECK(out.hit->position == 1);
    CHECK(out.hit->stage == HitStage::kPreUnique);
    CHECK(out.pre_candidates == 1);
    CHECK(out.dis_predictions == 0);
    CHECK(dis_calls == 0);
  }

  SUBCASE("several candidates resolve by disambiguator argmax") {
    EditMemory memory = memory_of({"a", "b", "c", "d", "e"});
    PairScorer pre = table_scorer({{memory.at(0).statement, 0.8},
                                   {memory.at(2).statement, 0.7},
                                   {memory.at(4).statement, 0.9}});
    PairScorer dis = table_scorer({{memory.at(2).statement, 0.6},
                                   {memory.at(4).statement, 0.85}});
    RetrievalOutcome out = retrieve(memory, "q words", pre, dis);
    REQUIRE(out.hit.has_value());
    CHECK(out.hit->position == 4);
    CHECK(out.hit->stage == HitStage::kDisambiguated);
    CHECK(out.pre_candidates == 3);
    CHECK(out.dis_predictions == 3);
    CHECK(out.dis_survivors == 2);
  }

  SUBCASE("empty survivor set yields no hit") {
    EditMemory memory = memory_of({"a", "b"});
    PairScorer pre = [](const std::string&, const std::string&) { return 0.9; };
    PairScorer dis = [](const std::string&, const std::string&) { return 0.1; };
    RetrievalOutcome out = retrieve(memory, "q words", pre, dis);
    CHECK_FALSE(out.hit.has_value());
    CHECK(out.pre_candidates == 2);
    CHECK(out.dis_survivors == 0);
  }

  SUBCASE("disambiguator ties break to the lowest memory position") {
    EditMemory memory = memory_of({"a", "b", "c"});
    PairScorer pre = [](const std::string&, const std::string&) { return 0.9; };
    PairScorer dis = [](const std::string&, const std::string&) { return 0.7; };
    RetrievalOutcome out = retrieve(memory, "q words", pre, dis);
    REQUIRE(out.hit.has_value());
    CHECK(out.hit->position == 0);
  }

  SUBCASE("degenerate question is flagged, never scored") {
    EditMemory memory = memory_of({"a"});
    PairScorer boom = [](const std::string&, const std::string&) -> double {
      throw std::runtime_error("must not be called");
    };
    RetrievalOutcome out = retrieve(memory, "?!", boom, boom);
    CHECK(out.degenerate_query);
    CHECK_FALSE(out.hit.has_value());
  }
}

TEST_CASE("ablated selector takes the pre-detector argmax") {
  EditMemory memory = memory_of({"a", "b", "c"});
  PairScorer pre = table_scorer({{memory.at(0).statement, 0.7},
                                 {memory.at(1).statement, 0.95},
                                 {memory.at(2).statement, 0.7}});
  PairScorer dis = table_scorer({{memory.at(0).statement, 1.0}});
  RetrieveOptions options;
  options.use_disambiguator = false;
  RetrievalOutcome out = retrieve(memory, "q words", pre, dis, options);
  REQUIRE(out.hit.has_value());
  CHECK(out.hit->position == 1);
  CHECK(out.dis_predictions == 0);

  // And it matches the brute-force reading of that rule on random cases.
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    EditMemory m = memory_of([&] {
      std::vector<std::string> subjects;
      size_t n = rng.below(6);
      for (size_t i = 0; i < n; ++i) subjects.push_back("s" + std::to_string(i));
      return subjects;
    }());
    PairScorer p = hash_scorer(rng.next());
    PairScorer d = hash_scorer(rng.next());
    RetrievalOutcome got = retrieve(m, "some question", p, d, options);
    auto want = retrieve_bruteforce(m, "some question", p, d, false);
    CHECK(got.hit.has_value() == want.hit_pos.has_value());
    if (got.hit && want.hit_pos) CHECK(got.hit->position == *want.hit_pos);
  }
}

TEST_CASE("monotone threshold: raising one pre score never shrinks the candidate set") {
  EditMemory memory = memory_of({"a", "b", "c", "d"});
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    uint64_t salt = rng.next();
    size_t bumped = rng.below(4);
    PairScorer base = hash_scorer(salt);
    PairScorer raised = [&, salt](const std::string& t, const std::string& q) {
      double s = hash_scorer(salt)(t, q);
      if (t == memory.at(bumped).statement) s = std::min(1.0, s + 0.6);
      return s;
    };
    RetrievalOutcome before = retrieve(memory, "constant question", base, base);
    RetrievalOutcome after = retrieve(memory, "constant question", raised, base);
    CHECK(after.pre_candidates >= before.pre_candidates);
  }
}

TEST_CASE("model artifacts round trip and reject damage") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "memqa_model_io_test";
  fs::create_directories(dir);

  EncoderConfig cfg;
  cfg.buckets = 512;
  cfg.dim = 8;
  DualEncoderModel pre(cfg, 21);
  EncoderConfig dis_cfg;
  dis_cfg.buckets = 512;
  JointClassifierModel dis(dis_cfg);
  Rng rng(5);
  for (float& w : dis.weights()) w = static_cast<float>(rng.gaussian() * 0.1);
  dis.bias() = 0.25f;

  SUBCASE("round trip is score-identical on random pairs") {
    std::string pre_path = (dir / "pre.bin").string();
    std::string dis_path = (dir / "dis.bin").string();
    save_model(pre, pre_path);
    save_model(dis, dis_path);
    DualEncoderModel pre2 = load_pre_model(pre_path);
    JointClassifierModel dis2 = load_dis_model(dis_path);
    CHECK(pre2.weights() == pre.weights());
    CHECK(dis2.weights() == dis.weights());
    CHECK(dis2.bias() == dis.bias());
    static const char* vocab[] = {"kor", "vel", "dan", "mir", "sol", "tev"};
    for (int i = 0; i < 100; ++i) {
      std::string t = std::string(vocab[rng.below(6)]) + " " + vocab[rng.below(6)];
      std::string q = std::string(vocab[rng.below(6)]) + " " + vocab[rng.below(6)];
      CHECK(pre.score(t, q) == pre2.score(t, q));
      CHECK(dis.score(t, q) == dis2.score(t, q));
    }
  }

  SUBCASE("truncated blob is corrupt") {
    std::string path = (dir / "trunc.bin").string();
    save_model(pre, path);
    auto size = fs::file_size(path);
    fs::resize_file(path, size - 64);
    CHECK_THROWS_AS(load_pre_model(path), CorruptArtifactError);
  }

  SUBCASE("bumped format version mismatches") {
    std::string path = (dir / "version.bin").string();
    save_model(pre, path);
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    size_t pos = content.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    content.replace(pos, 18, "\"format_version\":9");
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    CHECK_THROWS_AS(load_pre_model(path), VersionMismatchError);
  }

  SUBCASE("role mixups are corrupt") {
    std::string path = (dir / "pre_as_dis.bin").string();
    save_model(pre, path);
    CHECK_THROWS_AS(load_dis_model(path), CorruptArtifactError);
  }

  SUBCASE("bundle manifest round trips") {
    DetectorBundle bundle(pre, dis);
    bundle.threshold = 0.5;
    std::string manifest = (dir / "bundle.json").string();
    save_bundle(bundle, manifest);
    DetectorBundle loaded = load_bundle(manifest);
    CHECK(loaded.pre.weights() == pre.weights());
    CHECK(loaded.dis.weights() == dis.weights());
    CHECK(loaded.threshold == 0.5);
  }
}
