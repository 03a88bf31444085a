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

#ifndef MEMQA_RETRIEVAL_HPP_
#define MEMQA_RETRIEVAL_HPP_

#include <memory>
#include <optional>
#include <string>

#include "memqa/detector.hpp"
#include "memqa/knowledge.hpp"

namespace memqa {

// Trained pre-detector plus conflict disambiguator with the shared
// decision threshold.
struct DetectorBundle {
  DualEncoderModel pre;
  JointClassifierModel dis;
  double threshold = 0.5;

  DetectorBundle(DualEncoderModel pre_model, JointClassifierModel dis_model)
      : pre(std::move(pre_model)), dis(std::move(dis_model)) {}
};

enum class HitStage { kPreUnique, kDisambiguated };

struct RetrievalHit {
  size_t position = 0;  // entry position in the memory
  double score = 0.0;
  HitStage stage = HitStage::kPreUnique;
};

struct RetrievalOutcome {
  std::optional<RetrievalHit> hit;
  size_t pre_candidates = 0;    // |Z|
  size_t dis_survivors = 0;     // |F|
  size_t dis_predictions = 0;   // disambiguator scoring calls
  bool degenerate_query = false;
};

struct RetrieveOptions {
  double threshold = 0.5;
  // When false the disambiguation stage is skipped and a non-empty
  // candidate set resolves by the highest pre-detector score.
  bool use_disambiguator = true;
};

// Two-stage edited fact retrieval. Stage one keeps candidates the
// pre-detector scores at or above the threshold; a unique candidate
// returns immediately. Otherwise the disambiguator scores the survivors
// and the best one above threshold wins, ties broken by the lowest
// memory position. An empty stage leaves no hit.
RetrievalOutcome retrieve(const EditMemory& memory, const std::string& question,
                          const PairScorer& pre, const PairScorer& dis,
                          const RetrieveOptions& options = {});

RetrievalOutcome retrieve(const EditMemory& memory, const std::string& question,
                          const DetectorBundle& bundle, bool use_disambiguator = true);

// Retrieval hook for the orchestrator: bundle-backed, oracle, stub, or
// disabled implementations all satisfy it.
class EditRetriever {
 public:
  virtual ~EditRetriever() = default;
  virtual RetrievalOutcome retrieve(const EditMemory& memory,
                                    const std::string& question) const = 0;
};

class BundleRetriever : public EditRetriever {
 public:
  BundleRetriever(const DetectorBundle& bundle, bool use_disambiguator = true)
      : bundle_(bundle), use_disambiguator_(use_disambiguator) {}
  RetrievalOutcome retrieve(const EditMemory& memory,
                            const std::string& question) const override {
    return memqa::retrieve(memory, question, bundle_, use_disambiguator_);
  }

 private:
  const DetectorBundle& bundle_;
  bool use_disambiguator_;
};

// Never hits; models a run without any conflict detection.
class NullRetriever : public EditRetriever {
 public:
  RetrievalOutcome retrieve(const EditMemory& memory,
                            const std::string& question) const override;
};

// Model artifacts -----------------------------------------------------------
//
// On disk a model is a single-line JSON header followed by a
// little-endian float32 weight blob whose length the header declares.

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kBundleFormatVersion = 1;

void save_model(const DualEncoderModel& model, const std::string& path);
void save_model(const JointClassifierModel& model, const std::string& path);
DualEncoderModel load_pre_model(const std::string& path);
JointClassifierModel load_dis_model(const std::string& path);

// A bundle is a JSON manifest naming the two model artifacts, stored next
// to it as <stem>.pre.bin and <stem>.dis.bin.
void save_bundle(const DetectorBundle& bundle, const std::string& manifest_path);
DetectorBundle load_bundle(const std::string& manifest_path);
DetectorBundle load_bundle_parts(const std::string& pre_path, const std::string& dis_path,
                                 double threshold = 0.5);

}  // namespace memqa

#endif  // MEMQA_RETRIEVAL_HPP_
