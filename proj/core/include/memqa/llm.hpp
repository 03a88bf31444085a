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

#ifndef MEMQA_LLM_HPP_
#define MEMQA_LLM_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "memqa/knowledge.hpp"
#include "memqa/world.hpp"

namespace memqa {

enum class FinishReason { kStopSequence, kLength, kEnd };

std::string to_string(FinishReason reason);
FinishReason finish_reason_from_string(const std::string& s);

// Completions are requested greedily (temperature pinned to 0) so runs
// reproduce exactly.
struct CompletionRequest {
  std::string prompt;
  int max_tokens = 96;
  double temperature = 0.0;
  std::vector<std::string> stop;  // at most 4
  std::string model;

  void validate() const;
  bool operator==(const CompletionRequest& other) const = default;
};

struct Completion {
  std::string text;  // excludes the stop string when one fired
  FinishReason finish_reason = FinishReason::kEnd;

  bool operator==(const Completion& other) const = default;
};

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual Completion complete(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
};

// Deterministic reasoner backed by a base KB treated as parametric
// knowledge. It follows the decompose/answer/extract line protocol by
// reading the prompt tail: it never consults the edit memory, so edited
// hops only enter a session through injected answer lines.
class MockProvider : public CompletionProvider {
 public:
  MockProvider(RelationVocabulary vocab, BaseKB kb, QuestionIndex questions);

  Completion complete(const CompletionRequest& request) override;
  std::string name() const override { return "mock"; }

  // Untruncated greedy continuation; exposed for tests.
  std::string continuation(const std::string& prompt) const;

 private:
  std::shared_ptr<const RelationVocabulary> vocab_;
  std::shared_ptr<const TemplateSet> templates_;
  std::shared_ptr<const BaseKB> kb_;
  std::shared_ptr<const QuestionIndex> questions_;
};

// Remote OpenAI-style completions endpoint with retry/backoff.
struct HttpProviderConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8089/v1"
  std::string model;
  std::string api_key;
  int timeout_seconds = 60;
  bool chat_mode = false;  // POST /chat/completions with one user message
  int max_attempts = 5;
  int backoff_base_ms = 1000;
  double backoff_factor = 2.0;
};

class HttpProvider : public CompletionProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  Completion complete(const CompletionRequest& request) override;
  std::string name() const override { return "http"; }

 private:
  HttpProviderConfig config_;
  std::string host_;         // scheme://authority
  std::string path_prefix_;  // path portion of base_url
};

// Environment variable consulted for the API credential.
inline constexpr const char* kApiKeyEnvVar = "MEMQA_API_KEY";

// Append-only request/response log. Timestamps come from an injectable
// clock; deterministic runs use a logical counter so logs are
// byte-reproducible.
struct SessionLogRecord {
  uint64_t seq = 0;
  int64_t timestamp_ms = 0;
  CompletionRequest request;
  Completion response;
};

using Clock = std::function<int64_t()>;
Clock logical_clock();  // 0, 1, 2, ...
Clock wall_clock();

class SessionLog {
 public:
  void append(const CompletionRequest& request, const Completion& response, int64_t timestamp_ms);
  const std::vector<SessionLogRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }

  void save_jsonl(const std::string& path) const;
  static SessionLog load_jsonl(const std::string& path);  // throws Error on corrupt lines

 private:
  std::vector<SessionLogRecord> records_;
};

// Re-issues every logged request against the provider and compares
// responses. Returns the index of the first divergence, or -1 when the
// whole session reproduces.
int64_t replay_divergence(const SessionLog& log, CompletionProvider& provider);

// Provider decorator that records traffic into a log.
class LoggingProvider : public CompletionProvider {
 public:
  LoggingProvider(CompletionProvider& inner, SessionLog& log, Clock clock)
      : inner_(inner), log_(log), clock_(std::move(clock)) {}
  Completion complete(const CompletionRequest& request) override {
    Completion response = inner_.complete(request);
    log_.append(request, response, clock_());
    return response;
  }
  std::string name() const override { return inner_.name(); }

 private:
  CompletionProvider& inner_;
  SessionLog& log_;
  Clock clock_;
};

}  // namespace memqa

#endif  // MEMQA_LLM_HPP_
