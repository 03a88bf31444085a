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

#include "memqa/llm.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#ifdef MEMQA_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"
#include "memqa/protocol.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

constexpr const char* kUnknown = "unknown";

}  // namespace

std::string to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::kStopSequence:
      return "stop-sequence";
    case FinishReason::kLength:
      return "length";
    case FinishReason::kEnd:
      return "end";
  }
  return "end";
}

FinishReason finish_reason_from_string(const std::string& s) {
  if (s == "stop-sequence" || s == "stop") return FinishReason::kStopSequence;
  if (s == "length") return FinishReason::kLength;
  return FinishReason::kEnd;
}

void CompletionRequest::validate() const {
  if (temperature != 0.0) throw Error("completion temperature is pinned to 0");
  if (stop.size() > 4) throw Error("at most 4 stop sequences are supported");
  if (max_tokens < 1) throw Error("max_tokens must be >= 1");
}

// Mock reasoner ------------------------------------------------------------

MockProvider::MockProvider(RelationVocabulary vocab, BaseKB kb, QuestionIndex questions)
    : vocab_(std::make_shared<RelationVocabulary>(std::move(vocab))),
      kb_(std::make_shared<BaseKB>(std::move(kb))),
      questions_(std::make_shared<QuestionIndex>(std::move(questions))) {
  templates_ = std::make_shared<TemplateSet>(vocab_->statement_templates());
}

namespace {

// Parsed view of the active session, i.e. everything after the last
// Question line of the prompt.
struct SessionState {
  std::string question;
  std::vector<std::string> subquestions;
  std::vector<std::string> answers;      // completed Generated-answer lines
  std::vector<std::string> extractions;  // extracted entities
  std::string tail;                      // final, possibly partial, line
  bool found = false;
};

std::string line_content(const std::string& line, const char* prefix) {
  return trim(line.substr(std::string_view(prefix).size()));
}

SessionState parse_session(const std::string& prompt) {
  SessionState state;
  std::vector<std::string> lines = split_lines(prompt);
  if (!prompt.empty() && prompt.back() == '\n') {
    lines.push_back("");  // explicit empty tail: the next line starts fresh
  }
  size_t begin = lines.size();
  for (size_t i = lines.size(); i-- > 0;) {
    if (starts_with(lines[i], kQuestionPrefix) &&
        !starts_with(lines[i], kSubquestionPrefix)) {
      begin = i;
      break;
    }
  }
  if (begin == lines.size()) return state;
  state.found = true;
  state.question = line_content(lines[begin], kQuestionPrefix);
  for (size_t i = begin + 1; i + 1 < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (starts_with(line, kSubquestionPrefix)) {
      state.subquestions.push_back(line_content(line, kSubquestionPrefix));
    } else if (starts_with(line, kGeneratedAnswerPrefix)) {
      state.answers.push_back(line_content(line, kGeneratedAnswerPrefix));
    } else if (starts_with(line, kExtractionPrefix)) {
      state.extractions.push_back(line_content(line, kExtractionPrefix));
    }
  }
  state.tail = lines.empty() ? std::string() : lines.back();
  return state;
}

size_t count_words(const std::string& s) {
  size_t words = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = (c == ' ' || c == '\n' || c == '\t' || c == '\r');
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

// Byte position right after the n-th word, or npos if fewer words exist.
size_t position_after_words(const std::string& s, size_t n) {
  size_t words = 0;
  bool in_word = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool space = (c == ' ' || c == '\n' || c == '\t' || c == '\r');
    if (!space && !in_word) ++words;
    if (space && in_word && words == n) return i;
    in_word = !space;
  }
  if (in_word && words == n) return s.size();
  return std::string::npos;
}

}  // namespace

std::string MockProvider::continuation(const std::string& prompt) const {
  SessionState state = parse_session(prompt);
  if (!state.found) {
    return std::string(kFinalAnswerPrefix) + " " + kUnknown + "\n";
  }
  const QuestionPlan* plan = questions_->find(state.question);

  std::string out;
  // Resolves the answer statement for a subquestion from the KB alone.
  auto answer_statement = [&](const std::string& subq) -> std::string {
    auto parsed = vocab_->parse_subquestion(subq);
    if (!parsed) return kUnknown;
    auto object = kb_->lookup(parsed->first, parsed->second);
    if (!object) return kUnknown;
    Fact fact;
    fact.subject = Entity::of(parsed->first);
    fact.relation = parsed->second;
    fact.object = *object;
    return verbalize(fact, *templates_);
  };
  auto extract_entity = [&](const std::string& subq, const std::string& answer) -> std::string {
    if (auto parsed = vocab_->parse_subquestion(subq)) {
      if (auto fact = templates_->parse_statement(parsed->second, answer)) {
        return fact->object.label;
      }
    }
    if (auto fact = templates_->parse_statement_any(answer)) return fact->object.label;
    return kUnknown;
  };

  // Greedy rollout: finish the partial line, then keep emitting protocol
  // lines until the final answer. Callers truncate via stop sequences.
  bool mid_answer = trim(state.tail) == kGeneratedAnswerPrefix;
  bool mid_extract = trim(state.tail) == kExtractionPrefix;
  for (int guard = 0; guard < 64; ++guard) {
    if (mid_answer) {
      std::string subq = state.subquestions.empty() ? std::string() : state.subquestions.back();
      std::string stmt = answer_statement(subq);
      out += " " + stmt + "\n";
      state.answers.push_back(stmt);
      mid_answer = false;
      out += kExtractionPrefix;
      mid_extract = true;
      continue;
    }
    if (mid_extract) {
      std::string subq = state.subquestions.empty() ? std::string() : state.subquestions.back();
      std::string answer = state.answers.empty() ? std::string() : state.answers.back();
      std::string entity = extract_entity(subq, answer);
      out += " " + entity + "\n";
      state.extractions.push_back(entity);
      mid_extract = false;
      continue;
    }
    // Fresh line: next subquestion or the final answer.
    if (plan == nullptr) {
      out += std::string(kFinalAnswerPrefix) + " " + kUnknown + "\n";
      break;
    }
    size_t k = state.extractions.size();
    std::string current = k == 0 ? plan->start_subject : state.extractions.back();
    if (k < plan->relations.size()) {
      std::string subq = vocab_->render_subquestion(plan->relations[k], current);
      out += std::string(kSubquestionPrefix) + " " + subq + "\n";
      state.subquestions.push_back(subq);
      out += kGeneratedAnswerPrefix;
      mid_answer = true;
      continue;
    }
    out += std::string(kFinalAnswerPrefix) + " " + current + "\n";
    break;
  }
  return out;
}

Completion MockProvider::complete(const CompletionRequest& request) {
  request.validate();
  std::string text = continuation(request.prompt);

  size_t stop_pos = std::string::npos;
  for (const std::string& stop : request.stop) {
    if (stop.empty()) continue;
    size_t pos = text.find(stop);
    if (pos != std::string::npos && pos < stop_pos) stop_pos = pos;
  }
  size_t length_pos = std::string::npos;
  if (count_words(text) > static_cast<size_t>(request.max_tokens)) {
    length_pos = position_after_words(text, static_cast<size_t>(request.max_tokens));
  }

  Completion c;
  if (stop_pos != std::string::npos && (length_pos == std::string::npos || stop_pos <= length_pos)) {
    c.text = text.substr(0, stop_pos);
    c.finish_reason = FinishReason::kStopSequence;
  } else if (length_pos != std::string::npos) {
    c.text = text.substr(0, length_pos);
    c.finish_reason = FinishReason::kLength;
  } else {
    c.text = std::move(text);
    c.finish_reason = FinishReason::kEnd;
  }
  return c;
}

// HTTP provider -------------------------------------------------------------

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
  size_t path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) {
    host_ = url;
    path_prefix_.clear();
  } else {
    host_ = url.substr(0, path_begin);
    path_prefix_ = url.substr(path_begin);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

Completion HttpProvider::complete(const CompletionRequest& request) {
  request.validate();

  nlohmann::json body;
  std::string path;
  if (config_.chat_mode) {
    body = {{"max_tokens", request.max_tokens},
            {"messages", nlohmann::json::array({{{"content", request.prompt}, {"role", "user"}}})},
            {"model", request.model.empty() ? config_.model : request.model},
            {"stop", request.stop},
            {"temperature", request.temperature}};
    path = path_prefix_ + "/chat/completions";
  } else {
    body = {{"max_tokens", request.max_tokens},
            {"model", request.model.empty() ? config_.model : request.model},
            {"prompt", request.prompt},
            {"stop", request.stop},
            {"temperature", request.temperature}};
    path = path_prefix_ + "/completions";
  }
  std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  int attempts = std::max(1, config_.max_attempts);
  double backoff_ms = static_cast<double>(config_.backoff_base_ms);
  bool rate_limited = false;
  std::string last_error;

  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<int64_t>(backoff_ms)));
      backoff_ms *= config_.backoff_factor;
    }
    httplib::Client client(host_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    httplib::Result result = client.Post(path, headers, payload, "application/json");
    if (!result) {
      last_error = "connection failed: " + httplib::to_string(result.error());
      rate_limited = false;
      continue;  // retry on transport trouble
    }
    int status = result->status;
    if (status == 429 || status >= 500) {
      rate_limited = (status == 429);
      last_error = "http status " + std::to_string(status);
      continue;
    }
    if (status < 200 || status >= 300) {
      throw TransportError("completion endpoint returned status " + std::to_string(status));
    }

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("completion response is not JSON: ") + e.what());
    }
    try {
      const nlohmann::json& choice = j.at("choices").at(0);
      Completion c;
      if (config_.chat_mode) {
        c.text = choice.at("message").at("content").get<std::string>();
      } else {
        c.text = choice.at("text").get<std::string>();
      }
      c.finish_reason = finish_reason_from_string(choice.value("finish_reason", "stop"));
      return c;
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("completion response is missing fields: ") + e.what());
    }
  }
  if (rate_limited) {
    throw RateLimitedExhaustedError("rate limited after " + std::to_string(attempts) +
                                    " attempts");
  }
  throw TransportError("completion request failed after " + std::to_string(attempts) +
                       " attempts: " + last_error);
}

// Session log ---------------------------------------------------------------

Clock logical_clock() {
  auto counter = std::make_shared<int64_t>(0);
  return [counter]() { return (*counter)++; };
}

Clock wall_clock() {
  return []() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

void SessionLog::append(const CompletionRequest& request, const Completion& response,
                        int64_t timestamp_ms) {
  SessionLogRecord rec;
  rec.seq = records_.size();
  rec.timestamp_ms = timestamp_ms;
  rec.request = request;
  rec.response = response;
  records_.push_back(std::move(rec));
}

void SessionLog::save_jsonl(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write session log: " + path);
  for (const SessionLogRecord& rec : records_) {
    nlohmann::json j = {
        {"seq", rec.seq},
        {"t_ms", rec.timestamp_ms},
        {"request",
         {{"prompt", rec.request.prompt},
          {"max_tokens", rec.request.max_tokens},
          {"temperature", rec.request.temperature},
          {"stop", rec.request.stop},
          {"model", rec.request.model}}},
        {"response",
         {{"text", rec.response.text}, {"finish_reason", to_string(rec.response.finish_reason)}}},
    };
    out << j.dump() << "\n";
  }
}

SessionLog SessionLog::load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open session log: " + path);
  SessionLog log;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      CompletionRequest request;
      request.prompt = j.at("request").at("prompt").get<std::string>();
      request.max_tokens = j.at("request").at("max_tokens").get<int>();
      request.temperature = j.at("request").at("temperature").get<double>();
      request.stop = j.at("request").at("stop").get<std::vector<std::string>>();
      request.model = j.at("request").at("model").get<std::string>();
      Completion response;
      response.text = j.at("response").at("text").get<std::string>();
      response.finish_reason =
          finish_reason_from_string(j.at("response").at("finish_reason").get<std::string>());
      log.append(request, response, j.at("t_ms").get<int64_t>());
    } catch (const nlohmann::json::exception& e) {
      throw Error("corrupt session log line " + std::to_string(line_no) + " in " + path + ": " +
                  e.what());
    }
  }
  return log;
}

int64_t replay_divergence(const SessionLog& log, CompletionProvider& provider) {
  for (const SessionLogRecord& rec : log.records()) {
    Completion fresh = provider.complete(rec.request);
    if (!(fresh == rec.response)) return static_cast<int64_t>(rec.seq);
  }
  return -1;
}

}  // namespace memqa
