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

#ifndef MEMQA_ERRORS_HPP_
#define MEMQA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace memqa {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A statement template is missing for a relation.
class UnknownRelationError : public Error {
 public:
  explicit UnknownRelationError(const std::string& relation)
      : Error("no statement template for relation: " + relation), relation_(relation) {}
  const std::string& relation() const { return relation_; }

 private:
  std::string relation_;
};

// Neither the edit memory nor the base KB can resolve a hop.
class UnresolvableHopError : public Error {
 public:
  UnresolvableHopError(const std::string& subject, const std::string& relation)
      : Error("unresolvable hop: (" + subject + ", " + relation + ")") {}
};

// A text produced no features under the encoder tokenization.
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& text)
      : Error("text yields no features: \"" + text + "\"") {}
};

// Training data does not meet the minimum group requirement.
class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

class VersionMismatchError : public Error {
 public:
  explicit VersionMismatchError(const std::string& msg) : Error(msg) {}
};

class CorruptArtifactError : public Error {
 public:
  explicit CorruptArtifactError(const std::string& msg) : Error(msg) {}
};

// A gazetteer record has no membership fact.
class MissingMembershipError : public Error {
 public:
  explicit MissingMembershipError(const std::string& entity)
      : Error("gazetteer entity has no membership fact: " + entity) {}
};

// Dataset record failed validation; carries the offending record index.
class SchemaError : public Error {
 public:
  SchemaError(size_t record_index, const std::string& msg)
      : Error("record " + std::to_string(record_index) + ": " + msg),
        record_index_(record_index) {}
  size_t record_index() const { return record_index_; }

 private:
  size_t record_index_;
};

// Completion provider failures.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& msg) : Error(msg) {}
};

class RateLimitedExhaustedError : public Error {
 public:
  explicit RateLimitedExhaustedError(const std::string& msg) : Error(msg) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& msg) : Error(msg) {}
};

// Operating on a transcript that terminated as malformed.
class MalformedTranscriptError : public Error {
 public:
  explicit MalformedTranscriptError(const std::string& msg) : Error(msg) {}
};

class MissingGoldPathError : public Error {
 public:
  explicit MissingGoldPathError(const std::string& case_id)
      : Error("instance has no gold path: " + case_id) {}
};

// Invalid world specification for the synthetic generator.
class SpecError : public Error {
 public:
  explicit SpecError(const std::string& msg) : Error(msg) {}
};

// CLI / run configuration problems.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace memqa

#endif  // MEMQA_ERRORS_HPP_
