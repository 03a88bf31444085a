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

#ifndef MEMQA_PROTOCOL_HPP_
#define MEMQA_PROTOCOL_HPP_

namespace memqa {

// Line prefixes of the session protocol. Rendered lines are
// "<prefix> <content>"; a generation request may end exactly at a prefix
// so the model completes the line.
inline constexpr const char* kQuestionPrefix = "Question:";
inline constexpr const char* kEntityOfQuestionPrefix = "Entity of Question:";
inline constexpr const char* kSubquestionPrefix = "Subquestion:";
inline constexpr const char* kGeneratedAnswerPrefix = "Generated answer:";
inline constexpr const char* kExtractionPrefix =
    "According to Generated answer, the entity of Subquestion is:";
inline constexpr const char* kFinalAnswerPrefix = "Final answer:";

}  // namespace memqa

#endif  // MEMQA_PROTOCOL_HPP_
