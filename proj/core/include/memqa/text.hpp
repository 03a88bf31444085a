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

#ifndef MEMQA_TEXT_HPP_
#define MEMQA_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace memqa {

// Canonical label normalization: ASCII lowercase, whitespace runs
// collapsed to single spaces, leading/trailing space removed, trailing
// punctuation stripped. Idempotent.
std::string normalize_label(std::string_view s);

// Lowercased alphanumeric tokens; every non-alphanumeric byte separates.
std::vector<std::string> tokenize(std::string_view s);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Splits on '\n'; keeps empty lines, drops a trailing '\r' per line.
std::vector<std::string> split_lines(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

// "a" or "an" chosen by the leading vowel letter of the following word.
std::string_view indefinite_article(std::string_view word);

// Seeded FNV-1a over the bytes of s.
uint64_t hash64(uint64_t seed, std::string_view s);

}  // namespace memqa

#endif  // MEMQA_TEXT_HPP_
