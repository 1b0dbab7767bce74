// Copyright 2026 The budgetctx Authors.
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

// Small text helpers shared by unitization, hashing embedders and metrics.

#ifndef BUDGETCTX_TEXT_HPP_
#define BUDGETCTX_TEXT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace budgetctx {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Bytes >= 0x80 are treated as word characters so UTF-8 words survive.
inline bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z') || u >= 0x80;
}

std::string_view trim(std::string_view s);

// Number of whitespace-separated tokens.
std::size_t count_words(std::string_view s);

// Lowercase, map every non-word byte to a separator, split. No stemming.
std::vector<std::string> normalize_tokens(std::string_view s);

// 64-bit FNV-1a, seeded by folding the seed into the offset basis.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0);

}  // namespace budgetctx

#endif  // BUDGETCTX_TEXT_HPP_
