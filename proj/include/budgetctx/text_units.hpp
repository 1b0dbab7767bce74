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

// Segmentation of a document into costed, ordered candidate units.
//
// Four unitizations are provided: sentences, sentences labeled with their
// enclosing section header, overlapping sentence-aligned windows, and
// connected components of a proximity-decayed similarity graph.

#ifndef BUDGETCTX_TEXT_UNITS_HPP_
#define BUDGETCTX_TEXT_UNITS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace budgetctx {

struct FeatureSet;

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> reference;
  std::optional<std::string> query;
};

// Half-open byte range [start, end) into Document::text.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Unit {
  std::size_t index = 0;
  std::string text;
  std::int64_t token_cost = 1;
  CharSpan span;
  // Empty when the unitization carries no section information.
  std::string section_label;
  // Sentence ordinals covered by this unit, ascending.
  std::vector<std::size_t> members;

  friend bool operator==(const Unit&, const Unit&) = default;
};

// Estimates token cost of a text span.
//
// word_ratio: ceil(words * tokens_per_word), floored at 1.
// exact_plugin: delegates to a caller-supplied counter (e.g. a real BPE).
class TokenCounter {
 public:
  enum class Mode { kWordRatio, kExactPlugin };
  using CountFn = std::function<std::int64_t(std::string_view)>;

  TokenCounter() = default;
  static TokenCounter word_ratio(double tokens_per_word = 1.3);
  static TokenCounter exact_plugin(CountFn fn);

  std::int64_t count(std::string_view text) const;

  Mode mode() const { return mode_; }
  double tokens_per_word() const { return tokens_per_word_; }

 private:
  Mode mode_ = Mode::kWordRatio;
  double tokens_per_word_ = 1.3;
  CountFn fn_;
};

enum class Unitization { kSentence, kSection, kWindow, kCluster };

std::string_view to_string(Unitization u);
// Throws ValidationError on unknown names.
Unitization parse_unitization(std::string_view name);

struct WindowParams {
  std::size_t base_words = 50;
  double overlap_fraction = 0.25;
};

struct ClusterParams {
  double sim_threshold = 0.5;
  // Infinity disables the proximity decay.
  double decay_halflife = 5.0;
};

// Sentence boundaries as trimmed byte spans. Splits after [.!?] runs that
// are followed by whitespace and an uppercase letter, or by end of text;
// breaks hard on blank lines and before line-initial section headers.
// Common abbreviations (Dr., Mr., e.g., i.e., vs.) do not end a sentence.
std::vector<CharSpan> split_sentences(std::string_view text);

// Length of a section header label starting at `pos` (2+ uppercase words
// of letters/hyphens separated by spaces, terminated by ':'), or 0.
std::size_t match_section_header(std::string_view text, std::size_t pos);

std::vector<Unit> unitize_sentences(const Document& doc,
                                    const TokenCounter& counter);

std::vector<Unit> unitize_sections(const Document& doc,
                                   const TokenCounter& counter);

std::vector<Unit> unitize_windows(const Document& doc,
                                  const TokenCounter& counter,
                                  const WindowParams& params = {});

// `sentence_features` must be computed over unitize_sentences(doc).
std::vector<Unit> unitize_clusters(const Document& doc,
                                   const TokenCounter& counter,
                                   const FeatureSet& sentence_features,
                                   const ClusterParams& params = {});

}  // namespace budgetctx

#endif  // BUDGETCTX_TEXT_UNITS_HPP_
