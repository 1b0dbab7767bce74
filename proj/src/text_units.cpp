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

#include "budgetctx/text_units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "budgetctx/error.hpp"
#include "budgetctx/features.hpp"
#include "budgetctx/text.hpp"

namespace budgetctx {
namespace {

constexpr std::string_view kAbbreviations[] = {"dr.", "mr.",  "mrs.", "ms.",
                                               "e.g.", "i.e.", "vs."};

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

// True when the whitespace-delimited token ending at `dot` is a known
// abbreviation.
bool is_abbreviation(std::string_view text, std::size_t floor, std::size_t dot) {
  if (text[dot] != '.') return false;
  std::size_t b = dot;
  while (b > floor && !is_space(text[b - 1])) --b;
  while (b < dot && !is_word_char(text[b])) ++b;  // leading "(" or quotes
  std::string token(text.substr(b, dot - b + 1));
  for (char& c : token) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations),
                   token) != std::end(kAbbreviations);
}

void require_text(const Document& doc) {
  if (trim(doc.text).empty()) {
    throw EmptyDocumentError("document '" + doc.id +
                             "' has no non-whitespace text");
  }
}

Unit make_unit(std::string_view text, CharSpan span, std::size_t index,
               const TokenCounter& counter) {
  Unit u;
  u.index = index;
  u.text = std::string(text.substr(span.start, span.end - span.start));
  u.token_cost = counter.count(u.text);
  u.span = span;
  return u;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as root so roots are component minima.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

TokenCounter TokenCounter::word_ratio(double tokens_per_word) {
  if (!(tokens_per_word > 0.0) || !std::isfinite(tokens_per_word)) {
    throw ValidationError("tokens_per_word must be a positive finite number");
  }
  TokenCounter c;
  c.mode_ = Mode::kWordRatio;
  c.tokens_per_word_ = tokens_per_word;
  return c;
}

TokenCounter TokenCounter::exact_plugin(CountFn fn) {
  if (!fn) throw ValidationError("exact_plugin token counter needs a function");
  TokenCounter c;
  c.mode_ = Mode::kExactPlugin;
  c.fn_ = std::move(fn);
  return c;
}

std::int64_t TokenCounter::count(std::string_view text) const {
  std::int64_t tokens;
  if (mode_ == Mode::kExactPlugin) {
    tokens = fn_(text);
  } else {
    // The epsilon keeps products like 10 * 1.3 = 13.000000000000002 at 13.
    const double raw = static_cast<double>(count_words(text)) * tokens_per_word_;
    tokens = static_cast<std::int64_t>(std::ceil(raw - 1e-9));
  }
  return std::max<std::int64_t>(tokens, 1);
}

std::string_view to_string(Unitization u) {
  switch (u) {
    case Unitization::kSentence:
      return "sentence";
    case Unitization::kSection:
      return "section";
    case Unitization::kWindow:
      return "window";
    case Unitization::kCluster:
      return "cluster";
  }
  return "unknown";
}

Unitization parse_unitization(std::string_view name) {
  for (auto u : {Unitization::kSentence, Unitization::kSection,
                 Unitization::kWindow, Unitization::kCluster}) {
    if (name == to_string(u)) return u;
  }
  throw ValidationError("unknown unitization '" + std::string(name) +
                        "' (expected sentence, section, window or cluster)");
}

std::size_t match_section_header(std::string_view text, std::size_t pos) {
  const std::size_t n = text.size();
  std::size_t p = pos;
  int words = 0;
  while (true) {
    if (p >= n || !is_upper(text[p])) return 0;
    while (p < n && (is_upper(text[p]) || text[p] == '-')) ++p;
    ++words;
    if (p < n && text[p] == ':') return words >= 2 ? p - pos : 0;
    if (p < n && text[p] == ' ') {
      while (p < n && text[p] == ' ') ++p;
      continue;
    }
    return 0;
  }
}

std::vector<CharSpan> split_sentences(std::string_view text) {
  std::vector<CharSpan> spans;
  const std::size_t n = text.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t start = kNone;

  auto flush = [&](std::size_t end) {
    if (start == kNone) return;
    while (end > start && is_space(text[end - 1])) --end;
    if (end > start) spans.push_back({start, end});
    start = kNone;
  };

  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < n && text[j] != '\n' && is_space(text[j])) ++j;
      if (j < n && text[j] == '\n') {
        flush(i);  // blank line
        i = j;
        continue;
      }
      if (j < n && match_section_header(text, j) > 0) flush(i);
      ++i;
      continue;
    }
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (start == kNone) start = i;
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    std::size_t k = i;
    while (k < n && is_terminator(text[k])) ++k;
    while (k < n && is_closer(text[k])) ++k;
    std::size_t w = k;
    while (w < n && is_space(text[w])) ++w;
    const bool boundary = (w == n) || (w > k && is_upper(text[w]));
    if (boundary && !is_abbreviation(text, start, i)) flush(k);
    i = k;
  }
  flush(n);
  return spans;
}

std::vector<Unit> unitize_sentences(const Document& doc,
                                    const TokenCounter& counter) {
  require_text(doc);
  const auto spans = split_sentences(doc.text);
  std::vector<Unit> units;
  units.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Unit u = make_unit(doc.text, spans[i], i, counter);
    u.members = {i};
    units.push_back(std::move(u));
  }
  return units;
}

std::vector<Unit> unitize_sections(const Document& doc,
                                   const TokenCounter& counter) {
  std::vector<Unit> units = unitize_sentences(doc, counter);
  std::string label;
  for (Unit& u : units) {
    const std::size_t len = match_section_header(doc.text, u.span.start);
    if (len > 0) label = doc.text.substr(u.span.start, len);
    u.section_label = label;
  }
  return units;
}

std::vector<Unit> unitize_windows(const Document& doc,
                                  const TokenCounter& counter,
                                  const WindowParams& params) {
  require_text(doc);
  if (params.base_words < 1) {
    throw ValidationError("window base_words must be >= 1");
  }
  if (!(params.overlap_fraction >= 0.0 && params.overlap_fraction < 1.0)) {
    throw ValidationError("window overlap_fraction must lie in [0, 1)");
  }
  const auto spans = split_sentences(doc.text);
  const std::size_t n = spans.size();
  std::vector<std::size_t> words(n);
  for (std::size_t i = 0; i < n; ++i) {
    words[i] = count_words(std::string_view(doc.text).substr(
        spans[i].start, spans[i].end - spans[i].start));
  }

  std::vector<Unit> units;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    std::size_t acc = 0;
    while (end < n) {
      acc += words[end++];
      if (acc >= params.base_words) break;
    }
    Unit u = make_unit(doc.text, {spans[start].start, spans[end - 1].end},
                       units.size(), counter);
    u.members.resize(end - start);
    std::iota(u.members.begin(), u.members.end(), start);
    units.push_back(std::move(u));
    if (end == n) break;

    const std::size_t count = end - start;
    auto overlap = static_cast<std::size_t>(
        std::ceil(params.overlap_fraction * static_cast<double>(count) - 1e-12));
    overlap = std::min(overlap, count - 1);
    start = end - overlap;
  }
  return units;
}

std::vector<Unit> unitize_clusters(const Document& doc,
                                   const TokenCounter& counter,
                                   const FeatureSet& sentence_features,
                                   const ClusterParams& params) {
  require_text(doc);
  if (!(params.decay_halflife > 0.0)) {
    throw ValidationError("cluster decay_halflife must be positive");
  }
  const auto spans = split_sentences(doc.text);
  const std::size_t n = spans.size();
  const auto& k = sentence_features.kernel;
  if (static_cast<std::size_t>(k.rows()) != n ||
      static_cast<std::size_t>(k.cols()) != n) {
    throw ShapeMismatchError("cluster unitization: kernel is " +
                             std::to_string(k.rows()) + "x" +
                             std::to_string(k.cols()) + " but document has " +
                             std::to_string(n) + " sentences");
  }

  DisjointSets sets(n);
  const bool decays = std::isfinite(params.decay_halflife);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double w = k(i, j);
      if (decays) {
        w *= std::exp2(-static_cast<double>(j - i) / params.decay_halflife);
      }
      if (w >= params.sim_threshold) sets.unite(i, j);
    }
  }

  // Roots are component minima, so visiting roots in index order orders
  // units by their earliest member.
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);

  std::vector<Unit> units;
  for (std::size_t root = 0; root < n; ++root) {
    const auto& members = groups[root];
    if (members.empty()) continue;
    Unit u;
    u.index = units.size();
    for (std::size_t m : members) {
      if (!u.text.empty()) u.text.push_back(' ');
      u.text.append(doc.text, spans[m].start, spans[m].end - spans[m].start);
    }
    u.token_cost = counter.count(u.text);
    u.span = {spans[members.front()].start, spans[members.back()].end};
    u.members = members;
    units.push_back(std::move(u));
  }
  return units;
}

}  // namespace budgetctx
