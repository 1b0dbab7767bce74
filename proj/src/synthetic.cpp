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


#include "budgetctx/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "budgetctx/error.hpp"
#include "budgetctx/random.hpp"

namespace budgetctx::synthetic {
namespace {

constexpr std::size_t kPoolSize = 4000;
constexpr std::size_t kTopicWords = 24;
constexpr std::size_t kFillerWords = 300;
constexpr std::size_t kReferenceWords = 40;
// Share of off-topic words mixed into a topical sentence.
constexpr double kNoise = 0.2;

using Words = std::vector<std::string>;

// Pronounceable lowercase nonsense words, unique within the pool.
Words word_pool(std::uint64_t seed) {
  static const char* kOnsets[] = {"b", "c", "d", "f", "g", "h", "k", "l", "m", "n",
                                  "p", "r", "s", "t", "v", "z", "br", "cl", "dr",
                                  "gr", "pl", "st", "tr", "sh"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "io", "ou"};
  static const char* kCodas[] = {"", "", "n", "r", "s", "l", "x", "m", "nd", "st"};
  Rng rng(mix_seed(seed));
  std::set<std::string> seen;
  Words pool;
  while (pool.size() < kPoolSize) {
    std::string w;
    const std::uint64_t syllables = 2 + uniform_below(rng, 2);
    for (std::uint64_t s = 0; s < syllables; ++s) {
      w += kOnsets[uniform_below(rng, std::size(kOnsets))];
      w += kVowels[uniform_below(rng, std::size(kVowels))];
    }
    w += kCodas[uniform_below(rng, std::size(kCodas))];
    if (seen.insert(w).second) pool.push_back(std::move(w));
  }
  return pool;
}

struct DocVocab {
  std::vector<Words> topics;
  Words filler;
};

DocVocab draw_vocab(const Words& pool, std::size_t topics, Rng& rng) {
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  fisher_yates(std::span<std::size_t>(order), rng);
  DocVocab v;
  std::size_t next = 0;
  v.topics.resize(topics);
  for (auto& t : v.topics) {
    for (std::size_t k = 0; k < kTopicWords; ++k) t.push_back(pool[order[next++]]);
  }
  for (std::size_t k = 0; k < kFillerWords; ++k) v.filler.push_back(pool[order[next++]]);
  return v;
}

const std::string& pick(const Words& words, Rng& rng) {
  return words[uniform_below(rng, words.size())];
}

std::size_t sentence_length(const Shape& shape, Rng& rng) {
  return shape.min_words + uniform_below(rng, shape.max_words - shape.min_words + 1);
}

std::string capitalized(std::string w) {
  if (!w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

// A sentence on `topic` (nullptr for filler).
std::string sentence(const DocVocab& v, const Words* topic, std::size_t words,
                     Rng& rng) {
  std::string s;
  for (std::size_t k = 0; k < words; ++k) {
    const bool on_topic = topic != nullptr && uniform_unit(rng) >= kNoise;
    std::string w = on_topic ? pick(*topic, rng) : pick(v.filler, rng);
    if (k == 0) w = capitalized(std::move(w));
    if (k > 0) s.push_back(' ');
    s += w;
  }
  s.push_back('.');
  return s;
}

std::string reference_from(const std::vector<const Words*>& topics, Rng& rng) {
  std::string s;
  for (std::size_t k = 0; k < kReferenceWords; ++k) {
    const Words& t = *topics[k % topics.size()];
    std::string w = pick(t, rng);
    if (k % 10 == 0) w = capitalized(std::move(w));
    if (k > 0) s.push_back(' ');
    s += w;
    if (k % 10 == 9) s.push_back('.');
  }
  return s;
}

void check(const Shape& shape) {
  if (shape.documents == 0 || shape.sentences == 0) {
    throw ValidationError("synthetic shape needs documents and sentences");
  }
  if (shape.min_words == 0 || shape.min_words > shape.max_words) {
    throw ValidationError("synthetic shape needs 0 < min_words <= max_words");
  }
  if (!(shape.key_fraction > 0.0 && shape.key_fraction <= 1.0)) {
    throw ValidationError("key_fraction must lie in (0, 1]");
  }
  if (shape.topics == 0 || (shape.topics + 1) * kTopicWords + kFillerWords > kPoolSize) {
    throw ValidationError("unsupported topic count");
  }
}

std::string doc_id(const char* prefix, std::size_t d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, d);
  return buf;
}

// Key sentences at the front (or back) of each document.
Corpus positional(const Shape& shape, bool front, const char* name) {
  check(shape);
  const Words pool = word_pool(shape.seed);
  Rng rng(mix_seed(shape.seed + (front ? 1 : 2)));
  Corpus c;
  c.name = name;
  const auto keys = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(shape.key_fraction *
                                               static_cast<double>(shape.sentences))));
  for (std::size_t d = 0; d < shape.documents; ++d) {
    const DocVocab v = draw_vocab(pool, 1, rng);
    std::string text;
    for (std::size_t i = 0; i < shape.sentences; ++i) {
      const bool key = front ? i < keys : i >= shape.sentences - keys;
      if (i > 0) text.push_back(' ');
      text += sentence(v, key ? &v.topics[0] : nullptr, sentence_length(shape, rng), rng);
    }
    Document doc;
    doc.id = doc_id(name, d);
    doc.text = std::move(text);
    doc.reference = reference_from({&v.topics[0]}, rng);
    c.documents.push_back(std::move(doc));
  }
  return c;
}

}  // namespace

Corpus front_loaded(const Shape& shape) { return positional(shape, true, "front"); }

Corpus back_loaded(const Shape& shape) { return positional(shape, false, "back"); }

Corpus redundant(const Shape& shape) {
  check(shape);
  const Words pool = word_pool(shape.seed);
  Rng rng(mix_seed(shape.seed + 3));
  Corpus c;
  c.name = "redundant";
  constexpr std::size_t kDistinct = 5;
  for (std::size_t d = 0; d < shape.documents; ++d) {
    const DocVocab v = draw_vocab(pool, 1, rng);
    std::vector<std::vector<std::string>> bases;
    for (std::size_t b = 0; b < kDistinct; ++b) {
      std::vector<std::string> words;
      const std::size_t len = sentence_length(shape, rng);
      for (std::size_t k = 0; k < len; ++k) {
        words.push_back(b == 0 ? pick(v.topics[0], rng) : pick(v.filler, rng));
      }
      bases.push_back(std::move(words));
    }
    std::string text;
    for (std::size_t i = 0; i < shape.sentences; ++i) {
      auto words = bases[uniform_below(rng, kDistinct)];
      words[uniform_below(rng, words.size())] = pick(v.filler, rng);
      words[0] = capitalized(words[0]);
      if (i > 0) text.push_back(' ');
      for (std::size_t k = 0; k < words.size(); ++k) {
        if (k > 0) text.push_back(' ');
        text += words[k];
      }
      text.push_back('.');
    }
    Document doc;
    doc.id = doc_id("redundant", d);
    doc.text = std::move(text);
    doc.reference = reference_from({&v.topics[0]}, rng);
    c.documents.push_back(std::move(doc));
  }
  return c;
}

Corpus multi_topic(const Shape& shape) {
  check(shape);
  const Words pool = word_pool(shape.seed);
  Rng rng(mix_seed(shape.seed + 4));
  Corpus c;
  c.name = "multi";
  const std::size_t t = shape.topics;
  for (std::size_t d = 0; d < shape.documents; ++d) {
    const DocVocab v = draw_vocab(pool, t, rng);
    // Topic k gets a share proportional to t - k, split into two blocks that
    // are interleaved with the other topics' blocks.
    std::vector<std::size_t> share(t);
    const std::size_t weight_sum = t * (t + 1) / 2;
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < t; ++k) {
      share[k] = std::max<std::size_t>(1, shape.sentences * (t - k) / weight_sum);
      assigned += share[k];
    }
    share[0] += shape.sentences > assigned ? shape.sentences - assigned : 0;
    std::vector<std::size_t> blocks;  // topic per block, two blocks per topic
    for (std::size_t pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < t; ++k) blocks.push_back(k);
    }
    std::string text;
    bool first = true;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::size_t k = blocks[b];
      const std::size_t len = b < t ? (share[k] + 1) / 2 : share[k] / 2;
      for (std::size_t i = 0; i < len; ++i) {
        if (!first) text.push_back(' ');
        first = false;
        text += sentence(v, &v.topics[k], sentence_length(shape, rng), rng);
      }
    }
    std::vector<const Words*> topics;
    for (const auto& w : v.topics) topics.push_back(&w);
    Document doc;
    doc.id = doc_id("multi", d);
    doc.text = std::move(text);
    doc.reference = reference_from(topics, rng);
    c.documents.push_back(std::move(doc));
  }
  return c;
}

Corpus smoke() {
  static const char* kHeaders[] = {"HISTORY OF ILLNESS:", "HOSPITAL COURSE:",
                                   "DISCHARGE PLAN:"};
  Shape shape;
  shape.documents = 5;
  shape.sentences = 12;
  shape.topics = 3;
  shape.seed = 7;
  Corpus base = multi_topic(shape);
  Corpus c;
  c.name = "smoke";
  for (std::size_t d = 0; d < base.documents.size(); ++d) {
    // Re-flow into three headed sections of four sentences.
    const std::string& text = base.documents[d].text;
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '.') {
        sentences.push_back(text.substr(start, i + 1 - start));
        start = i + 2;
      }
    }
    std::string out;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      if (s % 4 == 0) {
        if (s > 0) out += "\n\n";
        out += kHeaders[(s / 4) % std::size(kHeaders)];
      }
      out += " " + sentences[s];
    }
    Document doc = base.documents[d];
    doc.id = doc_id("smoke", d);
    doc.text = std::move(out);
    c.documents.push_back(std::move(doc));
  }
  return c;
}

}  // namespace budgetctx::synthetic
