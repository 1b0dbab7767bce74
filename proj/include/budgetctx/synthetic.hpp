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

// Deterministic synthetic corpora with a known placement of
// reference-bearing content, for directional experiments without
// restricted data.

#ifndef BUDGETCTX_SYNTHETIC_HPP_
#define BUDGETCTX_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "budgetctx/bench.hpp"

namespace budgetctx::synthetic {

struct Shape {
  std::size_t documents = 100;
  std::size_t sentences = 40;
  std::size_t min_words = 9;
  std::size_t max_words = 15;
  // Fraction of sentences that carry the reference topic (front/back loaded).
  double key_fraction = 0.2;
  // Topics per document (multi-topic).
  std::size_t topics = 4;
  std::uint64_t seed = 2026;
};

// Reference content in the first key_fraction of sentences.
Corpus front_loaded(const Shape& shape = {});
// Reference content in the last key_fraction of sentences.
Corpus back_loaded(const Shape& shape = {});
// Few distinct sentences, each repeated with light perturbation.
Corpus redundant(const Shape& shape = {});
// `topics` interleaved topic blocks of unequal size; the reference draws
// from every topic.
Corpus multi_topic(const Shape& shape = {});

// Five short multi-topic documents (the bundled smoke corpus).
Corpus smoke();

}  // namespace budgetctx::synthetic

#endif  // BUDGETCTX_SYNTHETIC_HPP_
