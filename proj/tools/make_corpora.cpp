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


// Writes the bundled synthetic corpora as JSONL into a directory.

#include <filesystem>
#include <iostream>
#include <string>

#include "budgetctx/bench.hpp"
#include "budgetctx/report.hpp"
#include "budgetctx/synthetic.hpp"

int main(int argc, char** argv) {
  namespace syn = budgetctx::synthetic;
  if (argc != 2) {
    std::cerr << "usage: make_corpora <output-dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  try {
    std::filesystem::create_directories(dir);
    const std::pair<const char*, budgetctx::Corpus> corpora[] = {
        {"smoke.jsonl", syn::smoke()},
        {"front_loaded.jsonl", syn::front_loaded()},
        {"back_loaded.jsonl", syn::back_loaded()},
        {"redundant.jsonl", syn::redundant()},
        {"multi_topic.jsonl", syn::multi_topic()},
    };
    for (const auto& [name, corpus] : corpora) {
      budgetctx::write_file_atomic(dir / name, budgetctx::corpus_to_jsonl(corpus));
      std::cout << (dir / name).string() << ": " << corpus.documents.size()
                << " documents\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
