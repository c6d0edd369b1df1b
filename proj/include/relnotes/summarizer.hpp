#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "relnotes/corpus.hpp"
#include "relnotes/preprocess.hpp"
#include "relnotes/textrank.hpp"
#include "relnotes/vectorize.hpp"

namespace relnotes {

struct SummarizerOptions {
  /// Damping, tolerance and iteration cap; the similarity is chosen by the method.
  RankConfig rank;
  const EmbeddingStore* embeddings = nullptr;
  const StopwordList* stopwords = &StopwordList::english();
};

/// Selects min(m, n) source sentences with the given method and returns them
/// in source order. TF-IDF statistics are fitted on `sentences` alone.
/// Throws ContractError for m = 0 and ConfigError when textrank-glove has no
/// embedding store.
GeneratedSummary summarize(const std::vector<std::string>& sentences, Method method, std::size_t m,
                           const SummarizerOptions& options = {});

}  // namespace relnotes
