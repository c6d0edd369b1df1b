#include "relnotes/summarizer.hpp"

#include "relnotes/error.hpp"
#include "relnotes/lsa.hpp"

namespace relnotes {

GeneratedSummary summarize(const std::vector<std::string>& sentences, Method method, std::size_t m,
                           const SummarizerOptions& options) {
  if (m == 0) throw ContractError("summarizer", "summary length m must be positive");
  if (method == Method::TextRankGlove && options.embeddings == nullptr) {
    throw ConfigError("summarizer", "textrank-glove needs pre-trained embeddings");
  }
  if (sentences.empty()) {
    GeneratedSummary empty;
    empty.method = method;
    empty.scores = std::vector<double>{};
    return empty;
  }

  std::vector<TokenizedSentence> tokens = tokenize_all(sentences, *options.stopwords);
  if (method == Method::Lsa) return lsa_summarize(tokens, m);

  RankConfig config = options.rank;
  SimilarityResources resources;
  TfidfModel tfidf;
  switch (method) {
    case Method::TextRankBow:
      config.similarity = Similarity::Overlap;
      break;
    case Method::TextRankTfidf:
      config.similarity = Similarity::TfidfCosine;
      tfidf = fit_tfidf(tokens);
      resources.tfidf = &tfidf;
      break;
    case Method::TextRankGlove:
      config.similarity = Similarity::GloveCosine;
      resources.embeddings = options.embeddings;
      break;
    case Method::Lsa:
      break;
  }
  return select_top_m(rank(build_graph(std::move(tokens), config, resources), config), m);
}

}  // namespace relnotes
