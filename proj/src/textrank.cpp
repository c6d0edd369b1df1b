#include "relnotes/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relnotes/error.hpp"

namespace relnotes {

void RankConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("textrank", "damping must lie in (0, 1)");
  if (!(tolerance > 0.0)) throw ConfigError("textrank", "tolerance must be positive");
  if (max_iters <= 0) throw ConfigError("textrank", "max_iters must be positive");
}

Method method_for(Similarity similarity) noexcept {
  switch (similarity) {
    case Similarity::Overlap:
      return Method::TextRankBow;
    case Similarity::TfidfCosine:
      return Method::TextRankTfidf;
    case Similarity::GloveCosine:
      return Method::TextRankGlove;
  }
  return Method::TextRankBow;
}

SentenceGraph build_graph(std::vector<TokenizedSentence> sentences, const RankConfig& config,
                          const SimilarityResources& resources) {
  if (sentences.empty()) throw ContractError("textrank", "cannot build a graph without sentences");
  const std::size_t n = sentences.size();
  SentenceGraph graph;
  graph.similarity = config.similarity;
  graph.sim = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  auto fill = [&](auto&& weight) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = std::max(0.0, weight(i, j));
        graph.sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
        graph.sim(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
      }
    }
  };

  switch (config.similarity) {
    case Similarity::Overlap:
      fill([&](std::size_t i, std::size_t j) { return overlap_similarity(sentences[i], sentences[j]); });
      break;
    case Similarity::TfidfCosine: {
      if (resources.tfidf == nullptr) throw ConfigError("textrank", "tfidf-cosine similarity needs a TF-IDF model");
      std::vector<SparseVector> vecs;
      vecs.reserve(n);
      for (const auto& s : sentences) vecs.push_back(tfidf_vector(s, *resources.tfidf));
      fill([&](std::size_t i, std::size_t j) { return cosine_similarity(vecs[i], vecs[j]); });
      break;
    }
    case Similarity::GloveCosine: {
      if (resources.embeddings == nullptr) {
        throw ConfigError("textrank", "glove-cosine similarity needs an embedding store");
      }
      std::vector<DenseVector> vecs;
      vecs.reserve(n);
      for (const auto& s : sentences) vecs.push_back(sentence_embedding(s, *resources.embeddings));
      fill([&](std::size_t i, std::size_t j) { return cosine_similarity(vecs[i], vecs[j]); });
      break;
    }
  }
  graph.sentences = std::move(sentences);
  return graph;
}

RankResult rank_matrix(const Eigen::MatrixXd& weights, const RankConfig& config) {
  config.validate();
  const Eigen::Index n = weights.rows();
  if (weights.cols() != n) throw DimensionError("textrank", "similarity matrix must be square");

  Eigen::VectorXd out_weight = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != j) out_weight(j) += weights(j, k);
    }
  }

  const double d = config.damping;
  RankResult result;
  std::vector<double> current(static_cast<std::size_t>(n), 1.0);
  std::vector<double> next(current.size());
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    double delta = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double incoming = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i || out_weight(j) <= 0.0) continue;
        incoming += weights(j, i) / out_weight(j) * current[static_cast<std::size_t>(j)];
      }
      const double value = (1.0 - d) + d * incoming;
      delta = std::max(delta, std::abs(value - current[static_cast<std::size_t>(i)]));
      next[static_cast<std::size_t>(i)] = value;
    }
    current.swap(next);
    result.iterations = iter;
    if (delta < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(current);
  return result;
}

SentenceGraph rank(SentenceGraph graph, const RankConfig& config) {
  RankResult r = rank_matrix(graph.sim, config);
  graph.scores = std::move(r.scores);
  graph.iterations = r.iterations;
  graph.converged = r.converged;
  return graph;
}

std::vector<std::size_t> top_m_indices(std::span<const double> scores, std::size_t m) {
  if (m == 0) throw ContractError("summarizer", "summary length m must be positive");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(m, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

GeneratedSummary select_top_m(const SentenceGraph& graph, std::size_t m) {
  if (graph.scores.size() != graph.size()) throw ContractError("textrank", "graph has not been ranked");
  GeneratedSummary summary;
  summary.method = method_for(graph.similarity);
  summary.indices = top_m_indices(graph.scores, m);
  summary.converged = graph.converged;
  std::vector<double> picked;
  for (std::size_t i : summary.indices) {
    summary.sentences.push_back(graph.sentences[i].raw);
    picked.push_back(graph.scores[i]);
  }
  summary.scores = std::move(picked);
  return summary;
}

}  // namespace relnotes
