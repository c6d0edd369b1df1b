#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "relnotes/corpus.hpp"
#include "relnotes/preprocess.hpp"
#include "relnotes/vectorize.hpp"

namespace relnotes {

enum class Similarity { Overlap, TfidfCosine, GloveCosine };

struct RankConfig {
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iters = 100;
  Similarity similarity = Similarity::Overlap;

  /// Throws ConfigError when a field is outside its documented range.
  void validate() const;
};

/// Borrowed resources needed by the TF-IDF and embedding similarities.
struct SimilarityResources {
  const TfidfModel* tfidf = nullptr;
  const EmbeddingStore* embeddings = nullptr;
};

/// Sentences as nodes of an undirected weighted graph. `sim` is symmetric
/// and non-negative with a unit diagonal; `scores` stays empty until ranked.
struct SentenceGraph {
  std::vector<TokenizedSentence> sentences;
  Eigen::MatrixXd sim;
  Similarity similarity = Similarity::Overlap;
  std::vector<double> scores;
  int iterations = 0;
  bool converged = false;

  std::size_t size() const noexcept { return sentences.size(); }
};

/// Fills the similarity matrix with the configured measure. Negative cosines
/// are clamped to 0. Throws ContractError for an empty sentence list and
/// ConfigError when the measure's resource is missing.
SentenceGraph build_graph(std::vector<TokenizedSentence> sentences, const RankConfig& config,
                          const SimilarityResources& resources = {});

/// Ranks nodes with the damped, weight-normalized recurrence
///   s_i = (1 - d) + d * sum_{j != i} w_ji / (sum_{k != j} w_jk) * s_j
/// starting from all ones, until the max-norm change drops below the
/// tolerance or `max_iters` sweeps ran. Nodes without outgoing weight
/// contribute nothing; self-loops are ignored.
SentenceGraph rank(SentenceGraph graph, const RankConfig& config);

/// The recurrence on a bare matrix, for callers that bring their own weights.
struct RankResult {
  std::vector<double> scores;
  int iterations = 0;
  bool converged = false;
};
RankResult rank_matrix(const Eigen::MatrixXd& weights, const RankConfig& config);

/// Indices of the min(m, n) highest scores, ties going to the earlier
/// position, returned in ascending (source) order. Throws ContractError for m = 0.
std::vector<std::size_t> top_m_indices(std::span<const double> scores, std::size_t m);

/// Throws ContractError for m = 0 or an unranked graph.
GeneratedSummary select_top_m(const SentenceGraph& graph, std::size_t m);

Method method_for(Similarity similarity) noexcept;

}  // namespace relnotes
