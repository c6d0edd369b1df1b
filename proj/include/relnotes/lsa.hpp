#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relnotes/corpus.hpp"
#include "relnotes/preprocess.hpp"

namespace relnotes {

/// Terms x sentences, cell (t, j) = TF-IDF of term t in sentence j over the
/// sentences themselves. Terms are sorted; column j is input sentence j.
struct TermSentenceMatrix {
  std::vector<std::string> terms;
  Eigen::MatrixXd matrix;

  std::size_t sentence_count() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
};

/// Throws ContractError when no sentence has a content token.
TermSentenceMatrix build_matrix(std::span<const TokenizedSentence> sentences);

struct LsaScores {
  std::vector<double> scores;
  std::size_t rank = 0;   // numerical rank of the matrix
  std::size_t used = 0;   // singular triplets that entered the score
  bool degenerate = false;  // zero matrix, all scores 0
};

/// Sentence j scores sqrt(sum_{i < k} (sigma_i * V(j, i))^2) over the top
/// min(k, rank) singular triplets. Singular-vector signs cancel.
LsaScores lsa_scores(const Eigen::MatrixXd& matrix, std::size_t k);

/// Picks m sentences with k = m. When the matrix is zero (or no sentence has
/// content tokens) falls back to the first m sentences and flags the summary
/// as degenerate. Throws ContractError for m = 0.
GeneratedSummary lsa_summarize(std::span<const TokenizedSentence> sentences, std::size_t m);

}  // namespace relnotes
