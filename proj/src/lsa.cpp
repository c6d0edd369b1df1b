#include "relnotes/lsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "relnotes/error.hpp"
#include "relnotes/textrank.hpp"
#include "relnotes/vectorize.hpp"

namespace relnotes {

TermSentenceMatrix build_matrix(std::span<const TokenizedSentence> sentences) {
  const bool any_content = std::any_of(sentences.begin(), sentences.end(),
                                       [](const TokenizedSentence& s) { return !s.content_tokens.empty(); });
  if (!any_content) throw ContractError("lsa", "all sentences are empty after preprocessing");

  const TfidfModel model = fit_tfidf(sentences);
  TermSentenceMatrix out;
  std::map<std::string_view, Eigen::Index> row;
  for (const auto& [term, _] : model.doc_freqs()) {
    row.emplace(term, static_cast<Eigen::Index>(out.terms.size()));
    out.terms.push_back(term);
  }
  out.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out.terms.size()),
                                     static_cast<Eigen::Index>(sentences.size()));
  for (std::size_t j = 0; j < sentences.size(); ++j) {
    for (const auto& [term, weight] : tfidf_vector(sentences[j], model)) {
      out.matrix(row.at(term), static_cast<Eigen::Index>(j)) = weight;
    }
  }
  return out;
}

LsaScores lsa_scores(const Eigen::MatrixXd& matrix, std::size_t k) {
  if (k == 0) throw ContractError("lsa", "k must be positive");
  LsaScores out;
  const auto n = static_cast<std::size_t>(matrix.cols());
  out.scores.assign(n, 0.0);
  if (matrix.size() == 0 || matrix.cwiseAbs().maxCoeff() == 0.0) {
    out.degenerate = true;
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(matrix.rows(), matrix.cols())) * sigma(0) *
                        std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++out.rank;
  }
  out.used = std::min(k, out.rank);

  // A singular value tied across the k cutoff spans a subspace with no
  // preferred basis; each tied triplet then enters with the fraction of the
  // remaining slots so scores do not depend on which basis the SVD returned.
  std::vector<double> weight(out.rank, 0.0);
  std::fill(weight.begin(), weight.begin() + static_cast<std::ptrdiff_t>(out.used), 1.0);
  if (out.used > 0 && out.used < out.rank) {
    const double tie = 1e-9 * sigma(0);
    const double edge = sigma(static_cast<Eigen::Index>(out.used - 1));
    std::size_t lo = out.used - 1, hi = out.used;
    while (lo > 0 && std::abs(sigma(static_cast<Eigen::Index>(lo - 1)) - edge) <= tie) --lo;
    while (hi < out.rank && std::abs(sigma(static_cast<Eigen::Index>(hi)) - edge) <= tie) ++hi;
    const double share = static_cast<double>(out.used - lo) / static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) weight[i] = share;
  }

  const Eigen::MatrixXd& v = svd.matrixV();
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < out.rank; ++i) {
      if (weight[i] == 0.0) continue;
      const double x = sigma(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      sum += weight[i] * x * x;
    }
    out.scores[j] = std::sqrt(sum);
  }
  return out;
}

GeneratedSummary lsa_summarize(std::span<const TokenizedSentence> sentences, std::size_t m) {
  if (m == 0) throw ContractError("lsa", "summary length m must be positive");
  GeneratedSummary summary;
  summary.method = Method::Lsa;

  LsaScores scored;
  const bool any_content = std::any_of(sentences.begin(), sentences.end(),
                                       [](const TokenizedSentence& s) { return !s.content_tokens.empty(); });
  if (any_content) {
    scored = lsa_scores(build_matrix(sentences).matrix, m);
  } else {
    scored.scores.assign(sentences.size(), 0.0);
    scored.degenerate = true;
  }
  summary.degenerate = scored.degenerate;
  // All-zero scores tie everywhere, so selection falls back to source order.
  summary.indices = top_m_indices(scored.scores, m);
  std::vector<double> picked;
  for (std::size_t i : summary.indices) {
    summary.sentences.push_back(sentences[i].raw);
    picked.push_back(scored.scores[i]);
  }
  summary.scores = std::move(picked);
  return summary;
}

}  // namespace relnotes
