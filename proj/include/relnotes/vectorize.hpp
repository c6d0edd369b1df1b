#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relnotes/preprocess.hpp"

namespace relnotes {

using DenseVector = std::vector<double>;
/// Term -> weight, ordered so iteration (and therefore summation) is deterministic.
using SparseVector = std::map<std::string, double, std::less<>>;

/// Shared distinct content tokens over ln|a| + ln|b|, |.| counting content
/// tokens. Zero when either side is empty or the denominator is not positive.
double overlap_similarity(const TokenizedSentence& a, const TokenizedSentence& b);

/// Sentence-level document frequencies over content tokens.
class TfidfModel {
 public:
  std::size_t num_sentences() const noexcept { return num_sentences_; }
  /// Number of sentences containing `word`; 0 when unseen.
  std::size_t doc_freq(std::string_view word) const;
  /// ln(N / df); 0 for unseen words.
  double idf(std::string_view word) const;
  const std::map<std::string, std::size_t, std::less<>>& doc_freqs() const noexcept { return doc_freq_; }

 private:
  friend TfidfModel fit_tfidf(std::span<const TokenizedSentence> corpus);
  std::size_t num_sentences_ = 0;
  std::map<std::string, std::size_t, std::less<>> doc_freq_;
};

/// Throws ContractError on an empty corpus.
TfidfModel fit_tfidf(std::span<const TokenizedSentence> corpus);

/// (count / content-token total) * idf per word; zero-weight entries are omitted.
SparseVector tfidf_vector(const TokenizedSentence& sentence, const TfidfModel& model);

/// u.v / (|u||v|), 0 when either norm is 0. Throws DimensionError on length mismatch.
double cosine_similarity(std::span<const double> u, std::span<const double> v);
double cosine_similarity(const SparseVector& u, const SparseVector& v);

/// Pre-trained word vectors. Absent words read as the zero vector.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return index_.size(); }
  bool contains(std::string_view word) const;
  /// Returns the stored vector, or a zero vector of `dimension()` entries.
  std::span<const float> lookup(std::string_view word) const;
  /// Inserts `word` unless already present; returns false for duplicates.
  /// Throws DimensionError when the length differs from `dimension()`.
  bool add(std::string word, std::span<const float> vector);

  /// Lines rejected by the loader (wrong field count, bad numbers).
  std::size_t skipped_lines() const noexcept { return skipped_lines_; }

 private:
  friend EmbeddingStore load_embeddings(const std::filesystem::path&, std::optional<std::size_t>);
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dimension_;
  std::vector<float> data_;
  std::vector<float> zero_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::size_t skipped_lines_ = 0;
};

/// Reads the plain-text `word f1 ... fd` format. The dimension comes from
/// `expected_dim` or the first vector line; a leading "count dim" header is
/// skipped. Malformed lines are skipped unless they exceed 1% of all lines,
/// in which case DimensionError is thrown.
EmbeddingStore load_embeddings(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_dim = std::nullopt);

/// Mean of the content-token vectors; OOV tokens count as zeros in the mean.
DenseVector sentence_embedding(const TokenizedSentence& sentence, const EmbeddingStore& store);

}  // namespace relnotes
