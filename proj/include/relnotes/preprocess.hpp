#pragma once

#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace relnotes {

/// A sentence split into the token views used downstream: `tokens` for
/// ROUGE with stopwords, `content_tokens` for similarity and embeddings,
/// `stemmed_tokens` for ROUGE matching.
struct TokenizedSentence {
  std::string raw;
  std::vector<std::string> tokens;
  std::vector<std::string> content_tokens;
  std::vector<std::string> stemmed_tokens;
};

class StopwordList {
 public:
  /// The built-in 170-word English list (mirrored in data/stopwords.txt).
  static const StopwordList& english();
  static StopwordList from_file(const std::filesystem::path& path);

  explicit StopwordList(std::vector<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> lookup_;
};

/// Case-insensitive glob patterns (`*` and `?`) matched against whole lines.
class DenyList {
 public:
  static const DenyList& defaults();
  static DenyList from_file(const std::filesystem::path& path);

  explicit DenyList(std::vector<std::string> patterns);

  bool matches(std::string_view line) const;
  const std::vector<std::string>& patterns() const noexcept { return patterns_; }

 private:
  std::vector<std::string> patterns_;
  std::vector<std::regex> compiled_;
};

/// Reads a one-entry-per-line config file; blank lines and `#` comments are skipped.
std::vector<std::string> read_pattern_file(const std::filesystem::path& path);

/// Strips markup and noise from release-note or commit text and splits it into
/// sentences. Removes HTML tags, URLs, `#123` references, sign-off trailers,
/// @mentions and markdown headline lines. Output sentences are trimmed,
/// single-spaced and non-empty. Idempotent.
std::vector<std::string> clean_text(std::string_view text);

/// Drops deny-listed lines and exact duplicates (first occurrence wins).
std::vector<std::string> filter_trivial(const std::vector<std::string>& lines,
                                        const DenyList& deny = DenyList::defaults());

/// Throws ContractError for empty or whitespace-only input.
TokenizedSentence tokenize(std::string_view sentence,
                           const StopwordList& stopwords = StopwordList::english());

std::vector<TokenizedSentence> tokenize_all(const std::vector<std::string>& sentences,
                                            const StopwordList& stopwords = StopwordList::english());

/// Martin Porter's 1980 suffix-stripping algorithm. Expects lowercase input;
/// words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace relnotes
