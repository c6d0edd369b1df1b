#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relnotes/corpus.hpp"
#include "relnotes/preprocess.hpp"

namespace relnotes {

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct RougeReport {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
};

enum class LcsMode {
  Summary,  // union-LCS over sentence pairs
  Whole,    // one LCS over the concatenated token streams
};

struct RougeOptions {
  bool include_stopwords = false;
  LcsMode lcs_mode = LcsMode::Summary;
};

/// Harmonic mean, 0 when recall + precision is 0.
double f_measure(double recall, double precision) noexcept;

/// Clipped n-gram overlap for n in {1, 2}; ContractError otherwise. A side
/// without n-grams yields all zeros.
RougeScore rouge_n(std::span<const std::string> reference, std::span<const std::string> generated, int n);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Whole-sequence ROUGE-L.
RougeScore rouge_l(std::span<const std::string> reference, std::span<const std::string> generated);

/// Summary-level ROUGE-L: for each reference sentence the union of its LCS
/// hits against every generated sentence, with hits clipped by token counts.
RougeScore rouge_l_summary(std::span<const std::vector<std::string>> reference,
                           std::span<const std::vector<std::string>> generated);

/// Stemmed tokens used for scoring one sentence under `options`.
std::vector<std::string> rouge_tokens(const TokenizedSentence& sentence, const RougeOptions& options);

/// Scores a summary against the record's reference note. ContractError when
/// the reference is empty or the summary is longer than the reference.
RougeReport evaluate_release(const ReleaseRecord& record, const GeneratedSummary& summary,
                             const RougeOptions& options = {},
                             const StopwordList& stopwords = StopwordList::english());

/// Field-wise arithmetic mean; ContractError on an empty list.
RougeReport aggregate(std::span<const RougeReport> reports);

std::string csv_header();
/// Scores are written as percentages with two decimals.
std::string csv_row(std::string_view project, std::string_view tag, std::string_view method,
                    const RougeReport& report);

}  // namespace relnotes
