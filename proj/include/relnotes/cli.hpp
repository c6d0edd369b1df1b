#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relnotes/corpus.hpp"
#include "relnotes/preprocess.hpp"
#include "relnotes/rouge.hpp"
#include "relnotes/textrank.hpp"
#include "relnotes/vectorize.hpp"

namespace relnotes::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // data, I/O, git and validation errors
  kUsage = 2,    // bad flags or inconsistent configuration
  kAuth = 3,
  kRemote = 4,   // transport failures and exhausted rate limits
};

enum class Command { Harvest, Summarize, Evaluate, Bench };
enum class OutputFormat { Markdown, Json, Csv };

inline constexpr std::size_t kDefaultSentences = 5;

struct RunConfig {
  Command command = Command::Summarize;
  Method method = Method::TextRankGlove;
  std::optional<std::filesystem::path> embeddings_path;
  std::optional<std::size_t> sentences;
  OutputFormat output_format = OutputFormat::Markdown;
  RankConfig rank;
  RougeOptions rouge;
  std::optional<std::filesystem::path> deny_list_path;
  std::optional<std::filesystem::path> stopwords_path;
  unsigned jobs = 0;  // 0 picks the hardware concurrency

  /// Throws ConfigError (glove without embeddings, m = 0, bad rank knobs).
  void validate() const;
};

/// Files named by a RunConfig, loaded once and shared by every release.
struct Resources {
  std::optional<EmbeddingStore> embeddings;
  DenyList deny = DenyList::defaults();
  StopwordList stopwords = StopwordList::english();

  /// Loads embeddings only when `needs_embeddings`.
  static Resources load(const RunConfig& config, bool needs_embeddings);
};

/// Walks `from_tag..to_tag`, cleans the commit lines and renders the top
/// `config.sentences` (default 5) as markdown bullets or JSON.
std::string cmd_summarize(const std::filesystem::path& repo_path, const std::string& from_tag,
                          const std::string& to_tag, const RunConfig& config);

struct MethodScores {
  Method method;
  std::vector<RougeReport> per_release;  // aligned with the evaluated releases
  RougeReport mean;
};

struct EvaluationRun {
  ReleaseDataset dataset;  // releases that were scored (non-empty reference)
  std::size_t dropped_empty = 0;
  std::vector<MethodScores> methods;
};

/// Scores every method on every release with m = reference length. Releases
/// run concurrently; results keep dataset order.
EvaluationRun evaluate_methods(const ReleaseDataset& dataset, const std::vector<Method>& methods,
                               const RunConfig& config, const Resources& resources);

struct EvaluateOutput {
  std::string csv;        // header + one row per release
  std::string aggregate;  // one CSV-shaped row per method, project/tag = "*"
  std::size_t dropped_empty = 0;
};

EvaluateOutput cmd_evaluate(const std::filesystem::path& dataset_path, const RunConfig& config);

/// Runs lsa, textrank-tfidf and textrank-glove and renders a method x 9
/// score grid (rows sorted by method name) as markdown or CSV. The flag
/// configuration is printed alongside. ContractError on an empty dataset.
std::string cmd_bench(const std::filesystem::path& dataset_path, const RunConfig& config);

/// One-line description of every scoring-relevant flag.
std::string describe_config(const RunConfig& config);

/// Entry point behind the `relnotes` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relnotes::cli
