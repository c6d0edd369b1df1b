#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relnotes/corpus.hpp"
#include "relnotes/preprocess.hpp"

namespace relnotes {

struct CommitInfo {
  std::string hash;
  std::vector<std::string> parents;
  std::string message;
  /// PR title fetched from a hosting API, used when a merge message has no body line.
  std::optional<std::string> pr_title;

  bool is_merge() const noexcept { return parents.size() >= 2; }
};

/// Read-only view of a local repository, driven through the `git` executable.
class GitRepository {
 public:
  /// Throws GitError when `root` is not inside a git work tree.
  explicit GitRepository(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Commit hash a tag points to, peeling annotated tags. UnknownTagError if absent.
  std::string resolve_tag(std::string_view tag) const;
  bool is_ancestor(std::string_view ancestor, std::string_view descendant) const;
  /// Commits reachable from `head` but not from `base` (all ancestors of
  /// `head` when `base` is empty), newest first.
  std::vector<CommitInfo> commits_between(std::string_view base, std::string_view head) const;

 private:
  std::string git(std::vector<std::string> args) const;
  std::filesystem::path root_;
};

/// Every commit reachable from `to_tag` but not from `from_tag`, newest first.
/// An empty `from_tag` walks back to the repository root. Throws
/// UnknownTagError or DisjointReleasesError (from_tag not an ancestor).
std::vector<CommitInfo> collect_commits_between(const GitRepository& repo, std::string_view from_tag,
                                                std::string_view to_tag);

/// Title of a merged pull request: the second non-empty line when the
/// subject is GitHub's "Merge pull request #N ..." line, else the API title
/// if known, else the subject.
std::string merge_title(const CommitInfo& commit);

/// One raw line per commit with a non-empty message, in commit order:
/// the subject line for regular commits and `merge_title` for merges.
std::vector<std::string> to_source_lines(std::span<const CommitInfo> commits);

/// clean_text on every line, flattened, then filter_trivial.
std::vector<std::string> clean_source_lines(const std::vector<std::string>& lines,
                                            const DenyList& deny = DenyList::defaults());

struct HarvestConfig {
  std::string repo;  // owner/name
  std::string token_env = "GITHUB_TOKEN";
  int min_releases = 0;
  std::optional<int> min_stars;
  std::chrono::seconds request_timeout{30};
  int max_retries = 3;
  std::string api_base = "https://api.github.com";
  /// Base delay between retries of transient failures; doubled per attempt.
  std::chrono::milliseconds retry_backoff{1000};
  /// Upper bound on any single wait for a rate-limit reset.
  std::chrono::seconds max_rate_limit_wait{900};
  int per_page = 100;

  /// Throws ConfigError on negative counts or a malformed repo name.
  void validate() const;
};

struct HarvestOutcome {
  std::optional<ReleaseDataset> dataset;
  std::string skip_reason;

  bool skipped() const noexcept { return !dataset.has_value(); }
};

/// Builds one record per published release, ordered by publish date. Each
/// release's source comes from the commits since the previous release; the
/// earliest release reaches back to the repository root. Repositories below
/// `min_releases` (or `min_stars`) come back as a skip, not an error.
/// Throws AuthError, RateLimitError or RemoteError.
HarvestOutcome harvest_releases(const HarvestConfig& config, const DenyList& deny = DenyList::defaults());

}  // namespace relnotes
