#include "relnotes/ingest.hpp"

#include <regex>
#include <system_error>

#include "process.hpp"
#include "relnotes/error.hpp"

namespace relnotes {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> non_empty_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    if (std::string line = trim(text.substr(start, end - start)); !line.empty()) out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

}  // namespace

GitRepository::GitRepository(std::filesystem::path root) : root_(std::move(root)) {
  const std::string inside = trim(git({"rev-parse", "--is-inside-work-tree"}));
  if (inside != "true") throw GitError("ingest", root_.string() + " is not a git work tree");
}

std::string GitRepository::git(std::vector<std::string> args) const {
  args.insert(args.begin(), {"git", "-C", root_.string()});
  detail::ProcessResult r;
  try {
    r = detail::run_process(args);
  } catch (const std::system_error& e) {
    throw GitError("ingest", std::string("cannot run git: ") + e.what());
  }
  if (r.exit_code != 0) {
    throw GitError("ingest", "git " + args[3] + " failed in " + root_.string() + ": " + trim(r.err));
  }
  return r.out;
}

std::string GitRepository::resolve_tag(std::string_view tag) const {
  if (tag.empty()) throw UnknownTagError("ingest", "empty tag name");
  for (const std::string& rev : {"refs/tags/" + std::string(tag) + "^{commit}", std::string(tag) + "^{commit}"}) {
    const auto r = detail::run_process({"git", "-C", root_.string(), "rev-parse", "--verify", "--quiet", rev});
    if (r.exit_code == 0) return trim(r.out);
  }
  throw UnknownTagError("ingest", "unknown tag '" + std::string(tag) + "'");
}

bool GitRepository::is_ancestor(std::string_view ancestor, std::string_view descendant) const {
  const auto r = detail::run_process({"git", "-C", root_.string(), "merge-base", "--is-ancestor",
                                      std::string(ancestor), std::string(descendant)});
  if (r.exit_code == 0) return true;
  if (r.exit_code == 1) return false;
  throw GitError("ingest", "git merge-base failed: " + trim(r.err));
}

std::vector<CommitInfo> GitRepository::commits_between(std::string_view base, std::string_view head) const {
  std::vector<std::string> args = {"log", "--format=%H%x1f%P%x1f%B%x1e", std::string(head)};
  if (!base.empty()) args.push_back("^" + std::string(base));
  const std::string out = git(std::move(args));

  std::vector<CommitInfo> commits;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = out.find('\x1e', start);
    if (end == std::string::npos) break;
    std::string_view record(out.data() + start, end - start);
    start = end + 1;
    while (!record.empty() && (record.front() == '\n' || record.front() == '\r')) record.remove_prefix(1);
    const auto f1 = record.find('\x1f');
    const auto f2 = record.find('\x1f', f1 + 1);
    if (f1 == std::string_view::npos || f2 == std::string_view::npos) continue;
    CommitInfo c;
    c.hash = std::string(record.substr(0, f1));
    const std::string parents(record.substr(f1 + 1, f2 - f1 - 1));
    for (std::size_t p = 0; p < parents.size();) {
      std::size_t q = parents.find(' ', p);
      if (q == std::string::npos) q = parents.size();
      if (q > p) c.parents.push_back(parents.substr(p, q - p));
      p = q + 1;
    }
    c.message = std::string(record.substr(f2 + 1));
    while (!c.message.empty() && (c.message.back() == '\n' || c.message.back() == '\r')) c.message.pop_back();
    commits.push_back(std::move(c));
  }
  return commits;
}

std::vector<CommitInfo> collect_commits_between(const GitRepository& repo, std::string_view from_tag,
                                                std::string_view to_tag) {
  const std::string head = repo.resolve_tag(to_tag);
  if (from_tag.empty()) return repo.commits_between({}, head);
  const std::string base = repo.resolve_tag(from_tag);
  if (base == head) return {};
  if (!repo.is_ancestor(base, head)) {
    throw DisjointReleasesError("ingest", "disjoint releases: '" + std::string(from_tag) +
                                              "' is not an ancestor of '" + std::string(to_tag) + "'");
  }
  return repo.commits_between(base, head);
}

std::string merge_title(const CommitInfo& commit) {
  static const std::regex kMergePr(R"(^Merge pull request #\d+\b.*)");
  const auto lines = non_empty_lines(commit.message);
  if (lines.empty()) return {};
  if (std::regex_match(lines.front(), kMergePr)) {
    if (lines.size() >= 2) return lines[1];
    if (commit.pr_title && !trim(*commit.pr_title).empty()) return trim(*commit.pr_title);
  }
  return lines.front();
}

std::vector<std::string> to_source_lines(std::span<const CommitInfo> commits) {
  std::vector<std::string> out;
  out.reserve(commits.size());
  for (const CommitInfo& c : commits) {
    if (c.is_merge()) {
      if (std::string title = merge_title(c); !title.empty()) out.push_back(std::move(title));
      continue;
    }
    const auto lines = non_empty_lines(c.message);
    if (!lines.empty()) out.push_back(lines.front());
  }
  return out;
}

std::vector<std::string> clean_source_lines(const std::vector<std::string>& lines, const DenyList& deny) {
  std::vector<std::string> cleaned;
  for (const std::string& line : lines) {
    for (std::string& s : clean_text(line)) cleaned.push_back(std::move(s));
  }
  return filter_trivial(cleaned, deny);
}

}  // namespace relnotes
