// GitHub REST v3 harvester: releases, compare ranges and PR titles.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <regex>
#include <thread>

#include "json.hpp"
#include "relnotes/error.hpp"
#include "relnotes/ingest.hpp"

namespace relnotes {

namespace {

using nlohmann::json;

std::string encode_segment(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

bool has_next_link(const httplib::Result& res) {
  const std::string link = res->get_header_value("Link");
  return link.find("rel=\"next\"") != std::string::npos;
}

class GithubApi {
 public:
  GithubApi(const HarvestConfig& config, const std::string& token) : config_(config), client_(config.api_base) {
    client_.set_connection_timeout(config.request_timeout);
    client_.set_read_timeout(config.request_timeout);
    client_.set_default_headers({{"Authorization", "Bearer " + token},
                                 {"Accept", "application/vnd.github+json"},
                                 {"X-GitHub-Api-Version", "2022-11-28"},
                                 {"User-Agent", "relnotes-harvester"}});
  }

  // Returns the parsed body and whether a further page is advertised.
  std::pair<json, bool> get(const std::string& path) {
    for (int attempt = 0;; ++attempt) {
      auto res = client_.Get(path);
      const bool can_retry = attempt < config_.max_retries;
      if (!res) {
        if (can_retry) {
          backoff(attempt);
          continue;
        }
        throw RemoteError("ingest", "request to " + path + " failed: " + httplib::to_string(res.error()));
      }
      const int status = res->status;
      if (status == 200) {
        try {
          return {json::parse(res->body), has_next_link(res)};
        } catch (const json::parse_error&) {
          throw RemoteError("ingest", "malformed JSON from " + path);
        }
      }
      if (status == 401) throw AuthError("ingest", "GitHub rejected the token (401)");
      if (status == 403 || status == 429) {
        const bool limited = status == 429 || res->get_header_value("X-RateLimit-Remaining") == "0" ||
                             res->has_header("Retry-After");
        if (!limited) throw AuthError("ingest", "GitHub denied access to " + path + " (403)");
        if (!can_retry) {
          throw RateLimitError("ingest", "rate limit still exhausted after " + std::to_string(config_.max_retries) +
                                             " retries");
        }
        std::this_thread::sleep_for(rate_limit_wait(res));
        continue;
      }
      if (status >= 500 && can_retry) {
        backoff(attempt);
        continue;
      }
      throw RemoteError("ingest", "GET " + path + " returned HTTP " + std::to_string(status));
    }
  }

  std::vector<json> get_pages(const std::string& path) {
    std::vector<json> items;
    const char sep = path.find('?') == std::string::npos ? '?' : '&';
    for (int page = 1;; ++page) {
      auto [body, next] = get(path + sep + "per_page=" + std::to_string(config_.per_page) +
                              "&page=" + std::to_string(page));
      if (!body.is_array()) throw RemoteError("ingest", "expected a JSON array from " + path);
      const std::size_t count = body.size();
      for (auto& item : body) items.push_back(std::move(item));
      if (count == 0 || (!next && count < static_cast<std::size_t>(config_.per_page))) break;
    }
    return items;
  }

 private:
  void backoff(int attempt) const {
    std::this_thread::sleep_for(config_.retry_backoff * (1 << std::min(attempt, 10)));
  }

  std::chrono::milliseconds rate_limit_wait(const httplib::Result& res) const {
    using namespace std::chrono;
    seconds wait{0};
    if (res->has_header("Retry-After")) {
      wait = seconds(std::atol(res->get_header_value("Retry-After").c_str()));
    } else if (res->has_header("X-RateLimit-Reset")) {
      const long reset = std::atol(res->get_header_value("X-RateLimit-Reset").c_str());
      wait = seconds(std::max(0L, reset - static_cast<long>(std::time(nullptr))));
    } else {
      wait = duration_cast<seconds>(config_.retry_backoff);
    }
    wait = std::clamp(wait, seconds{0}, config_.max_rate_limit_wait);
    return duration_cast<milliseconds>(wait);
  }

  const HarvestConfig& config_;
  httplib::Client client_;
};

CommitInfo parse_commit(const json& node) {
  CommitInfo c;
  c.hash = node.value("sha", "");
  if (node.contains("parents") && node["parents"].is_array()) {
    for (const json& p : node["parents"]) c.parents.push_back(p.value("sha", ""));
  }
  if (node.contains("commit") && node["commit"].is_object()) c.message = node["commit"].value("message", "");
  return c;
}

struct Release {
  std::string tag;
  std::string published_at;
  std::string body;
};

}  // namespace

void HarvestConfig::validate() const {
  static const std::regex kRepo(R"([A-Za-z0-9_.-]+/[A-Za-z0-9_.-]+)");
  if (!std::regex_match(repo, kRepo)) throw ConfigError("ingest", "repository must look like owner/name");
  if (min_releases < 0) throw ConfigError("ingest", "min_releases must be >= 0");
  if (max_retries < 0) throw ConfigError("ingest", "max_retries must be >= 0");
  if (per_page <= 0 || per_page > 100) throw ConfigError("ingest", "per_page must lie in [1, 100]");
  if (token_env.empty()) throw ConfigError("ingest", "token environment variable name is empty");
}

HarvestOutcome harvest_releases(const HarvestConfig& config, const DenyList& deny) {
  config.validate();
  const char* token = std::getenv(config.token_env.c_str());
  if (token == nullptr || *token == '\0') {
    throw AuthError("ingest", "environment variable " + config.token_env + " holds no API token");
  }
  GithubApi api(config, token);
  const std::string base = "/repos/" + config.repo;

  if (config.min_stars) {
    const auto [info, _] = api.get(base);
    const long stars = info.value("stargazers_count", 0L);
    if (stars < *config.min_stars) {
      return {std::nullopt, config.repo + " has " + std::to_string(stars) + " stars, below " +
                                std::to_string(*config.min_stars)};
    }
  }

  std::vector<Release> releases;
  for (const json& r : api.get_pages(base + "/releases")) {
    if (r.value("draft", false)) continue;
    const json& published = r.contains("published_at") ? r["published_at"] : json();
    if (!published.is_string()) continue;
    releases.push_back({r.value("tag_name", ""), published.get<std::string>(),
                        r.contains("body") && r["body"].is_string() ? r["body"].get<std::string>() : ""});
  }
  if (static_cast<int>(releases.size()) < config.min_releases) {
    return {std::nullopt, config.repo + " has " + std::to_string(releases.size()) + " releases, below " +
                              std::to_string(config.min_releases)};
  }
  // The endpoint lists newest first; reversing first keeps that order for
  // releases published at the same instant.
  std::reverse(releases.begin(), releases.end());
  std::stable_sort(releases.begin(), releases.end(),
                   [](const Release& a, const Release& b) { return a.published_at < b.published_at; });

  std::string ties;
  for (std::size_t i = 1; i < releases.size(); ++i) {
    if (releases[i].published_at == releases[i - 1].published_at) {
      ties += (ties.empty() ? "" : ", ") + releases[i - 1].tag + "=" + releases[i].tag;
    }
  }

  static const std::regex kMergePr(R"(^Merge pull request #(\d+)\b[^\n]*\s*$)");
  ReleaseDataset dataset;
  dataset.provenance = "github:" + config.repo +
                       "; releases ordered by publish date; source = first lines of commits and merge-PR titles "
                       "since the previous release (earliest release: from repository root); sentences cleaned of "
                       "HTML, URLs, #refs, sign-offs, @mentions and markdown headlines; trivial commits filtered";
  if (!ties.empty()) dataset.provenance += "; publish-date ties: " + ties;

  for (std::size_t i = 0; i < releases.size(); ++i) {
    const Release& rel = releases[i];
    std::vector<CommitInfo> commits;
    if (i == 0) {
      for (const json& c : api.get_pages(base + "/commits?sha=" + encode_segment(rel.tag))) {
        commits.push_back(parse_commit(c));
      }
    } else {
      const std::string path =
          base + "/compare/" + encode_segment(releases[i - 1].tag) + "..." + encode_segment(rel.tag);
      std::size_t total = 0;
      for (int page = 1;; ++page) {
        auto [body, next] =
            api.get(path + "?per_page=" + std::to_string(config.per_page) + "&page=" + std::to_string(page));
        total = body.value("total_commits", std::size_t{0});
        const json& list = body.contains("commits") ? body["commits"] : json::array();
        for (const json& c : list) commits.push_back(parse_commit(c));
        if (list.empty() || commits.size() >= total || (!next && list.size() < static_cast<std::size_t>(config.per_page))) break;
      }
      // compare lists oldest first; keep newest first like the local walk
      std::reverse(commits.begin(), commits.end());
    }
    for (CommitInfo& c : commits) {
      if (!c.is_merge()) continue;
      std::smatch m;
      if (std::regex_match(c.message, m, kMergePr)) {
        const auto [pr, _] = api.get(base + "/pulls/" + m[1].str());
        if (pr.contains("title") && pr["title"].is_string()) c.pr_title = pr["title"].get<std::string>();
      }
    }

    ReleaseRecord record;
    record.project = config.repo;
    record.tag = rel.tag;
    record.date = rel.published_at;
    record.reference_notes = clean_text(rel.body);
    record.source = clean_source_lines(to_source_lines(commits), deny);
    dataset.releases.push_back(std::move(record));
  }
  return {std::move(dataset), {}};
}

}  // namespace relnotes
