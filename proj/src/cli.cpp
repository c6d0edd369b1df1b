#include "relnotes/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "relnotes/error.hpp"
#include "relnotes/ingest.hpp"
#include "relnotes/summarizer.hpp"

namespace relnotes::cli {

namespace {

bool needs_embeddings(Method m) { return m == Method::TextRankGlove; }

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads. The first exception
// (by index) is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SummarizerOptions summarizer_options(const RunConfig& config, const Resources& resources) {
  SummarizerOptions opts;
  opts.rank = config.rank;
  opts.embeddings = resources.embeddings ? &*resources.embeddings : nullptr;
  opts.stopwords = &resources.stopwords;
  return opts;
}

std::string aggregate_row(Method m, const RougeReport& r) { return csv_row("*", "*", to_string(m), r); }

}  // namespace

void RunConfig::validate() const {
  rank.validate();
  if (sentences && *sentences == 0) throw ConfigError("cli", "--sentences must be positive");
  const bool glove = command == Command::Bench || ((command == Command::Summarize || command == Command::Evaluate) &&
                                                   method == Method::TextRankGlove);
  if (glove && !embeddings_path) throw ConfigError("cli", "textrank-glove needs --embeddings");
}

Resources Resources::load(const RunConfig& config, bool with_embeddings) {
  Resources r;
  if (config.deny_list_path) r.deny = DenyList::from_file(*config.deny_list_path);
  if (config.stopwords_path) r.stopwords = StopwordList::from_file(*config.stopwords_path);
  if (with_embeddings) {
    if (!config.embeddings_path) throw ConfigError("cli", "textrank-glove needs --embeddings");
    r.embeddings = load_embeddings(*config.embeddings_path);
  }
  return r;
}

std::string describe_config(const RunConfig& config) {
  std::ostringstream os;
  os << "damping=" << config.rank.damping << " tolerance=" << config.rank.tolerance
     << " max_iters=" << config.rank.max_iters
     << " rouge_stopwords=" << (config.rouge.include_stopwords ? "on" : "off")
     << " rouge_l=" << (config.rouge.lcs_mode == LcsMode::Summary ? "summary" : "whole")
     << " deny_list=" << (config.deny_list_path ? config.deny_list_path->string() : "default")
     << " stopwords=" << (config.stopwords_path ? config.stopwords_path->string() : "default")
     << " embeddings=" << (config.embeddings_path ? config.embeddings_path->string() : "none")
     << " log=natural";
  return os.str();
}

std::string cmd_summarize(const std::filesystem::path& repo_path, const std::string& from_tag,
                          const std::string& to_tag, const RunConfig& config) {
  config.validate();
  const Resources resources = Resources::load(config, needs_embeddings(config.method));
  const GitRepository repo(repo_path);
  const auto commits = collect_commits_between(repo, from_tag, to_tag);
  const auto sentences = clean_source_lines(to_source_lines(commits), resources.deny);
  const std::size_t m = config.sentences.value_or(kDefaultSentences);
  const GeneratedSummary summary = summarize(sentences, config.method, m, summarizer_options(config, resources));

  if (config.output_format == OutputFormat::Json) {
    nlohmann::json doc = {{"method", to_string(summary.method)},
                          {"from_tag", from_tag},
                          {"to_tag", to_tag},
                          {"sentences", summary.sentences},
                          {"scores", summary.scores.value_or(std::vector<double>{})},
                          {"source_count", sentences.size()}};
    return doc.dump(2) + "\n";
  }
  std::string md = "## " + to_tag + "\n\n";
  for (const std::string& s : summary.sentences) md += "- " + s + "\n";
  return md;
}

EvaluationRun evaluate_methods(const ReleaseDataset& dataset, const std::vector<Method>& methods,
                               const RunConfig& config, const Resources& resources) {
  FilterResult filtered = filter_empty_references(dataset);
  EvaluationRun run;
  run.dataset = std::move(filtered.dataset);
  run.dropped_empty = filtered.removed;
  const SummarizerOptions opts = summarizer_options(config, resources);
  const auto& releases = run.dataset.releases;

  for (Method method : methods) {
    MethodScores scores{method, std::vector<RougeReport>(releases.size()), {}};
    parallel_for(releases.size(), config.jobs, [&](std::size_t i) {
      const ReleaseRecord& r = releases[i];
      const GeneratedSummary summary = summarize(r.source, method, r.reference_notes.size(), opts);
      scores.per_release[i] = evaluate_release(r, summary, config.rouge, resources.stopwords);
    });
    if (!scores.per_release.empty()) scores.mean = aggregate(scores.per_release);
    run.methods.push_back(std::move(scores));
  }
  return run;
}

EvaluateOutput cmd_evaluate(const std::filesystem::path& dataset_path, const RunConfig& config) {
  config.validate();
  const Resources resources = Resources::load(config, needs_embeddings(config.method));
  const EvaluationRun run = evaluate_methods(load_dataset(dataset_path), {config.method}, config, resources);
  if (run.dataset.releases.empty()) throw ContractError("cli", "dataset has no release with a reference note");

  EvaluateOutput out;
  out.dropped_empty = run.dropped_empty;
  out.csv = csv_header() + "\n";
  for (const MethodScores& ms : run.methods) {
    for (std::size_t i = 0; i < run.dataset.releases.size(); ++i) {
      const ReleaseRecord& r = run.dataset.releases[i];
      out.csv += csv_row(r.project, r.tag, to_string(ms.method), ms.per_release[i]) + "\n";
    }
    out.aggregate += aggregate_row(ms.method, ms.mean) + "\n";
  }
  return out;
}

std::string cmd_bench(const std::filesystem::path& dataset_path, const RunConfig& config) {
  config.validate();
  const Resources resources = Resources::load(config, true);
  std::vector<Method> methods = {Method::Lsa, Method::TextRankTfidf, Method::TextRankGlove};
  std::sort(methods.begin(), methods.end(), [](Method a, Method b) { return to_string(a) < to_string(b); });
  const EvaluationRun run = evaluate_methods(load_dataset(dataset_path), methods, config, resources);
  if (run.dataset.releases.empty()) throw ContractError("cli", "dataset has no release with a reference note");

  std::string out;
  if (config.output_format == OutputFormat::Csv) {
    out = "method,r1_r,r1_p,r1_f,r2_r,r2_p,r2_f,rl_r,rl_p,rl_f\n";
    for (const MethodScores& ms : run.methods) {
      out += std::string(to_string(ms.method));
      for (const RougeScore* s : {&ms.mean.rouge1, &ms.mean.rouge2, &ms.mean.rougeL}) {
        out += "," + fixed2(100 * s->recall) + "," + fixed2(100 * s->precision) + "," + fixed2(100 * s->f1);
      }
      out += "\n";
    }
    return out;
  }
  out = "<!-- " + describe_config(config) + " releases=" + std::to_string(run.dataset.releases.size()) +
        " dropped_empty=" + std::to_string(run.dropped_empty) + " -->\n\n";
  out += "| Approach | ROUGE-1 R | ROUGE-1 P | ROUGE-1 F1 | ROUGE-2 R | ROUGE-2 P | ROUGE-2 F1 | ROUGE-L R | ROUGE-L P | "
         "ROUGE-L F1 |\n";
  out += "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const MethodScores& ms : run.methods) {
    out += "| " + std::string(to_string(ms.method));
    for (const RougeScore* s : {&ms.mean.rouge1, &ms.mean.rouge2, &ms.mean.rougeL}) {
      out += " | " + fixed2(100 * s->recall) + " | " + fixed2(100 * s->precision) + " | " + fixed2(100 * s->f1);
    }
    out += " |\n";
  }
  return out;
}

namespace {

struct Flags {
  std::string method = "textrank-glove";
  std::string format;
  std::string rouge_l = "summary";
  std::size_t sentences = 0;
  std::string embeddings, deny_list, stopwords, out_path, dataset, repo_path, from_tag, to_tag;
  std::vector<std::string> repos;
  std::string token_env = "GITHUB_TOKEN";
  std::string api_base = "https://api.github.com";
  int min_releases = 0;
  int min_stars = -1;
  int max_retries = 3;
  int timeout = 30;
};

void add_rank_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--damping", config.rank.damping, "Damping factor d in (0,1)")->capture_default_str();
  cmd->add_option("--tolerance", config.rank.tolerance, "Convergence threshold on the max score change")
      ->capture_default_str();
  cmd->add_option("--max-iters", config.rank.max_iters, "Iteration cap")->capture_default_str();
}

void add_resource_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--embeddings", f.embeddings, "Pre-trained word vectors (text format)");
  cmd->add_option("--deny-list", f.deny_list, "File of trivial-commit glob patterns");
  cmd->add_option("--stopwords", f.stopwords, "File of stopwords, one per line");
}

void add_rouge_flags(CLI::App* cmd, RunConfig& config, Flags& f) {
  cmd->add_flag("--rouge-stopwords", config.rouge.include_stopwords, "Keep stopwords when scoring ROUGE");
  cmd->add_option("--rouge-l", f.rouge_l, "ROUGE-L variant: summary (union LCS) or whole")
      ->check(CLI::IsMember({"summary", "whole"}))
      ->capture_default_str();
  cmd->add_option("--jobs", config.jobs, "Worker threads (0 = all cores)");
}

Method require_method(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw ConfigError("cli", "unknown method '" + name + "'");
  return *m;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return kUsage;
  if (dynamic_cast<const AuthError*>(&e) != nullptr) return kAuth;
  if (dynamic_cast<const RemoteError*>(&e) != nullptr || dynamic_cast<const RateLimitError*>(&e) != nullptr) {
    return kRemote;
  }
  return kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Draft release notes from commit history and score them with ROUGE", "relnotes"};
  app.require_subcommand(1);
  RunConfig config;
  Flags f;

  auto* harvest = app.add_subcommand("harvest", "Build a dataset from GitHub releases");
  harvest->add_option("--repo", f.repos, "owner/name (repeatable)")->required();
  harvest->add_option("--token-env", f.token_env, "Environment variable holding the API token")->capture_default_str();
  harvest->add_option("--min-releases", f.min_releases, "Skip repositories with fewer releases")->capture_default_str();
  harvest->add_option("--min-stars", f.min_stars, "Skip repositories with fewer stars");
  harvest->add_option("--max-retries", f.max_retries, "Retries for rate limits and transient failures")
      ->capture_default_str();
  harvest->add_option("--timeout", f.timeout, "Per-request timeout in seconds")->capture_default_str();
  harvest->add_option("--api-base", f.api_base, "REST API root")->capture_default_str();
  harvest->add_option("--deny-list", f.deny_list, "File of trivial-commit glob patterns");
  harvest->add_option("--out", f.out_path, "Dataset JSON to write")->required();

  auto* summarize_cmd = app.add_subcommand("summarize", "Draft a release note for a tag range of a local repository");
  summarize_cmd->add_option("--repo", f.repo_path, "Path to a local git repository")->required();
  summarize_cmd->add_option("--from-tag", f.from_tag, "Previous release tag")->required();
  summarize_cmd->add_option("--to-tag", f.to_tag, "Release tag to describe")->required();
  summarize_cmd->add_option("--method", f.method, "textrank-glove | textrank-tfidf | textrank-bow | lsa")
      ->capture_default_str();
  summarize_cmd->add_option("--sentences", f.sentences, "Sentences in the note (default 5)");
  summarize_cmd->add_option("--format", f.format, "md or json")->check(CLI::IsMember({"md", "markdown", "json"}));
  add_resource_flags(summarize_cmd, f);
  add_rank_flags(summarize_cmd, config);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score one method against every reference note");
  evaluate_cmd->add_option("--dataset", f.dataset, "Dataset JSON")->required();
  evaluate_cmd->add_option("--method", f.method, "Summarization method")->capture_default_str();
  evaluate_cmd->add_option("--out", f.out_path, "Per-release CSV to write")->required();
  add_resource_flags(evaluate_cmd, f);
  add_rank_flags(evaluate_cmd, config);
  add_rouge_flags(evaluate_cmd, config, f);

  auto* bench_cmd = app.add_subcommand("bench", "Compare lsa, textrank-tfidf and textrank-glove");
  bench_cmd->add_option("--dataset", f.dataset, "Dataset JSON")->required();
  bench_cmd->add_option("--format", f.format, "md or csv")->check(CLI::IsMember({"md", "markdown", "csv"}));
  bench_cmd->add_option("--out", f.out_path, "Also write the table to this file");
  add_resource_flags(bench_cmd, f);
  add_rank_flags(bench_cmd, config);
  add_rouge_flags(bench_cmd, config, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  auto opt_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };

  try {
    config.embeddings_path = opt_path(f.embeddings);
    config.deny_list_path = opt_path(f.deny_list);
    config.stopwords_path = opt_path(f.stopwords);
    config.rouge.lcs_mode = f.rouge_l == "whole" ? LcsMode::Whole : LcsMode::Summary;
    if (f.format == "json") config.output_format = OutputFormat::Json;
    if (f.format == "csv") config.output_format = OutputFormat::Csv;

    if (harvest->parsed()) {
      config.command = Command::Harvest;
      const DenyList deny = config.deny_list_path ? DenyList::from_file(*config.deny_list_path) : DenyList::defaults();
      std::vector<HarvestConfig> jobs;
      for (const std::string& repo : f.repos) {
        HarvestConfig hc;
        hc.repo = repo;
        hc.token_env = f.token_env;
        hc.min_releases = f.min_releases;
        if (f.min_stars >= 0) hc.min_stars = f.min_stars;
        hc.max_retries = f.max_retries;
        hc.request_timeout = std::chrono::seconds(f.timeout);
        hc.api_base = f.api_base;
        hc.validate();
        jobs.push_back(std::move(hc));
      }
      std::vector<std::future<HarvestOutcome>> pending;
      for (const HarvestConfig& hc : jobs) {
        pending.push_back(std::async(std::launch::async, [&hc, &deny] { return harvest_releases(hc, deny); }));
      }
      ReleaseDataset merged;
      std::vector<HarvestOutcome> outcomes;
      for (auto& p : pending) outcomes.push_back(p.get());
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        HarvestOutcome& o = outcomes[i];
        if (o.skipped()) {
          err << "skipped " << jobs[i].repo << ": " << o.skip_reason << "\n";
          continue;
        }
        merged.provenance += (merged.provenance.empty() ? "" : " | ") + o.dataset->provenance;
        for (ReleaseRecord& r : o.dataset->releases) merged.releases.push_back(std::move(r));
      }
      const FilterResult stats = filter_empty_references(merged);
      save_dataset(merged, f.out_path);
      out << "harvested " << merged.releases.size() << " releases (" << stats.removed << " with empty notes, "
          << fixed2(100.0 * stats.removed_fraction) << "%) into " << f.out_path << "\n";
      return kOk;
    }

    config.method = require_method(f.method);
    if (summarize_cmd->count("--sentences") > 0) config.sentences = f.sentences;

    if (summarize_cmd->parsed()) {
      config.command = Command::Summarize;
      out << cmd_summarize(f.repo_path, f.from_tag, f.to_tag, config);
      return kOk;
    }
    if (evaluate_cmd->parsed()) {
      config.command = Command::Evaluate;
      const EvaluateOutput result = cmd_evaluate(f.dataset, config);
      write_file_atomic(f.out_path, result.csv);
      if (result.dropped_empty > 0) err << "skipped " << result.dropped_empty << " releases with empty notes\n";
      out << "# " << describe_config(config) << "\n" << csv_header() << "\n" << result.aggregate;
      return kOk;
    }
    config.command = Command::Bench;
    const std::string table = cmd_bench(f.dataset, config);
    if (!f.out_path.empty()) write_file_atomic(f.out_path, table);
    if (config.output_format == OutputFormat::Csv) err << "# " << describe_config(config) << "\n";
    out << table;
    return kOk;
  } catch (const Error& e) {
    err << "error [" << e.module() << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace relnotes::cli
