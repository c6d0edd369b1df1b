// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exits non-zero
// if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relnotes/cli.hpp"
#include "relnotes/corpus.hpp"
#include "relnotes/ingest.hpp"
#include "relnotes/lsa.hpp"
#include "relnotes/preprocess.hpp"
#include "relnotes/rouge.hpp"
#include "relnotes/summarizer.hpp"
#include "relnotes/textrank.hpp"
#include "relnotes/vectorize.hpp"

using namespace relnotes;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass(std::string d = {}) { return {Verdict::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Verdict::Skip, std::move(d)}; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(RELNOTES_TEST_DATA) / name; }

Outcome rouge_oracle() {
  std::mt19937_64 rng(20240901);
  const auto start = Clock::now();
  double worst = 0.0;
  auto diff = [&](const RougeScore& got, const oracle::Prf& want) {
    worst = std::max({worst, std::abs(got.recall - want.recall), std::abs(got.precision - want.precision),
                      std::abs(got.f1 - want.f1)});
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto ref = oracle::random_tokens(rng, 30, 10);
    const auto gen = oracle::random_tokens(rng, 30, 10);
    diff(rouge_n(ref, gen, 1), oracle::rouge_n(ref, gen, 1));
    diff(rouge_n(ref, gen, 2), oracle::rouge_n(ref, gen, 2));
    diff(rouge_l(ref, gen), oracle::rouge_l(ref, gen));
    const std::vector<std::vector<std::string>> r1 = {ref}, g1 = {gen};
    diff(rouge_l_summary(r1, g1), oracle::rouge_l(ref, gen));
  }
  const double elapsed = seconds_since(start);
  const std::string detail = "200 pairs, max |diff| = " + fmt(worst) + ", " + fmt(elapsed) + " s";
  if (worst >= 1e-9) return fail(detail);
  if (elapsed >= 5.0) return fail(detail + " (over 5 s)");
  return pass(detail);
}

Outcome textrank_fixed_points() {
  const auto start = Clock::now();
  const RankResult uniform = rank_matrix(Eigen::MatrixXd::Ones(3, 3), RankConfig{});
  for (double s : uniform.scores) {
    if (std::abs(s - 1.0) > 1e-6) return fail("uniform 3-node score " + fmt(s, 10));
  }

  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const oracle::Matrix w = oracle::random_symmetric(rng, 10, 0.25);
    Eigen::MatrixXd m(10, 10);
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) m(i, j) = w[i][j];
    }
    const std::vector<double> want = oracle::textrank(w);
    const RankResult got = rank_matrix(m, RankConfig{});
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got.scores[i] - want[i]));
  }
  const double elapsed = seconds_since(start);
  const std::string detail = "uniform ok, 100 random graphs max |diff| = " + fmt(worst) + ", " + fmt(elapsed) + " s";
  if (worst > 1e-6) return fail(detail);
  if (elapsed >= 5.0) return fail(detail + " (over 5 s)");
  return pass(detail);
}

// Per-sentence scores for a method, without the top-m cut.
std::vector<double> method_scores(const std::vector<TokenizedSentence>& sentences, Method method, std::size_t m,
                                  const EmbeddingStore& store) {
  if (method == Method::Lsa) {
    const bool any = std::any_of(sentences.begin(), sentences.end(),
                                 [](const TokenizedSentence& t) { return !t.content_tokens.empty(); });
    if (!any) return std::vector<double>(sentences.size(), 0.0);
    return lsa_scores(build_matrix(sentences).matrix, m).scores;
  }
  RankConfig cfg;
  const TfidfModel model = fit_tfidf(sentences);
  cfg.similarity = method == Method::TextRankGlove   ? Similarity::GloveCosine
                   : method == Method::TextRankTfidf ? Similarity::TfidfCosine
                                                     : Similarity::Overlap;
  return rank(build_graph(sentences, cfg, {&model, &store}), cfg).scores;
}

Outcome summary_contract() {
  std::mt19937_64 rng(4242);
  const std::vector<std::string> vocab = {"cache", "theme", "crash", "plugin", "export", "csv", "loader", "api",
                                          "renderer", "eviction", "config", "docs", "race", "leak", "test", "build"};
  EmbeddingStore store(6);
  {
    std::normal_distribution<double> g;
    for (std::size_t w = 0; w + 2 < vocab.size(); ++w) {
      std::vector<float> v(6);
      for (float& x : v) x = static_cast<float>(g(rng));
      store.add(vocab[w], v);
    }
  }
  const std::vector<Method> methods = {Method::TextRankGlove, Method::TextRankTfidf, Method::TextRankBow, Method::Lsa};
  SummarizerOptions opts;
  opts.embeddings = &store;

  std::uniform_int_distribution<std::size_t> n_dist(1, 20), len_dist(1, 6), word(0, vocab.size() - 1);
  std::size_t summaries = 0;
  double worst_perm = 0.0;
  for (int corpus = 0; corpus < 1000; ++corpus) {
    const std::size_t n = n_dist(rng);
    std::vector<std::string> source;
    for (std::size_t i = 0; i < n; ++i) {
      std::string s;
      if (rng() % 15 == 0) {
        s = "the and of";  // no content tokens
      } else {
        for (std::size_t k = len_dist(rng); k > 0; --k) s += (s.empty() ? "" : " ") + vocab[word(rng)];
      }
      source.push_back(s);
    }
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 25)(rng);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> permuted(n);
    for (std::size_t i = 0; i < n; ++i) permuted[perm[i]] = source[i];
    const auto tokens = tokenize_all(source);
    const auto permuted_tokens = tokenize_all(permuted);

    for (Method method : methods) {
      const GeneratedSummary s = summarize(source, method, m, opts);
      ++summaries;
      if (s.sentences.size() != std::min(m, n)) {
        return fail("corpus " + std::to_string(corpus) + " " + std::string(to_string(method)) + ": length " +
                    std::to_string(s.sentences.size()) + " != min(m, n)");
      }
      if (!std::is_sorted(s.indices.begin(), s.indices.end()) ||
          std::adjacent_find(s.indices.begin(), s.indices.end()) != s.indices.end()) {
        return fail("corpus " + std::to_string(corpus) + ": selection not in source order");
      }
      for (std::size_t k = 0; k < s.sentences.size(); ++k) {
        if (s.indices[k] >= n || s.sentences[k] != source[s.indices[k]]) {
          return fail("corpus " + std::to_string(corpus) + ": sentence is not a verbatim source element");
        }
      }

      const auto a = method_scores(tokens, method, m, store);
      const auto b = method_scores(permuted_tokens, method, m, store);
      for (std::size_t i = 0; i < n; ++i) worst_perm = std::max(worst_perm, std::abs(a[i] - b[perm[i]]));
      auto sa = a, sb = b;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      for (std::size_t i = 0; i < n; ++i) worst_perm = std::max(worst_perm, std::abs(sa[i] - sb[i]));
    }
  }
  const std::string detail = std::to_string(summaries) + " summaries, max permutation |diff| = " + fmt(worst_perm);
  if (worst_perm > 1e-6) return fail(detail);
  return pass(detail);
}

Outcome laravel_golden() {
  const ReleaseDataset d = load_dataset(data_path("laravel_v8.4.2.json"));
  const std::vector<std::string> got = clean_source_lines(d.releases.at(0).source);
  const std::vector<std::string> want = {"Modify the cache.php docblocks", "add stub handler", "closed correctly",
                                         "add sanctum cookie endpoint to default cors paths", "add auth line"};
  if (d.releases[0].source.size() != 7) return fail("fixture does not hold 7 commit lines");
  if (got != want) {
    std::string joined;
    for (const auto& s : got) joined += "[" + s + "]";
    return fail("got " + std::to_string(got.size()) + " sentences: " + joined);
  }
  return pass("7 commit lines -> 5 sentences, commits 1-2 removed");
}

Outcome formula_spot_values() {
  const double overlap = overlap_similarity(tokenize("add stub handler"), tokenize("add auth line"));
  const double want_overlap = 1.0 / (2.0 * std::log(3.0));
  if (std::abs(overlap - want_overlap) > 1e-9) return fail("overlap = " + fmt(overlap, 12));

  std::vector<TokenizedSentence> corpus = {tokenize("fix cache race bug"), tokenize("fix theme")};
  const TfidfModel model = fit_tfidf(corpus);
  const SparseVector v = tfidf_vector(corpus[0], model);
  const double component = v.count("cache") ? v.at("cache") : 0.0;
  if (std::abs(component - 0.25 * std::log(2.0)) > 1e-9) return fail("tf-idf component = " + fmt(component, 12));
  if (model.idf("fix") != 0.0) return fail("idf of a ubiquitous word = " + fmt(model.idf("fix")));
  return pass("overlap " + fmt(overlap, 10) + ", tf-idf " + fmt(component, 10) + ", idf(ubiquitous) 0");
}

Outcome lsa_oracle() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> rows_dist(1, 20), cols_dist(1, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_dup = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = rows_dist(rng), cols = cols_dist(rng);
    oracle::Matrix a(rows, std::vector<double>(cols));
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = a[i][j] = u(rng) < 0.3 ? 0.0 : u(rng);
    }
    if (m.isZero()) m(0, 0) = a[0][0] = 1.0;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, cols)(rng);
    const std::vector<double> want = oracle::lsa_scores(a, k);
    const LsaScores got = lsa_scores(m, k);
    for (int j = 0; j < cols; ++j) worst = std::max(worst, std::abs(got.scores[j] - want[j]));

    if (cols >= 2) {
      Eigen::MatrixXd dup = m;
      dup.col(cols - 1) = dup.col(0);
      const LsaScores d = lsa_scores(dup, k);
      worst_dup = std::max(worst_dup, std::abs(d.scores[0] - d.scores[cols - 1]));
    }
  }
  const std::string detail = "50 matrices, max |diff| = " + fmt(worst) + ", duplicate-column gap = " + fmt(worst_dup);
  if (worst >= 1e-8 || worst_dup >= 1e-10) return fail(detail);
  return pass(detail);
}

Outcome full_scale_reproduction() {
  const char* dataset = std::getenv("RELNOTES_BENCH_DATASET");
  const char* glove = std::getenv("RELNOTES_GLOVE_100D");
  if (dataset == nullptr || glove == nullptr) {
    return skip("set RELNOTES_BENCH_DATASET and RELNOTES_GLOVE_100D to run; the published dataset is not bundled");
  }
  cli::RunConfig config;
  config.command = cli::Command::Bench;
  config.embeddings_path = glove;
  const auto start = Clock::now();
  const cli::Resources resources = cli::Resources::load(config, true);
  const cli::EvaluationRun run =
      cli::evaluate_methods(load_dataset(dataset), {Method::Lsa, Method::TextRankTfidf, Method::TextRankGlove}, config,
                            resources);
  const double elapsed = seconds_since(start);
  std::cout << "  config: " << cli::describe_config(config) << "\n";
  const RougeReport& lsa = run.methods[0].mean;
  const RougeReport& tfidf = run.methods[1].mean;
  const RougeReport& glv = run.methods[2].mean;
  std::ostringstream detail;
  detail << run.dataset.releases.size() << " releases in " << fmt(elapsed) << " s; glove F1 " << fmt(100 * glv.rouge1.f1, 4)
         << "/" << fmt(100 * glv.rouge2.f1, 4) << "/" << fmt(100 * glv.rougeL.f1, 4);
  std::vector<std::string> problems;
  if (elapsed >= 600) problems.push_back("over 10 minutes");
  const double published[3] = {31.74, 18.53, 26.90};
  const RougeScore* g[3] = {&glv.rouge1, &glv.rouge2, &glv.rougeL};
  const RougeScore* l[3] = {&lsa.rouge1, &lsa.rouge2, &lsa.rougeL};
  const RougeScore* t[3] = {&tfidf.rouge1, &tfidf.rouge2, &tfidf.rougeL};
  for (int i = 0; i < 3; ++i) {
    if (g[i]->f1 <= l[i]->f1 || g[i]->f1 <= t[i]->f1) problems.push_back("ordering fails on column " + std::to_string(i));
    if (std::abs(100 * g[i]->f1 - published[i]) > 3.0) problems.push_back("column " + std::to_string(i) + " outside +-3");
  }
  if (!problems.empty()) {
    for (const auto& p : problems) detail << "; " << p;
    return fail(detail.str());
  }
  return pass(detail.str());
}

Outcome empty_note_statistic() {
  const ReleaseDataset raw = load_dataset(data_path("raw_mixed.json"));
  const FilterResult r = filter_empty_references(raw);
  if (r.total != 8 || r.removed != 3 || r.dataset.releases.size() != 5 || r.removed_fraction != 3.0 / 8.0) {
    return fail("fixture counts " + std::to_string(r.removed) + "/" + std::to_string(r.total));
  }
  // Same split as the published corpus: 1,924 harvested releases, 711 empty.
  ReleaseDataset big;
  for (int i = 0; i < 1924; ++i) {
    ReleaseRecord rec{"acme/widget", "v" + std::to_string(i), "2020-01-01", {}, {"x"}};
    if (i % 1924 >= 711) rec.reference_notes = {"note"};
    big.releases.push_back(std::move(rec));
  }
  const FilterResult s = filter_empty_references(big);
  if (s.dataset.releases.size() != 1213 || std::abs(s.removed_fraction - 0.37) > 0.005) {
    return fail("1924/711 split gives " + std::to_string(s.dataset.releases.size()) + " retained, fraction " +
                fmt(s.removed_fraction));
  }
  return pass("fixture 3/8 removed; 1924 with 711 empty -> 1213 retained, fraction " + fmt(s.removed_fraction, 4) +
              " (the published corpus is not bundled)");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ROUGE oracle equivalence", rouge_oracle},
      {"TextRank fixed points", textrank_fixed_points},
      {"summary contract properties", summary_contract},
      {"preprocessing golden test (Laravel v8.4.2)", laravel_golden},
      {"formula spot values", formula_spot_values},
      {"LSA oracle", lsa_oracle},
      {"full-scale reproduction", full_scale_reproduction},
      {"empty-note statistic", empty_note_statistic},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::Fail) ++failures;
    std::cout << tag << " " << (i + 1) << " " << criteria[i].first;
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}
