#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "json.hpp"
#include "relnotes/cli.hpp"
#include "relnotes/corpus.hpp"
#include "relnotes/error.hpp"
#include "relnotes/preprocess.hpp"
#include "relnotes/textrank.hpp"

using namespace relnotes;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "relnotes");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

std::map<std::string, std::vector<double>> read_vectors(const std::filesystem::path& path) {
  std::map<std::string, std::vector<double>> out;
  std::istringstream in(fixture::read_file(path));
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> v;
    for (double x; ls >> x;) v.push_back(x);
    out[word] = v;
  }
  return out;
}

// Glove TextRank selection computed without the library's vectorizer or ranker.
std::vector<std::string> oracle_glove_pick(const std::vector<std::string>& sentences, std::size_t m) {
  const auto vectors = read_vectors(fixture::data_path("glove_mini.txt"));
  const std::size_t dim = vectors.begin()->second.size();
  std::vector<std::vector<double>> emb;
  for (const std::string& s : sentences) {
    const auto words = tokenize(s).content_tokens;
    std::vector<double> mean(dim, 0.0);
    for (const std::string& w : words) {
      auto it = vectors.find(w);
      if (it == vectors.end()) continue;
      for (std::size_t k = 0; k < dim; ++k) mean[k] += it->second[k] / static_cast<double>(words.size());
    }
    emb.push_back(mean);
  }
  const std::size_t n = sentences.size();
  oracle::Matrix w(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double dot = 0, na = 0, nb = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        dot += emb[i][k] * emb[j][k];
        na += emb[i][k] * emb[i][k];
        nb += emb[j][k] * emb[j][k];
      }
      w[i][j] = (na == 0 || nb == 0) ? 0.0 : std::max(0.0, dot / std::sqrt(na * nb));
    }
  }
  const std::vector<double> scores = oracle::textrank(w);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(m, n));
  std::sort(order.begin(), order.end());
  std::vector<std::string> picked;
  for (std::size_t i : order) picked.push_back(sentences[i]);
  return picked;
}

}  // namespace

TEST_CASE("summarize the Laravel fixture repository with glove vectors") {
  fixture::GitFixture git;
  fixture::build_laravel_repo(git);
  const std::string glove = fixture::data_path("glove_mini.txt").string();
  const Outcome r = run_cli({"summarize", "--repo", git.path().string(), "--from-tag", "v8.4.1", "--to-tag", "v8.4.2",
                             "--method", "textrank-glove", "--embeddings", glove, "--sentences", "4"});
  REQUIRE(r.code == 0);
  const std::vector<std::string> cleaned = {"add auth line", "add sanctum cookie endpoint to default cors paths",
                                            "closed correctly", "add stub handler", "Modify the cache.php docblocks"};
  std::string expected = "## v8.4.2\n\n";
  for (const std::string& s : oracle_glove_pick(cleaned, 4)) expected += "- " + s + "\n";
  CHECK(r.out == expected);
  CHECK(split_lines(r.out).size() == 6);

  const Outcome again = run_cli({"summarize", "--repo", git.path().string(), "--from-tag", "v8.4.1", "--to-tag",
                                 "v8.4.2", "--method", "textrank-glove", "--embeddings", glove, "--sentences", "4"});
  CHECK(again.out == r.out);
}

TEST_CASE("summarize defaults, formats and errors") {
  fixture::GitFixture git;
  fixture::build_laravel_repo(git);
  const std::string repo = git.path().string();

  const Outcome md = run_cli({"summarize", "--repo", repo, "--from-tag", "v8.4.1", "--to-tag", "v8.4.2", "--method", "lsa"});
  REQUIRE(md.code == 0);
  CHECK(split_lines(md.out).size() == 2 + 5);

  const Outcome js = run_cli({"summarize", "--repo", repo, "--from-tag", "v8.4.1", "--to-tag", "v8.4.2", "--method",
                              "textrank-bow", "--sentences", "2", "--format", "json"});
  REQUIRE(js.code == 0);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["sentences"].size() == 2);
  CHECK(doc["method"] == "textrank-bow");
  CHECK(doc["source_count"] == 5);

  const Outcome zero = run_cli({"summarize", "--repo", repo, "--from-tag", "v8.4.1", "--to-tag", "v8.4.2", "--method",
                                "lsa", "--sentences", "0"});
  CHECK(zero.code == cli::kUsage);

  const Outcome no_vectors =
      run_cli({"summarize", "--repo", repo, "--from-tag", "v8.4.1", "--to-tag", "v8.4.2", "--method", "textrank-glove"});
  CHECK(no_vectors.code == cli::kUsage);
  CHECK(no_vectors.err.find("error [cli]") != std::string::npos);

  const Outcome bad_tag = run_cli({"summarize", "--repo", repo, "--from-tag", "vX", "--to-tag", "v8.4.2", "--method", "lsa"});
  CHECK(bad_tag.code == cli::kFailure);
  CHECK(bad_tag.err.find("error [ingest]") != std::string::npos);

  const Outcome bad_method =
      run_cli({"summarize", "--repo", repo, "--from-tag", "v8.4.1", "--to-tag", "v8.4.2", "--method", "magic"});
  CHECK(bad_method.code == cli::kUsage);

  CHECK(run_cli({"summarize", "--repo", repo}).code == cli::kUsage);
  CHECK(run_cli({}).code == cli::kUsage);
}

TEST_CASE("bench on the five-release fixture") {
  const std::string glove = fixture::data_path("glove_mini.txt").string();
  const std::string dataset = fixture::data_path("bench5.json").string();
  const Outcome csv = run_cli({"bench", "--dataset", dataset, "--embeddings", glove, "--format", "csv"});
  REQUIRE(csv.code == 0);
  const auto lines = split_lines(csv.out);
  REQUIRE(lines.size() == 4);
  const std::vector<std::string> names = {"lsa", "textrank-glove", "textrank-tfidf"};
  for (std::size_t row = 0; row < 3; ++row) {
    const auto cells = split_csv(lines[row + 1]);
    REQUIRE(cells.size() == 10);
    CHECK(cells[0] == names[row]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double v = std::stod(cells[c]);
      CHECK((v >= 0.0 && v <= 100.0));
    }
  }
  CHECK(csv.err.find("damping=0.85") != std::string::npos);

  const Outcome md = run_cli({"bench", "--dataset", dataset, "--embeddings", glove});
  REQUIRE(md.code == 0);
  CHECK(md.out.rfind("<!-- damping=0.85", 0) == 0);
  CHECK(md.out.find("rouge_stopwords=off") != std::string::npos);
  CHECK(md.out.find("| lsa |") != std::string::npos);
}

TEST_CASE("bench output is byte-identical across runs and thread counts") {
  const std::string glove = fixture::data_path("glove_mini.txt").string();
  const std::string dataset = fixture::data_path("bench5.json").string();
  const Outcome a = run_cli({"bench", "--dataset", dataset, "--embeddings", glove, "--jobs", "1"});
  const Outcome b = run_cli({"bench", "--dataset", dataset, "--embeddings", glove, "--jobs", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("bench errors") {
  fixture::TempDir dir;
  fixture::write_file(dir / "empty.json", R"({"provenance": "", "releases": []})");
  const std::string glove = fixture::data_path("glove_mini.txt").string();
  CHECK(run_cli({"bench", "--dataset", (dir / "empty.json").string(), "--embeddings", glove}).code == cli::kFailure);
  CHECK(run_cli({"bench", "--dataset", fixture::data_path("bench5.json").string()}).code == cli::kUsage);
  CHECK(run_cli({"bench", "--dataset", (dir / "missing.json").string(), "--embeddings", glove}).code == cli::kFailure);
}

TEST_CASE("evaluate on an identity corpus scores 100") {
  fixture::TempDir dir;
  ReleaseDataset d;
  d.releases = {{"acme/widget", "v1", "2021-01-01", {"Add cache layer", "Fix crash on start"}, {"Add cache layer", "Fix crash on start"}},
                {"acme/widget", "v2", "2021-02-01", {"Support custom themes"}, {"Support custom themes"}},
                {"acme/widget", "v3", "2021-03-01", {}, {"Unreleased note"}}};
  save_dataset(d, dir / "identity.json");
  for (const char* method : {"lsa", "textrank-tfidf", "textrank-bow"}) {
    const Outcome r = run_cli({"evaluate", "--dataset", (dir / "identity.json").string(), "--method", method, "--out",
                               (dir / "scores.csv").string()});
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].rfind("# damping=", 0) == 0);
    const auto cells = split_csv(lines[2]);
    CHECK(cells[0] == "*");
    CHECK(cells[2] == method);
    for (std::size_t c = 3; c < cells.size(); ++c) CHECK(cells[c] == "100.00");
    CHECK(r.err.find("skipped 1 releases") != std::string::npos);
    CHECK(split_lines(fixture::read_file(dir / "scores.csv")).size() == 3);
  }
}

TEST_CASE("single-release evaluate aggregate equals the release row") {
  fixture::TempDir dir;
  ReleaseDataset d;
  d.releases = {{"acme/widget", "v1", "2021-01-01", {"Fix crash on empty theme"},
                 {"Add plugin api", "Fix crash on empty theme loader", "Refactor theme"}}};
  save_dataset(d, dir / "one.json");
  const Outcome r = run_cli({"evaluate", "--dataset", (dir / "one.json").string(), "--method", "textrank-bow", "--out",
                             (dir / "s.csv").string()});
  REQUIRE(r.code == 0);
  const auto row = split_csv(split_lines(fixture::read_file(dir / "s.csv"))[1]);
  const auto agg = split_csv(split_lines(r.out)[2]);
  REQUIRE(row.size() == agg.size());
  for (std::size_t c = 3; c < row.size(); ++c) CHECK(row[c] == agg[c]);
}

TEST_CASE("failed evaluate leaves no output file") {
  fixture::TempDir dir;
  fixture::write_file(dir / "broken.json", "{\"releases\": [ {\"tag\": 1} ]}");
  const Outcome r = run_cli({"evaluate", "--dataset", (dir / "broken.json").string(), "--method", "lsa", "--out",
                             (dir / "s.csv").string()});
  CHECK(r.code == cli::kFailure);
  CHECK(r.err.find("release 0") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "s.csv"));
}

TEST_CASE("harvest without a token is an auth failure") {
  fixture::TempDir dir;
  const Outcome r = run_cli({"harvest", "--repo", "o/r", "--token-env", "RELNOTES_UNSET_TOKEN_VAR", "--out",
                             (dir / "d.json").string()});
  CHECK(r.code == cli::kAuth);
  CHECK_FALSE(std::filesystem::exists(dir / "d.json"));
  CHECK(run_cli({"harvest", "--repo", "not-a-repo", "--out", (dir / "d.json").string()}).code == cli::kUsage);
}

TEST_CASE("run config validation") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::Summarize;
  cfg.method = Method::TextRankGlove;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.embeddings_path = "vectors.txt";
  CHECK_NOTHROW(cfg.validate());
  cfg.sentences = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.sentences = 3;
  cfg.rank.damping = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
