// Helpers shared by the test binaries: scratch directories and small git
// repositories built with pinned identities and dates.
#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixture {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(RELNOTES_TEST_DATA) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

class TempDir {
 public:
  TempDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "relnotes-test-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

/// Scripted git repository. Every commit gets the next second on a fixed
/// clock so hashes and log order are reproducible.
class GitFixture {
 public:
  GitFixture() {
    sh("git -c init.defaultBranch=main init -q .");
  }

  const std::filesystem::path& path() const { return dir_.path(); }

  void commit(const std::string& message) {
    sh("git commit -q --allow-empty -m " + shell_quote(message));
  }
  void tag(const std::string& name) { sh("git tag " + shell_quote(name)); }
  void annotated_tag(const std::string& name) {
    sh("git tag -a " + shell_quote(name) + " -m " + shell_quote("release " + name));
  }
  void branch(const std::string& name) { sh("git checkout -q -b " + shell_quote(name)); }
  void checkout(const std::string& name) { sh("git checkout -q " + shell_quote(name)); }
  void merge(const std::string& branch, const std::string& message) {
    sh("git merge -q --no-ff --no-edit -m " + shell_quote(message) + " " + shell_quote(branch));
  }
  std::string rev(const std::string& what) {
    const std::filesystem::path out = dir_ / ".rev";
    sh("git rev-parse " + shell_quote(what) + " > " + shell_quote(out.string()));
    std::string s = read_file(out);
    std::filesystem::remove(out);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
  }

 private:
  void sh(const std::string& cmd) {
    const std::string date = "@" + std::to_string(1600000000 + clock_++) + " +0000";
    const std::string env = "GIT_CONFIG_NOSYSTEM=1 HOME=" + shell_quote(dir_.path().string()) +
                            " GIT_AUTHOR_NAME=Fixture GIT_AUTHOR_EMAIL=fixture@example.com"
                            " GIT_COMMITTER_NAME=Fixture GIT_COMMITTER_EMAIL=fixture@example.com"
                            " GIT_AUTHOR_DATE=" + shell_quote(date) + " GIT_COMMITTER_DATE=" + shell_quote(date);
    const std::string full = "cd " + shell_quote(dir_.path().string()) + " && " + env + " " + cmd;
    if (std::system(full.c_str()) != 0) throw std::runtime_error("fixture command failed: " + cmd);
  }

  TempDir dir_;
  long clock_ = 0;
};

/// The Laravel v8.4.2 release: seven commits after v8.4.1, the second of
/// them a real merge of the branch that carries v8.4.1.
inline void build_laravel_repo(GitFixture& git) {
  git.commit("Initial commit");
  git.branch("8.x");
  git.commit("Prepare 8.4.1");
  git.tag("v8.4.1");
  git.checkout("main");
  git.commit("Update CHANGELOG.md");
  git.merge("8.x", "Merge branch '8.x' of github.com:laravel/laravel into 8.x");
  git.commit("Modify the cache.php docblocks");
  git.commit("add stub handler\n\nRegisters the default stub handler for the framework.");
  git.commit("closed @auth correctly");
  git.commit("add sanctum cookie endpoint to default cors paths");
  git.commit("add auth line");
  git.annotated_tag("v8.4.2");
}

}  // namespace fixture
