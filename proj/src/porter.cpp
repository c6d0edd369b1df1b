#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "relnotes/preprocess.hpp"

namespace relnotes {

namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Longest suffixes first so the first hit is the longest match.
constexpr std::array<Rule, 20> kStep2 = {{
    {"ational", "ate"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"},
    {"ization", "ize"}, {"tional", "tion"}, {"biliti", "ble"},  {"entli", "ent"},
    {"ousli", "ous"},   {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
    {"iviti", "ive"},   {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
    {"abli", "able"},   {"alli", "al"},     {"ator", "ate"},    {"eli", "e"},
}};

constexpr std::array<Rule, 7> kStep3 = {{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ness", ""},  {"ful", ""},
}};

constexpr std::array<std::string_view, 19> kStep4 = {
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion", "ism",
    "ate",   "iti",  "ous",  "ive",  "ize",  "al",   "er",  "ic",  "ou",
};

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : b_(word) {}

  std::string run() && {
    if (b_.size() <= 2) return std::move(b_);
    step1a();
    step1b();
    step1c();
    step_rules(kStep2, 0);
    step_rules(kStep3, 0);
    step4();
    step5a();
    step5b();
    return std::move(b_);
  }

 private:
  std::string b_;

  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // m in [C](VC)^m[V] over the prefix b_[0, len).
  int measure(std::size_t len) const {
    int n = 0;
    std::size_t i = 0;
    while (true) {
      if (i >= len) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i >= len) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i >= len) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
  }

  // consonant-vowel-consonant ending, last consonant not w, x or y
  bool cvc(std::size_t len) const {
    if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const { return b_.ends_with(s); }

  std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

  void replace_suffix(std::string_view suffix, std::string_view with) {
    b_.resize(b_.size() - suffix.size());
    b_.append(with);
  }

  void step1a() {
    if (ends("sses")) {
      b_.resize(b_.size() - 2);
    } else if (ends("ies")) {
      replace_suffix("ies", "i");
    } else if (ends("ss")) {
    } else if (ends("s")) {
      b_.pop_back();
    }
  }

  void step1b() {
    bool trimmed = false;
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) b_.pop_back();
    } else if (ends("ed") && has_vowel(stem_len("ed"))) {
      b_.resize(stem_len("ed"));
      trimmed = true;
    } else if (ends("ing") && has_vowel(stem_len("ing"))) {
      b_.resize(stem_len("ing"));
      trimmed = true;
    }
    if (!trimmed) return;
    if (ends("at") || ends("bl") || ends("iz")) {
      b_.push_back('e');
    } else if (double_consonant(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(b_.size() - 1)) b_.back() = 'i';
  }

  template <std::size_t N>
  void step_rules(const std::array<Rule, N>& rules, int min_measure) {
    for (const Rule& r : rules) {
      if (!ends(r.suffix)) continue;
      if (measure(stem_len(r.suffix)) > min_measure) replace_suffix(r.suffix, r.replacement);
      return;
    }
  }

  void step4() {
    for (std::string_view suffix : kStep4) {
      if (!ends(suffix)) continue;
      const std::size_t len = stem_len(suffix);
      if (suffix == "ion") {
        if (len == 0 || (b_[len - 1] != 's' && b_[len - 1] != 't')) return;
      }
      if (measure(len) > 1) b_.resize(len);
      return;
    }
  }

  void step5a() {
    if (!ends("e")) return;
    const std::size_t len = b_.size() - 1;
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
  }

  void step5b() {
    if (b_.back() == 'l' && double_consonant(b_.size()) && measure(b_.size()) > 1) b_.pop_back();
  }
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace relnotes
