#include "relnotes/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <string>
#include <unordered_set>

#include "relnotes/error.hpp"

namespace relnotes {

namespace {

constexpr auto kIcase = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;
constexpr auto kPlain = std::regex::ECMAScript | std::regex::optimize;

struct Patterns {
  std::regex comment{R"(<!--[^]*?-->)", kPlain};
  std::regex block_tag{
      R"(</?(?:br|p|div|li|ul|ol|h[1-6]|tr|table|pre|blockquote|details|summary|hr)\b[^<>\n]*>)", kIcase};
  std::regex inline_tag{R"(</?[A-Za-z][A-Za-z0-9-]*(?:\s[^<>\n]*)?/?>)", kPlain};
  std::regex md_link{R"(!?\[([^\]\n]*)\]\([^)\n]*\))", kPlain};
  std::regex sign_off{R"((?:^|\s)(?:signed-off-by|co-authored-by)\b.*$)", kIcase};
  std::regex reference{R"((?:\b(?:see|refs?|cf)\.?:?\s+)?(?:[A-Za-z0-9_.-]+/[A-Za-z0-9_.-]+)?#\d+\b)", kIcase};
  std::regex heading{R"(^\s*#{1,6}.*$)", kPlain};
  std::regex url{R"((?:\b(?:see|refs?|cf)\.?:?\s+)?(?:https?://|www\.)[^\s<>]+)", kIcase};
  std::regex mention{R"((^|[^A-Za-z0-9_.@/-])@[A-Za-z0-9][A-Za-z0-9-]{0,38})", kPlain};
  std::regex bullet{"^\\s*(?:[-*+>]|\xE2\x80\xA2|\\d+[.)])\\s+", kPlain};
  std::regex empty_brackets{R"((^|\s)(?:\(\s*\)|\[\s*\]|\{\s*\}))", kPlain};
  std::regex spaces{"(?:[ \\t\\f\\v\\r]|\xC2\xA0)+", kPlain};
};

const Patterns& patterns() {
  static const Patterns p;
  return p;
}

std::string decode_entities(std::string s) {
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"}, {"&nbsp;", " "},
      {"&amp;", "&"},
  };
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    if (s[i] == '&') {
      for (const auto& [entity, text] : kEntities) {
        if (std::string_view(s).substr(i).starts_with(entity)) {
          out.append(text);
          i += entity.size();
          hit = true;
          break;
        }
      }
    }
    if (!hit) out.push_back(s[i++]);
  }
  return out;
}

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c >= 0x80; });
}

std::string normalize(std::string s) {
  const Patterns& p = patterns();
  for (std::string prev; prev != s;) {
    prev = s;
    s = std::regex_replace(s, p.empty_brackets, "$1");
  }
  s = std::regex_replace(s, p.spaces, " ");
  constexpr std::string_view kLead = " \t-*:;,|>";
  constexpr std::string_view kTrail = " \t-*:;,|.";
  const auto first = s.find_first_not_of(kLead);
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(kTrail);
  if (last == std::string::npos || last < first) return {};
  return s.substr(first, last - first + 1);
}

// Splits on '.', '!' or '?' followed by whitespace or end of line. A closing
// '.' is dropped; '!' and '?' stay with their sentence.
void split_sentences(const std::string& line, std::vector<std::string>& out) {
  std::string current;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    const bool boundary = (c == '.' || c == '!' || c == '?') &&
                          (i + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[i + 1])));
    if (!boundary) {
      current.push_back(c);
      continue;
    }
    if (c != '.') current.push_back(c);
    if (std::string s = normalize(std::move(current)); has_alnum(s)) out.push_back(std::move(s));
    current.clear();
  }
  if (std::string s = normalize(std::move(current)); has_alnum(s)) out.push_back(std::move(s));
}

std::vector<std::string> clean_pass(std::string_view text) {
  const Patterns& p = patterns();
  std::string s(text);
  s = std::regex_replace(s, p.comment, " ");
  s = std::regex_replace(s, p.block_tag, "\n");
  s = std::regex_replace(s, p.inline_tag, "");
  s = decode_entities(std::move(s));
  s = std::regex_replace(s, p.md_link, "$1");

  std::vector<std::string> sentences;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find_first_of("\r\n", start);
    if (end == std::string::npos) end = s.size();
    std::string line = s.substr(start, end - start);
    start = end + 1;

    // a trailer runs to the end of its line
    line = std::regex_replace(line, p.sign_off, "");
    line = std::regex_replace(line, p.reference, " ");
    if (std::regex_match(line, p.heading)) continue;
    line = std::regex_replace(line, p.url, " ");
    line = std::regex_replace(line, p.mention, "$1");
    std::erase(line, '`');
    for (auto pos = line.find("**"); pos != std::string::npos; pos = line.find("**")) line.erase(pos, 2);
    line = std::regex_replace(line, p.bullet, "", std::regex_constants::format_first_only);
    split_sentences(line, sentences);
  }
  return sentences;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::regex glob_to_regex(std::string_view glob) {
  std::string rx;
  for (char c : glob) {
    switch (c) {
      case '*':
        rx += ".*";
        break;
      case '?':
        rx += '.';
        break;
      case '.': case '\\': case '+': case '^': case '$': case '|':
      case '(': case ')': case '[': case ']': case '{': case '}':
        rx += '\\';
        rx += c;
        break;
      default:
        rx += c;
    }
  }
  return std::regex(rx, kIcase);
}

const std::vector<std::string> kEnglishStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
    "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
    "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
    "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
    "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
    "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for",
    "with", "about", "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under",
    "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
    "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
    "should", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn",
    "doesn", "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan",
    "shouldn", "wasn", "weren", "won", "wouldn", "also", "could", "would", "may", "might",
    "must", "shall", "upon", "via", "yet", "us", "let", "within", "without", "across", "among",
    "whether",
};

}  // namespace

std::vector<std::string> read_pattern_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("preprocess", "cannot read pattern file " + path.string());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

StopwordList::StopwordList(std::vector<std::string> words) : words_(std::move(words)) {
  for (std::string& w : words_) w = lower_ascii(w);
  lookup_.insert(words_.begin(), words_.end());
}

const StopwordList& StopwordList::english() {
  static const StopwordList list(kEnglishStopwords);
  return list;
}

StopwordList StopwordList::from_file(const std::filesystem::path& path) {
  return StopwordList(read_pattern_file(path));
}

bool StopwordList::contains(std::string_view word) const { return lookup_.contains(std::string(word)); }

DenyList::DenyList(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {
  compiled_.reserve(patterns_.size());
  for (const std::string& g : patterns_) compiled_.push_back(glob_to_regex(g));
}

const DenyList& DenyList::defaults() {
  static const DenyList list({"merge pull request*", "merge branch*", "update .gitattributes",
                              "update changelog*", "bump version*"});
  return list;
}

DenyList DenyList::from_file(const std::filesystem::path& path) { return DenyList(read_pattern_file(path)); }

bool DenyList::matches(std::string_view line) const {
  std::string trimmed(line);
  const auto first = trimmed.find_first_not_of(" \t");
  if (first == std::string::npos) return false;
  trimmed = trimmed.substr(first, trimmed.find_last_not_of(" \t") - first + 1);
  return std::any_of(compiled_.begin(), compiled_.end(),
                     [&](const std::regex& rx) { return std::regex_match(trimmed, rx); });
}

std::vector<std::string> clean_text(std::string_view text) {
  std::vector<std::string> current = clean_pass(text);
  for (int round = 0; round < 8; ++round) {
    std::vector<std::string> next;
    bool changed = false;
    for (const std::string& s : current) {
      std::vector<std::string> again = clean_pass(s);
      if (again.size() != 1 || again.front() != s) changed = true;
      next.insert(next.end(), std::make_move_iterator(again.begin()), std::make_move_iterator(again.end()));
    }
    current = std::move(next);
    if (!changed) break;
  }
  return current;
}

std::vector<std::string> filter_trivial(const std::vector<std::string>& lines, const DenyList& deny) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& line : lines) {
    if (deny.matches(line)) continue;
    if (!seen.insert(line).second) continue;
    out.push_back(line);
  }
  return out;
}

TokenizedSentence tokenize(std::string_view sentence, const StopwordList& stopwords) {
  if (std::all_of(sentence.begin(), sentence.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw ContractError("preprocess", "cannot tokenize an empty sentence");
  }
  auto word_char = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };

  TokenizedSentence out;
  out.raw = std::string(sentence);
  const std::string lower = lower_ascii(sentence);
  std::size_t i = 0;
  while (i < lower.size()) {
    if (!word_char(lower[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < lower.size()) {
      if (word_char(lower[j])) {
        ++j;
      } else if ((lower[j] == '.' || lower[j] == '-') && j + 1 < lower.size() && word_char(lower[j + 1])) {
        // dots and hyphens stay inside identifiers such as cache.php
        j += 2;
      } else {
        break;
      }
    }
    out.tokens.push_back(lower.substr(i, j - i));
    i = j;
  }
  for (const std::string& t : out.tokens) {
    if (stopwords.contains(t)) continue;
    out.content_tokens.push_back(t);
    out.stemmed_tokens.push_back(porter_stem(t));
  }
  return out;
}

std::vector<TokenizedSentence> tokenize_all(const std::vector<std::string>& sentences,
                                            const StopwordList& stopwords) {
  std::vector<TokenizedSentence> out;
  out.reserve(sentences.size());
  for (const std::string& s : sentences) out.push_back(tokenize(s, stopwords));
  return out;
}

}  // namespace relnotes
