#include "relnotes/rouge.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "relnotes/error.hpp"

namespace relnotes {

namespace {

using Table = std::vector<std::vector<std::size_t>>;

Table lcs_table(std::span<const std::string> a, std::span<const std::string> b) {
  Table t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t;
}

// Positions in `ref` of one LCS with `cand`, walking the table back from the end.
std::vector<std::size_t> lcs_positions(std::span<const std::string> ref, std::span<const std::string> cand) {
  const Table t = lcs_table(ref, cand);
  std::vector<std::size_t> out;
  std::size_t i = ref.size(), j = cand.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      out.push_back(i - 1);
      --i;
      --j;
    } else if (t[i][j - 1] > t[i - 1][j]) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::map<std::vector<std::string_view>, std::size_t> ngram_counts(std::span<const std::string> tokens, int n) {
  std::map<std::vector<std::string_view>, std::size_t> counts;
  const auto width = static_cast<std::size_t>(n);
  if (tokens.size() < width) return counts;
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(i + width));
    ++counts[std::move(gram)];
  }
  return counts;
}

RougeScore make_score(double hits, double ref_total, double gen_total) {
  RougeScore s;
  if (ref_total <= 0.0 || gen_total <= 0.0) return s;
  s.recall = hits / ref_total;
  s.precision = hits / gen_total;
  s.f1 = f_measure(s.recall, s.precision);
  return s;
}

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double f_measure(double recall, double precision) noexcept {
  if (recall + precision <= 0.0) return 0.0;
  return 2.0 * recall * precision / (recall + precision);
}

RougeScore rouge_n(std::span<const std::string> reference, std::span<const std::string> generated, int n) {
  if (n != 1 && n != 2) throw ContractError("rouge", "ROUGE-N is defined here for n = 1 or 2");
  const auto ref = ngram_counts(reference, n);
  const auto gen = ngram_counts(generated, n);
  std::size_t ref_total = 0, gen_total = 0, overlap = 0;
  for (const auto& [_, c] : ref) ref_total += c;
  for (const auto& [_, c] : gen) gen_total += c;
  for (const auto& [gram, c] : ref) {
    if (auto it = gen.find(gram); it != gen.end()) overlap += std::min(c, it->second);
  }
  return make_score(static_cast<double>(overlap), static_cast<double>(ref_total), static_cast<double>(gen_total));
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  // Two rolling rows; the full table is only needed for backtracking.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> reference, std::span<const std::string> generated) {
  return make_score(static_cast<double>(lcs_length(reference, generated)), static_cast<double>(reference.size()),
                    static_cast<double>(generated.size()));
}

RougeScore rouge_l_summary(std::span<const std::vector<std::string>> reference,
                           std::span<const std::vector<std::string>> generated) {
  std::size_t ref_total = 0, gen_total = 0;
  std::unordered_map<std::string_view, std::size_t> ref_left, gen_left;
  for (const auto& s : reference) {
    ref_total += s.size();
    for (const auto& t : s) ++ref_left[t];
  }
  for (const auto& s : generated) {
    gen_total += s.size();
    for (const auto& t : s) ++gen_left[t];
  }
  if (ref_total == 0 || gen_total == 0) return {};

  std::size_t hits = 0;
  for (const auto& ref_sentence : reference) {
    std::set<std::size_t> hit_positions;
    for (const auto& gen_sentence : generated) {
      for (std::size_t p : lcs_positions(ref_sentence, gen_sentence)) hit_positions.insert(p);
    }
    for (std::size_t p : hit_positions) {
      const std::string_view token = ref_sentence[p];
      auto& r = ref_left[token];
      auto& g = gen_left[token];
      if (r > 0 && g > 0) {
        ++hits;
        --r;
        --g;
      }
    }
  }
  return make_score(static_cast<double>(hits), static_cast<double>(ref_total), static_cast<double>(gen_total));
}

std::vector<std::string> rouge_tokens(const TokenizedSentence& sentence, const RougeOptions& options) {
  if (!options.include_stopwords) return sentence.stemmed_tokens;
  std::vector<std::string> out;
  out.reserve(sentence.tokens.size());
  for (const std::string& t : sentence.tokens) out.push_back(porter_stem(t));
  return out;
}

RougeReport evaluate_release(const ReleaseRecord& record, const GeneratedSummary& summary,
                             const RougeOptions& options, const StopwordList& stopwords) {
  if (record.reference_notes.empty()) {
    throw ContractError("rouge", "release " + record.tag + " has no reference note to score against");
  }
  if (summary.sentences.size() > record.reference_notes.size()) {
    throw ContractError("rouge", "summary for " + record.tag + " is longer than its reference note");
  }
  auto sentence_tokens = [&](const std::vector<std::string>& sentences) {
    std::vector<std::vector<std::string>> out;
    for (const std::string& s : sentences) {
      if (s.find_first_not_of(" \t") == std::string::npos) continue;
      out.push_back(rouge_tokens(tokenize(s, stopwords), options));
    }
    return out;
  };
  auto flatten = [](const std::vector<std::vector<std::string>>& sentences) {
    std::vector<std::string> out;
    for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
    return out;
  };

  const auto ref_sentences = sentence_tokens(record.reference_notes);
  const auto gen_sentences = sentence_tokens(summary.sentences);
  const auto ref = flatten(ref_sentences);
  const auto gen = flatten(gen_sentences);

  RougeReport report;
  report.rouge1 = rouge_n(ref, gen, 1);
  report.rouge2 = rouge_n(ref, gen, 2);
  report.rougeL =
      options.lcs_mode == LcsMode::Summary ? rouge_l_summary(ref_sentences, gen_sentences) : rouge_l(ref, gen);
  return report;
}

RougeReport aggregate(std::span<const RougeReport> reports) {
  if (reports.empty()) throw ContractError("rouge", "cannot aggregate zero reports");
  RougeReport sum;
  auto add = [](RougeScore& acc, const RougeScore& x) {
    acc.recall += x.recall;
    acc.precision += x.precision;
    acc.f1 += x.f1;
  };
  for (const RougeReport& r : reports) {
    add(sum.rouge1, r.rouge1);
    add(sum.rouge2, r.rouge2);
    add(sum.rougeL, r.rougeL);
  }
  const double n = static_cast<double>(reports.size());
  for (RougeScore* s : {&sum.rouge1, &sum.rouge2, &sum.rougeL}) {
    s->recall /= n;
    s->precision /= n;
    s->f1 /= n;
  }
  return sum;
}

std::string csv_header() { return "project,tag,method,r1_r,r1_p,r1_f,r2_r,r2_p,r2_f,rl_r,rl_p,rl_f"; }

std::string csv_row(std::string_view project, std::string_view tag, std::string_view method,
                    const RougeReport& report) {
  std::string row = csv_field(project) + "," + csv_field(tag) + "," + csv_field(method);
  for (const RougeScore* s : {&report.rouge1, &report.rouge2, &report.rougeL}) {
    row += "," + percent(s->recall) + "," + percent(s->precision) + "," + percent(s->f1);
  }
  return row;
}

}  // namespace relnotes
