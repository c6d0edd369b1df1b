#include "relnotes/vectorize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "relnotes/error.hpp"

namespace relnotes {

double overlap_similarity(const TokenizedSentence& a, const TokenizedSentence& b) {
  const auto& ta = a.content_tokens;
  const auto& tb = b.content_tokens;
  if (ta.empty() || tb.empty()) return 0.0;
  const double denom = std::log(static_cast<double>(ta.size())) + std::log(static_cast<double>(tb.size()));
  if (denom <= 0.0) return 0.0;
  const std::set<std::string_view> sa(ta.begin(), ta.end());
  const std::set<std::string_view> sb(tb.begin(), tb.end());
  std::size_t shared = 0;
  for (std::string_view t : sa) shared += sb.count(t);
  return static_cast<double>(shared) / denom;
}

std::size_t TfidfModel::doc_freq(std::string_view word) const {
  auto it = doc_freq_.find(word);
  return it == doc_freq_.end() ? 0 : it->second;
}

double TfidfModel::idf(std::string_view word) const {
  const std::size_t df = doc_freq(word);
  if (df == 0) return 0.0;
  return std::log(static_cast<double>(num_sentences_) / static_cast<double>(df));
}

TfidfModel fit_tfidf(std::span<const TokenizedSentence> corpus) {
  if (corpus.empty()) throw ContractError("vectorize", "cannot fit TF-IDF on an empty corpus");
  TfidfModel model;
  model.num_sentences_ = corpus.size();
  for (const TokenizedSentence& s : corpus) {
    const std::set<std::string_view> distinct(s.content_tokens.begin(), s.content_tokens.end());
    for (std::string_view w : distinct) {
      auto it = model.doc_freq_.find(w);
      if (it == model.doc_freq_.end()) {
        model.doc_freq_.emplace(std::string(w), 1);
      } else {
        ++it->second;
      }
    }
  }
  return model;
}

SparseVector tfidf_vector(const TokenizedSentence& sentence, const TfidfModel& model) {
  SparseVector out;
  const auto& tokens = sentence.content_tokens;
  if (tokens.empty()) return out;
  std::map<std::string_view, std::size_t> counts;
  for (const std::string& t : tokens) ++counts[t];
  const double total = static_cast<double>(tokens.size());
  for (const auto& [word, count] : counts) {
    const double weight = (static_cast<double>(count) / total) * model.idf(word);
    if (weight != 0.0) out.emplace(std::string(word), weight);
  }
  return out;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionError("vectorize", "cosine of vectors with lengths " + std::to_string(u.size()) + " and " +
                                          std::to_string(v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double cosine_similarity(const SparseVector& u, const SparseVector& v) {
  double nu = 0.0, nv = 0.0, dot = 0.0;
  for (const auto& [_, x] : u) nu += x * x;
  for (const auto& [_, x] : v) nv += x * x;
  if (nu == 0.0 || nv == 0.0) return 0.0;
  for (const auto& [word, x] : u) {
    if (auto it = v.find(word); it != v.end()) dot += x * it->second;
  }
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension), zero_(dimension, 0.0f) {
  if (dimension == 0) throw DimensionError("vectorize", "embedding dimension must be positive");
}

bool EmbeddingStore::contains(std::string_view word) const { return index_.find(word) != index_.end(); }

std::span<const float> EmbeddingStore::lookup(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return zero_;
  return std::span<const float>(data_).subspan(it->second * dimension_, dimension_);
}

bool EmbeddingStore::add(std::string word, std::span<const float> vector) {
  if (vector.size() != dimension_) {
    throw DimensionError("vectorize", "vector for '" + word + "' has " + std::to_string(vector.size()) +
                                          " entries, expected " + std::to_string(dimension_));
  }
  if (contains(word)) return false;
  index_.emplace(std::move(word), index_.size());
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_floats(std::span<const std::string_view> fields, std::vector<float>& out) {
  out.clear();
  for (std::string_view f : fields) {
    float x = 0.0f;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
    if (ec != std::errc() || ptr != f.data() + f.size()) return false;
    out.push_back(x);
  }
  return true;
}

bool is_count_header(const std::vector<std::string_view>& fields) {
  if (fields.size() != 2) return false;
  for (std::string_view f : fields) {
    std::size_t x = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
    if (ec != std::errc() || ptr != f.data() + f.size()) return false;
  }
  return true;
}

}  // namespace

EmbeddingStore load_embeddings(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("vectorize", "cannot read embeddings file " + path.string());

  std::optional<EmbeddingStore> store;
  if (expected_dim) store.emplace(*expected_dim);
  std::size_t lines = 0, skipped = 0;
  std::vector<float> values;
  bool first = true;
  for (std::string line; std::getline(in, line);) {
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (is_count_header(fields) && (!expected_dim || *expected_dim != 1)) continue;
    }
    ++lines;
    if (fields.size() < 2) {
      ++skipped;
      continue;
    }
    if (!store) store.emplace(fields.size() - 1);
    if (fields.size() - 1 != store->dimension() ||
        !parse_floats(std::span(fields).subspan(1), values)) {
      ++skipped;
      continue;
    }
    store->add(std::string(fields.front()), values);
  }
  if (!store || lines == 0) throw SchemaError("vectorize", "no vectors in " + path.string());
  if (static_cast<double>(skipped) > 0.01 * static_cast<double>(lines)) {
    throw DimensionError("vectorize", path.string() + ": " + std::to_string(skipped) + " of " +
                                          std::to_string(lines) + " lines do not have " +
                                          std::to_string(store->dimension()) + " numeric components");
  }
  store->skipped_lines_ = skipped;
  return std::move(*store);
}

DenseVector sentence_embedding(const TokenizedSentence& sentence, const EmbeddingStore& store) {
  DenseVector out(store.dimension(), 0.0);
  const auto& tokens = sentence.content_tokens;
  if (tokens.empty()) return out;
  for (const std::string& t : tokens) {
    const auto v = store.lookup(t);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  const double n = static_cast<double>(tokens.size());
  for (double& x : out) x /= n;
  return out;
}

}  // namespace relnotes
