#include "relnotes/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "relnotes/error.hpp"

namespace relnotes {

namespace {

using nlohmann::json;

bool is_clean_sentence(const std::string& s) {
  if (s.find('\n') != std::string::npos || s.find('\r') != std::string::npos) return false;
  if (s.empty()) return true;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; };
  return !space(s.front()) && !space(s.back());
}

std::vector<std::string> string_list(const json& node, const char* field, std::size_t index) {
  if (!node.contains(field)) return {};
  const json& list = node.at(field);
  if (!list.is_array()) {
    throw SchemaError("corpus", "release " + std::to_string(index) + ": '" + field +
                                    "' must be an array of strings");
  }
  std::vector<std::string> out;
  out.reserve(list.size());
  for (const json& item : list) {
    if (!item.is_string()) {
      throw SchemaError("corpus", "release " + std::to_string(index) + ": '" + field +
                                      "' contains a non-string element");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_string(const json& node, const char* field, std::size_t index) {
  if (!node.contains(field) || !node.at(field).is_string()) {
    throw SchemaError("corpus", "release " + std::to_string(index) + ": missing string field '" +
                                    field + "'");
  }
  return node.at(field).get<std::string>();
}

}  // namespace

std::vector<std::size_t> ReleaseDataset::empty_reference_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < releases.size(); ++i) {
    if (!releases[i].has_reference()) out.push_back(i);
  }
  return out;
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::TextRankGlove:
      return "textrank-glove";
    case Method::TextRankTfidf:
      return "textrank-tfidf";
    case Method::TextRankBow:
      return "textrank-bow";
    case Method::Lsa:
      return "lsa";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::TextRankGlove, Method::TextRankTfidf, Method::TextRankBow, Method::Lsa}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void validate_record(const ReleaseRecord& record, std::size_t index) {
  const std::string where = "release " + std::to_string(index);
  if (record.tag.empty()) throw ValidationError("corpus", where + ": empty tag");
  for (const auto* list : {&record.reference_notes, &record.source}) {
    for (const std::string& s : *list) {
      if (!is_clean_sentence(s)) {
        throw ValidationError("corpus", where + ": sentence has surrounding whitespace or a newline");
      }
    }
  }
}

void validate_dataset(const ReleaseDataset& dataset) {
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < dataset.releases.size(); ++i) {
    const ReleaseRecord& r = dataset.releases[i];
    validate_record(r, i);
    if (!seen.emplace(r.project, r.tag).second) {
      throw ValidationError("corpus", "release " + std::to_string(i) + ": duplicate (project, tag) (" +
                                          r.project + ", " + r.tag + ")");
    }
  }
}

ReleaseDataset parse_dataset(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("corpus", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("releases") || !doc.at("releases").is_array()) {
    throw SchemaError("corpus", "document must be an object with a 'releases' array");
  }
  ReleaseDataset dataset;
  if (doc.contains("provenance")) {
    if (!doc.at("provenance").is_string()) throw SchemaError("corpus", "'provenance' must be a string");
    dataset.provenance = doc.at("provenance").get<std::string>();
  }
  const json& releases = doc.at("releases");
  dataset.releases.reserve(releases.size());
  for (std::size_t i = 0; i < releases.size(); ++i) {
    const json& node = releases[i];
    if (!node.is_object()) {
      throw SchemaError("corpus", "release " + std::to_string(i) + ": expected an object");
    }
    ReleaseRecord r;
    r.project = required_string(node, "project", i);
    r.tag = required_string(node, "tag", i);
    r.date = node.contains("date") && node.at("date").is_string() ? node.at("date").get<std::string>() : "";
    r.reference_notes = string_list(node, "reference_notes", i);
    r.source = string_list(node, "source", i);
    dataset.releases.push_back(std::move(r));
  }
  validate_dataset(dataset);
  return dataset;
}

ReleaseDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("corpus", "cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string dump_dataset(const ReleaseDataset& dataset) {
  json releases = json::array();
  for (const ReleaseRecord& r : dataset.releases) {
    releases.push_back({{"project", r.project},
                        {"tag", r.tag},
                        {"date", r.date},
                        {"reference_notes", r.reference_notes},
                        {"source", r.source}});
  }
  json doc = {{"provenance", dataset.provenance}, {"releases", std::move(releases)}};
  return doc.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io", "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("io", "short write to " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("io", "cannot move output into place at " + path.string());
  }
}

void save_dataset(const ReleaseDataset& dataset, const std::filesystem::path& path) {
  validate_dataset(dataset);
  write_file_atomic(path, dump_dataset(dataset));
}

FilterResult filter_empty_references(const ReleaseDataset& dataset) {
  FilterResult result;
  result.dataset.provenance = dataset.provenance;
  result.total = dataset.releases.size();
  for (const ReleaseRecord& r : dataset.releases) {
    if (r.has_reference()) {
      result.dataset.releases.push_back(r);
    } else {
      ++result.removed;
    }
  }
  result.removed_fraction =
      result.total == 0 ? 0.0 : static_cast<double>(result.removed) / static_cast<double>(result.total);
  return result;
}

}  // namespace relnotes
