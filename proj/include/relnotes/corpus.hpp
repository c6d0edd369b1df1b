#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relnotes {

/// One published release: its hand-written note and the commit-derived
/// sentences it could be summarized from.
struct ReleaseRecord {
  std::string project;  // owner/name
  std::string tag;
  std::string date;  // ISO-8601
  std::vector<std::string> reference_notes;
  std::vector<std::string> source;

  bool has_reference() const noexcept { return !reference_notes.empty(); }

  bool operator==(const ReleaseRecord&) const = default;
};

struct ReleaseDataset {
  std::vector<ReleaseRecord> releases;
  std::string provenance;

  /// Positions of releases whose reference note is empty.
  std::vector<std::size_t> empty_reference_indices() const;

  bool operator==(const ReleaseDataset&) const = default;
};

enum class Method { TextRankGlove, TextRankTfidf, TextRankBow, Lsa };

std::string_view to_string(Method method) noexcept;
/// Accepts the canonical names: textrank-glove, textrank-tfidf, textrank-bow, lsa.
std::optional<Method> parse_method(std::string_view name) noexcept;

/// An extractive release-note draft. `indices` are positions in the source
/// list, strictly increasing; `sentences[i] == source[indices[i]]`.
struct GeneratedSummary {
  std::vector<std::string> sentences;
  Method method = Method::TextRankGlove;
  std::vector<std::size_t> indices;
  std::optional<std::vector<double>> scores;
  // Set when the scorer could not separate sentences (zero LSA matrix) or
  // the ranking hit its iteration cap.
  bool degenerate = false;
  bool converged = true;
};

/// Checks the record invariants; throws ValidationError mentioning `index`.
void validate_record(const ReleaseRecord& record, std::size_t index);

/// Checks every record plus (project, tag) uniqueness.
void validate_dataset(const ReleaseDataset& dataset);

ReleaseDataset load_dataset(const std::filesystem::path& path);
ReleaseDataset parse_dataset(std::string_view json_text);

/// Writes to a sibling temp file and renames it into place.
void save_dataset(const ReleaseDataset& dataset, const std::filesystem::path& path);
std::string dump_dataset(const ReleaseDataset& dataset);

struct FilterResult {
  ReleaseDataset dataset;
  double removed_fraction = 0.0;
  std::size_t removed = 0;
  std::size_t total = 0;
};

FilterResult filter_empty_references(const ReleaseDataset& dataset);

/// Writes `contents` to `path` atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace relnotes
