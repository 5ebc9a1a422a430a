#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwnet/keyword.hpp"
#include "kwnet/record.hpp"

namespace kwnet {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

struct ParseResult {
  std::vector<ArticleRecord> records;
  std::vector<std::string> warnings;
};

// Parses a Web of Science tagged plain-text export.
//
// Field lines are a two-character tag, one space and a value; lines starting with
// exactly three spaces continue the previous field. "ER" closes a record and "EF"
// closes the file. DE/ID/SC/WC values are joined across continuation lines with a
// single space and then split on ';'. A leading UTF-8 byte-order mark is skipped.
//
// Throws ParseError on malformed UTF-8 or on a record block that never reaches "ER".
ParseResult parse_export(std::string_view bytes, std::string_view source_name);

// Builds a corpus from per-file parse results, in argument order. Records whose id
// was already seen are dropped with a warning so ids stay unique.
Corpus assemble_corpus(std::span<const ParseResult> parts, std::span<const std::string> source_names,
                       std::vector<std::string>* warnings);

// Reads WoS exports or canonical corpus JSON files (detected by content) and merges
// them in argument order. Files are parsed concurrently.
Corpus load_corpus(std::span<const std::filesystem::path> paths, std::vector<std::string>* warnings);

std::string read_file(const std::filesystem::path& path);

// Replaces `path` through a sibling temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct YearRange {
  int low = kMinYear;
  int high = kMaxYear;

  bool contains(int year) const { return low <= year && year <= high; }
  std::string label() const;

  // Parses "A-B" (or a single year "A").
  static YearRange parse(std::string_view text);

  friend bool operator==(const YearRange&, const YearRange&) = default;
};

// Selection criteria. Absent or empty clauses accept everything. Document type and
// research area are compared after keyword normalization; a record matches when any
// of its ';'-separated DT parts or any SC entry is in the set.
struct CorpusFilter {
  std::optional<YearRange> years;
  std::set<std::string> doc_types;       // normalized
  std::set<std::string> research_areas;  // normalized
  std::optional<CanonicalKeyword> require_author_keyword;
  std::string label;  // period label; defaults to the year range

  CorpusFilter& with_doc_type(std::string_view raw);
  CorpusFilter& with_area(std::string_view raw);

  bool accepts(const ArticleRecord& record) const;
  std::string describe() const;
};

Corpus filter_corpus(const Corpus& corpus, const CorpusFilter& filter);

// Canonical corpus JSON: {"period","provenance","records":[...]} with fixed key order,
// newline-terminated.
std::string serialize_corpus(const Corpus& corpus);

// Throws SchemaError naming the offending JSON path.
Corpus deserialize_corpus(std::string_view json_text);

}  // namespace kwnet
