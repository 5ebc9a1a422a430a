#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kwnet {

// One publication parsed from a Web of Science export.
struct ArticleRecord {
  std::string id;  // UT accession number, or a synthetic "gen:<file>:<ordinal>"
  std::string title;
  std::string source;
  std::optional<int> pub_year;  // nullopt when PY is absent or unusable
  std::string doc_type;
  std::vector<std::string> author_keywords;  // DE
  std::vector<std::string> keywords_plus;    // ID
  std::vector<std::string> research_areas;   // SC
  std::vector<std::string> wos_categories;   // WC

  friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

struct Corpus {
  std::vector<ArticleRecord> records;
  std::vector<std::string> provenance;  // source files, then applied filters
  std::string period;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

}  // namespace kwnet
