#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kwnet/keyword.hpp"
#include "kwnet/ratio.hpp"
#include "kwnet/record.hpp"

namespace kwnet {

using KeywordCounts = std::map<CanonicalKeyword, std::int64_t>;

// Number of records whose keyword set (of `kind`) contains each keyword.
KeywordCounts keyword_frequencies(const Corpus& corpus, FieldKind kind, const SynonymMap& synonyms = {});

// Keywords appearing together with a focal keyword. A record belongs to the focal
// subset when its *author* keyword set contains the focal keyword, whatever `field`
// is counted. The focal keyword is never an entry.
struct CooccurrenceTable {
  CanonicalKeyword focal;
  FieldKind field = FieldKind::author;
  KeywordCounts counts;
  std::int64_t n_focal_papers = 0;

  KeywordSet keywords() const;
};

CooccurrenceTable cooccurring_with(const Corpus& corpus, const CanonicalKeyword& focal, FieldKind field,
                                   const SynonymMap& synonyms = {});

struct RankedEntry {
  CanonicalKeyword keyword;
  std::int64_t count = 0;

  friend bool operator==(const RankedEntry& a, const RankedEntry& b) = default;
};

// Non-increasing counts, ties in ascending canonical order.
struct RankedKeywords {
  std::vector<RankedEntry> entries;
  std::size_t k = 0;

  std::vector<CanonicalKeyword> keywords() const;
};

RankedKeywords rank_all(const KeywordCounts& counts);
RankedKeywords top_k(const KeywordCounts& counts, std::size_t k);
inline RankedKeywords top_k(const CooccurrenceTable& table, std::size_t k) { return top_k(table.counts, k); }

struct OverlapResult {
  std::size_t old_size = 0;
  std::size_t new_size = 0;
  std::size_t intersection = 0;
  std::size_t union_size = 0;
  Ratio percent;  // 100 * |old ∩ new| / |old ∪ new|
};

// Percentage Jaccard index of two keyword sets. Throws AnalysisError if both are empty.
OverlapResult overlap(const KeywordSet& old_set, const KeywordSet& new_set);

// f = late / early. Throws AnalysisError when early is zero.
Ratio growth_ratio(std::int64_t count_late, std::int64_t count_early);

// Keywords of two or more space-separated words, one of which equals `term`;
// ascending canonical order.
std::vector<CanonicalKeyword> multiword_containing(const KeywordSet& keywords, std::string_view term);

enum class Category { foundational, tool, specific, unclassified };

std::string_view to_string(Category category);

class CategoryLexicon {
 public:
  CategoryLexicon() = default;

  void add(std::string_view keyword, Category category);
  Category lookup(const CanonicalKeyword& keyword) const;
  std::size_t size() const { return map_.size(); }

  // `keyword,category` with a header row; category in {foundational,tool,specific}.
  static CategoryLexicon from_csv(std::string_view text);

  // The example classification of complexity-related author keywords: foundational
  // concepts, interdisciplinary tools and field-specific concepts.
  static CategoryLexicon reference();

 private:
  std::map<std::string, Category> map_;
};

Category classify(const CanonicalKeyword& keyword, const CategoryLexicon& lexicon);

// `rank,keyword,count` rows in ranked order. Keywords are written in canonical form.
std::string ranked_csv(const RankedKeywords& ranked);

}  // namespace kwnet
