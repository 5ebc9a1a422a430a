#include "kwnet/cooccur.hpp"

#include <algorithm>

#include "kwnet/csv.hpp"
#include "kwnet/errors.hpp"

namespace kwnet {

KeywordCounts keyword_frequencies(const Corpus& corpus, FieldKind kind, const SynonymMap& synonyms) {
  KeywordCounts counts;
  for (const auto& record : corpus.records)
    for (const auto& k : keyword_set(record, kind, synonyms)) ++counts[k];
  return counts;
}

KeywordSet CooccurrenceTable::keywords() const {
  KeywordSet out;
  for (const auto& [k, _] : counts) out.insert(k);
  return out;
}

CooccurrenceTable cooccurring_with(const Corpus& corpus, const CanonicalKeyword& focal, FieldKind field,
                                   const SynonymMap& synonyms) {
  CooccurrenceTable table;
  table.focal = focal;
  table.field = field;
  for (const auto& record : corpus.records) {
    const auto authors = author_keyword_set(record, synonyms);
    if (!authors.contains(focal)) continue;
    ++table.n_focal_papers;
    const auto keywords = field == FieldKind::author ? authors : keywords_plus_set(record, synonyms);
    for (const auto& k : keywords)
      if (k != focal) ++table.counts[k];
  }
  return table;
}

std::vector<CanonicalKeyword> RankedKeywords::keywords() const {
  std::vector<CanonicalKeyword> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.keyword);
  return out;
}

namespace {

bool ranks_before(const RankedEntry& a, const RankedEntry& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.keyword.canonical < b.keyword.canonical;
}

}  // namespace

RankedKeywords rank_all(const KeywordCounts& counts) {
  RankedKeywords ranked;
  ranked.entries.reserve(counts.size());
  for (const auto& [k, c] : counts) ranked.entries.push_back({k, c});
  std::stable_sort(ranked.entries.begin(), ranked.entries.end(), ranks_before);
  ranked.k = ranked.entries.size();
  return ranked;
}

RankedKeywords top_k(const KeywordCounts& counts, std::size_t k) {
  if (k < 1) throw UsageError("k must be at least 1");
  RankedKeywords ranked;
  ranked.k = k;
  ranked.entries.reserve(counts.size());
  for (const auto& [kw, c] : counts) ranked.entries.push_back({kw, c});
  const auto keep = std::min(k, ranked.entries.size());
  std::partial_sort(ranked.entries.begin(), ranked.entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranked.entries.end(), ranks_before);
  ranked.entries.resize(keep);
  return ranked;
}

OverlapResult overlap(const KeywordSet& old_set, const KeywordSet& new_set) {
  OverlapResult r;
  r.old_size = old_set.size();
  r.new_size = new_set.size();
  // Both sets are sorted by canonical text.
  auto a = old_set.begin();
  auto b = new_set.begin();
  while (a != old_set.end() && b != new_set.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++r.intersection;
      ++a;
      ++b;
    }
  }
  r.union_size = r.old_size + r.new_size - r.intersection;
  if (r.union_size == 0) throw AnalysisError("overlap is undefined for two empty keyword sets");
  r.percent = Ratio{100 * static_cast<std::int64_t>(r.intersection), static_cast<std::int64_t>(r.union_size)};
  return r;
}

Ratio growth_ratio(std::int64_t count_late, std::int64_t count_early) {
  if (count_early == 0) throw AnalysisError("growth ratio: the earlier period has no papers (division by zero)");
  if (count_early < 0 || count_late < 0) throw AnalysisError("growth ratio: negative paper count");
  return Ratio{count_late, count_early};
}

std::vector<CanonicalKeyword> multiword_containing(const KeywordSet& keywords, std::string_view term) {
  std::vector<CanonicalKeyword> out;
  for (const auto& k : keywords) {
    std::string_view text = k.canonical;
    int words = 0;
    bool hit = false;
    while (!text.empty()) {
      const auto space = text.find(' ');
      const auto word = text.substr(0, space);
      if (!word.empty()) {
        ++words;
        hit = hit || word == term;
      }
      if (space == std::string_view::npos) break;
      text.remove_prefix(space + 1);
    }
    if (words >= 2 && hit) out.push_back(k);
  }
  return out;  // KeywordSet order is already ascending
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::foundational: return "foundational";
    case Category::tool: return "tool";
    case Category::specific: return "specific";
    case Category::unclassified: break;
  }
  return "unclassified";
}

void CategoryLexicon::add(std::string_view keyword, Category category) {
  if (category == Category::unclassified) throw InputError("lexicon: 'unclassified' is not a category");
  auto k = normalize_text(keyword);
  if (k.empty()) throw InputError("lexicon: empty keyword");
  map_[std::move(k)] = category;
}

Category CategoryLexicon::lookup(const CanonicalKeyword& keyword) const {
  const auto it = map_.find(keyword.canonical);
  return it == map_.end() ? Category::unclassified : it->second;
}

CategoryLexicon CategoryLexicon::from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().size() != 2 || normalize_text(rows.front()[0]) != "keyword" ||
      normalize_text(rows.front()[1]) != "category")
    throw InputError("lexicon: header row 'keyword,category' required");
  CategoryLexicon lexicon;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw InputError("lexicon: row " + std::to_string(i + 1) + " does not have two columns");
    const auto cat = normalize_text(rows[i][1]);
    Category c;
    if (cat == "foundational") c = Category::foundational;
    else if (cat == "tool") c = Category::tool;
    else if (cat == "specific") c = Category::specific;
    else throw InputError("lexicon: row " + std::to_string(i + 1) + ": unknown category '" + rows[i][1] + "'");
    lexicon.add(rows[i][0], c);
  }
  return lexicon;
}

CategoryLexicon CategoryLexicon::reference() {
  CategoryLexicon lexicon;
  for (const char* k : {"Chaos", "Fractals", "Self-Organization", "Emergence", "Entropy", "Path dependence",
                        "Autopoiesis", "Self-similarity", "Complex adaptive systems"})
    lexicon.add(k, Category::foundational);
  for (const char* k : {"ABM", "Networks", "Stochastic Process", "Algorithms", "Volatility", "Dimensions",
                        "Simulations", "Power laws", "Matching models"})
    lexicon.add(k, Category::tool);
  for (const char* k : {"Climate Change", "Habitat Complexity", "Financial Market", "Aging", "Sustainability",
                        "EEG", "Social work", "Working memory", "Biodiversity"})
    lexicon.add(k, Category::specific);
  return lexicon;
}

Category classify(const CanonicalKeyword& keyword, const CategoryLexicon& lexicon) {
  return lexicon.lookup(keyword);
}

std::string ranked_csv(const RankedKeywords& ranked) {
  std::string out = "rank,keyword,count\n";
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    out += std::to_string(i + 1) + "," + csv_field(ranked.entries[i].keyword.canonical) + "," +
           std::to_string(ranked.entries[i].count) + "\n";
  }
  return out;
}

}  // namespace kwnet
