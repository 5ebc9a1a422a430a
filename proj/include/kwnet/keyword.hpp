#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "kwnet/record.hpp"

namespace kwnet {

// Normalized keyword. Identity, ordering and hashing use `canonical` only;
// `display` keeps the first surface form seen for reporting.
struct CanonicalKeyword {
  std::string canonical;
  std::string display;

  CanonicalKeyword() = default;
  explicit CanonicalKeyword(std::string canon) : canonical(canon), display(std::move(canon)) {}
  CanonicalKeyword(std::string canon, std::string disp)
      : canonical(std::move(canon)), display(std::move(disp)) {}

  friend bool operator==(const CanonicalKeyword& a, const CanonicalKeyword& b) {
    return a.canonical == b.canonical;
  }
  friend std::strong_ordering operator<=>(const CanonicalKeyword& a, const CanonicalKeyword& b) {
    return a.canonical <=> b.canonical;
  }
};

using KeywordSet = std::set<CanonicalKeyword>;

// Lowercases (ASCII and Latin-1 letters, locale independent), trims, collapses
// whitespace runs to one space and maps typographic dashes to '-'.
std::string normalize_text(std::string_view raw);

// alias -> preferred canonical form. Acyclic: no preferred form is itself an alias.
class SynonymMap {
 public:
  SynonymMap() = default;

  // Both sides are normalized. Throws InputError if the pair would create a chain.
  void add(std::string_view alias, std::string_view preferred);

  const std::string* lookup(const std::string& canonical) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }

  // Two-column CSV `alias,preferred` with a header row.
  static SynonymMap from_csv(std::string_view text);

 private:
  std::map<std::string, std::string> map_;
  std::set<std::string> targets_;
};

// nullopt when nothing is left after normalization.
std::optional<CanonicalKeyword> normalize(std::string_view raw, const SynonymMap& synonyms = {});

enum class FieldKind { author, plus };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view text);

KeywordSet author_keyword_set(const ArticleRecord& record, const SynonymMap& synonyms = {});
KeywordSet keywords_plus_set(const ArticleRecord& record, const SynonymMap& synonyms = {});
KeywordSet keyword_set(const ArticleRecord& record, FieldKind kind, const SynonymMap& synonyms = {});

}  // namespace kwnet
