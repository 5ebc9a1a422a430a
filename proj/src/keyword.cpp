#include "kwnet/keyword.hpp"

#include "kwnet/csv.hpp"
#include "kwnet/errors.hpp"

namespace kwnet {

namespace {

// Rewrites one keyword. Whitespace (including NBSP) becomes a single separator,
// typographic dashes become '-', and when `lower` is set ASCII and Latin-1 capitals
// are lowercased.
std::string rewrite(std::string_view raw, bool lower) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += piece;
  };

  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n;) {
    const unsigned char c = p[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      pending_space = true;
      ++i;
      continue;
    }
    if (c < 0x80) {
      char ch = static_cast<char>(c);
      if (lower && ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      emit(std::string_view(&ch, 1));
      ++i;
      continue;
    }
    if (c == 0xC2 && i + 1 < n && p[i + 1] == 0xA0) {  // U+00A0
      pending_space = true;
      i += 2;
      continue;
    }
    if (c == 0xC3 && i + 1 < n && lower && p[i + 1] >= 0x80 && p[i + 1] <= 0x9E && p[i + 1] != 0x97) {
      const char lowered[2] = {static_cast<char>(0xC3), static_cast<char>(p[i + 1] + 0x20)};
      emit(std::string_view(lowered, 2));
      i += 2;
      continue;
    }
    if (i + 2 < n) {
      const unsigned c1 = p[i + 1], c2 = p[i + 2];
      const bool dash = (c == 0xE2 && c1 == 0x80 && c2 >= 0x90 && c2 <= 0x95) ||  // U+2010..U+2015
                        (c == 0xE2 && c1 == 0x88 && c2 == 0x92) ||                // U+2212
                        (c == 0xEF && c1 == 0xB9 && c2 == 0xA3) ||                // U+FE63
                        (c == 0xEF && c1 == 0xBC && c2 == 0x8D);                  // U+FF0D
      if (dash) {
        emit("-");
        i += 3;
        continue;
      }
    }
    std::size_t len = 1;
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    len = std::min(len, n - i);
    emit(raw.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

std::string normalize_text(std::string_view raw) { return rewrite(raw, true); }

void SynonymMap::add(std::string_view alias, std::string_view preferred) {
  std::string a = normalize_text(alias);
  std::string p = normalize_text(preferred);
  if (a.empty() || p.empty()) throw InputError("synonyms: empty alias or preferred form");
  if (a == p) return;
  if (const auto it = map_.find(a); it != map_.end()) {
    if (it->second == p) return;
    throw InputError("synonyms: '" + a + "' mapped to both '" + it->second + "' and '" + p + "'");
  }
  if (map_.contains(p)) throw InputError("synonyms: preferred form '" + p + "' is itself an alias");
  if (targets_.contains(a)) throw InputError("synonyms: alias '" + a + "' is already a preferred form");
  targets_.insert(p);
  map_.emplace(std::move(a), std::move(p));
}

const std::string* SynonymMap::lookup(const std::string& canonical) const {
  const auto it = map_.find(canonical);
  return it == map_.end() ? nullptr : &it->second;
}

SynonymMap SynonymMap::from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().size() != 2 || normalize_text(rows.front()[0]) != "alias" ||
      normalize_text(rows.front()[1]) != "preferred")
    throw InputError("synonyms: header row 'alias,preferred' required");
  SynonymMap map;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2)
      throw InputError("synonyms: row " + std::to_string(i + 1) + " does not have two columns");
    map.add(rows[i][0], rows[i][1]);
  }
  return map;
}

std::optional<CanonicalKeyword> normalize(std::string_view raw, const SynonymMap& synonyms) {
  std::string canonical = normalize_text(raw);
  if (canonical.empty()) return std::nullopt;
  if (const auto* preferred = synonyms.lookup(canonical)) return CanonicalKeyword(*preferred);
  return CanonicalKeyword(std::move(canonical), rewrite(raw, false));
}

std::string_view to_string(FieldKind kind) { return kind == FieldKind::author ? "author" : "plus"; }

FieldKind parse_field_kind(std::string_view text) {
  if (text == "author" || text == "author-keywords" || text == "DE") return FieldKind::author;
  if (text == "plus" || text == "keywords-plus" || text == "ID") return FieldKind::plus;
  throw UsageError("unknown keyword field '" + std::string(text) + "' (expected author or plus)");
}

namespace {

KeywordSet collect(const std::vector<std::string>& raw, const SynonymMap& synonyms) {
  KeywordSet out;
  for (const auto& item : raw)
    if (auto k = normalize(item, synonyms)) out.insert(std::move(*k));
  return out;
}

}  // namespace

KeywordSet author_keyword_set(const ArticleRecord& record, const SynonymMap& synonyms) {
  return collect(record.author_keywords, synonyms);
}

KeywordSet keywords_plus_set(const ArticleRecord& record, const SynonymMap& synonyms) {
  return collect(record.keywords_plus, synonyms);
}

KeywordSet keyword_set(const ArticleRecord& record, FieldKind kind, const SynonymMap& synonyms) {
  return kind == FieldKind::author ? author_keyword_set(record, synonyms) : keywords_plus_set(record, synonyms);
}

}  // namespace kwnet
