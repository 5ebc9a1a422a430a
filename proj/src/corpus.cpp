#include <charconv>
#include <set>

#include <json.hpp>

#include "kwnet/errors.hpp"
#include "kwnet/wos.hpp"

namespace kwnet {

using nlohmann::json;
using nlohmann::ordered_json;

std::string YearRange::label() const {
  return low == high ? std::to_string(low) : std::to_string(low) + "-" + std::to_string(high);
}

YearRange YearRange::parse(std::string_view text) {
  auto number = [&](std::string_view part) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
      throw UsageError("invalid year range '" + std::string(text) + "'");
    return value;
  };
  YearRange r;
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    r.low = r.high = number(text);
  } else {
    r.low = number(text.substr(0, dash));
    r.high = number(text.substr(dash + 1));
  }
  if (r.low > r.high) throw UsageError("year range '" + std::string(text) + "' has low > high");
  return r;
}

CorpusFilter& CorpusFilter::with_doc_type(std::string_view raw) {
  if (auto n = normalize_text(raw); !n.empty()) doc_types.insert(std::move(n));
  return *this;
}

CorpusFilter& CorpusFilter::with_area(std::string_view raw) {
  if (auto n = normalize_text(raw); !n.empty()) research_areas.insert(std::move(n));
  return *this;
}

bool CorpusFilter::accepts(const ArticleRecord& record) const {
  if (years && (!record.pub_year || !years->contains(*record.pub_year))) return false;
  if (!doc_types.empty()) {
    bool hit = false;
    std::string_view dt = record.doc_type;
    while (!hit) {
      const auto semi = dt.find(';');
      hit = doc_types.contains(normalize_text(dt.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      dt.remove_prefix(semi + 1);
    }
    if (!hit) return false;
  }
  if (!research_areas.empty()) {
    bool hit = false;
    for (const auto& area : record.research_areas) {
      if (research_areas.contains(normalize_text(area))) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  if (require_author_keyword && !author_keyword_set(record).contains(*require_author_keyword)) return false;
  return true;
}

std::string CorpusFilter::describe() const {
  auto join = [](const std::set<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
      if (!out.empty()) out += '|';
      out += s;
    }
    return out;
  };
  std::string out = "filter(";
  std::string sep;
  if (years) {
    out += "years=" + years->label();
    sep = "; ";
  }
  if (!doc_types.empty()) {
    out += sep + "doc_types=" + join(doc_types);
    sep = "; ";
  }
  if (!research_areas.empty()) {
    out += sep + "areas=" + join(research_areas);
    sep = "; ";
  }
  if (require_author_keyword) out += sep + "author_keyword=" + require_author_keyword->canonical;
  return out + ")";
}

Corpus filter_corpus(const Corpus& corpus, const CorpusFilter& filter) {
  Corpus out;
  out.provenance = corpus.provenance;
  const std::string expr = filter.describe();
  if (out.provenance.empty() || out.provenance.back() != expr) out.provenance.push_back(expr);
  out.period = !filter.label.empty() ? filter.label : filter.years ? filter.years->label() : corpus.period;
  for (const auto& r : corpus.records)
    if (filter.accepts(r)) out.records.push_back(r);
  return out;
}

namespace {

ordered_json record_to_json(const ArticleRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["source"] = r.source;
  j["pub_year"] = r.pub_year ? ordered_json(*r.pub_year) : ordered_json(nullptr);
  j["doc_type"] = r.doc_type;
  j["author_keywords"] = r.author_keywords;
  j["keywords_plus"] = r.keywords_plus;
  j["research_areas"] = r.research_areas;
  j["wos_categories"] = r.wos_categories;
  return j;
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing key");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> require_string_list(const json& obj, const std::string& key, const std::string& path,
                                             bool clean) {
  const auto& v = require(obj, key, path);
  const std::string p = path + "." + key;
  if (!v.is_array()) throw SchemaError(p, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw SchemaError(p + "[" + std::to_string(i) + "]", "expected a string");
    auto s = v[i].get<std::string>();
    if (clean && (s.empty() || s.front() == ' ' || s.back() == ' ' || s.front() == '\t' || s.back() == '\t'))
      throw SchemaError(p + "[" + std::to_string(i) + "]", "list entries must be non-empty and trimmed");
    out.push_back(std::move(s));
  }
  return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  for (const auto& [k, _] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw SchemaError(path + "." + k, "unknown key");
  }
}

}  // namespace

std::string serialize_corpus(const Corpus& corpus) {
  // One record per line keeps large corpora diffable.
  std::string out = "{\"period\":" + ordered_json(corpus.period).dump() +
                    ",\"provenance\":" + ordered_json(corpus.provenance).dump() + ",\"records\":[";
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += record_to_json(corpus.records[i]).dump();
  }
  out += corpus.records.empty() ? "]}\n" : "\n]}\n";
  return out;
}

Corpus deserialize_corpus(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  reject_unknown_keys(doc, {"period", "provenance", "records"}, "$");

  Corpus corpus;
  corpus.period = require_string(doc, "period", "$");
  corpus.provenance = require_string_list(doc, "provenance", "$", false);
  const auto& records = require(doc, "records", "$");
  if (!records.is_array()) throw SchemaError("$.records", "expected an array");

  std::set<std::string> ids;
  corpus.records.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "$.records[" + std::to_string(i) + "]";
    const auto& rj = records[i];
    if (!rj.is_object()) throw SchemaError(path, "expected an object");
    reject_unknown_keys(rj,
                        {"id", "title", "source", "pub_year", "doc_type", "author_keywords", "keywords_plus",
                         "research_areas", "wos_categories"},
                        path);
    ArticleRecord r;
    r.id = require_string(rj, "id", path);
    if (r.id.empty()) throw SchemaError(path + ".id", "id must be non-empty");
    if (!ids.insert(r.id).second) throw SchemaError(path + ".id", "duplicate id " + r.id);
    r.title = require_string(rj, "title", path);
    r.source = require_string(rj, "source", path);
    const auto& year = require(rj, "pub_year", path);
    if (!year.is_null()) {
      if (!year.is_number_integer()) throw SchemaError(path + ".pub_year", "expected an integer or null");
      const auto y = year.get<std::int64_t>();
      if (y < kMinYear || y > kMaxYear)
        throw SchemaError(path + ".pub_year", "year outside [1900, 2100]");
      r.pub_year = static_cast<int>(y);
    }
    r.doc_type = require_string(rj, "doc_type", path);
    r.author_keywords = require_string_list(rj, "author_keywords", path, true);
    r.keywords_plus = require_string_list(rj, "keywords_plus", path, true);
    r.research_areas = require_string_list(rj, "research_areas", path, true);
    r.wos_categories = require_string_list(rj, "wos_categories", path, true);
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

}  // namespace kwnet
