#include <doctest.h>

#include <random>
#include <sstream>

#include "kwnet/errors.hpp"
#include "kwnet/synth.hpp"
#include "kwnet/wos.hpp"

using namespace kwnet;

namespace {

const std::string kFixture = std::string(KWNET_FIXTURES) + "/sample_export.txt";

ParseResult parse_fixture() { return parse_export(read_file(kFixture), "sample_export.txt"); }

// Minimal independent reader for DE only: collects the DE line and its three-space
// continuations per record, joins them with a space and splits on ';'.
std::vector<std::vector<std::string>> reference_de(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line, de;
  bool in_de = false;
  bool in_rec = false;
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
  };
  while (std::getline(in, line)) {
    if (line.rfind("   ", 0) == 0) {
      if (in_de) de += " " + strip(line);
      continue;
    }
    in_de = false;
    if (line.size() < 2) continue;
    const std::string tag = line.substr(0, 2);
    if (tag == "PT") {
      in_rec = true;
      de.clear();
    } else if (tag == "DE") {
      de = strip(line.substr(2));
      in_de = true;
    } else if (tag == "ER" && in_rec) {
      std::vector<std::string> items;
      std::string part;
      std::istringstream parts(de);
      while (std::getline(parts, part, ';'))
        if (auto s = strip(part); !s.empty()) items.push_back(s);
      out.push_back(items);
      in_rec = false;
    }
  }
  return out;
}

std::string random_text(std::mt19937_64& rng, bool allow_empty) {
  static const std::vector<std::string> atoms = {"chaos", "Entropy", "self-organization", "Ünïcode", "x",
                                                 "a \"quoted\" word", "back\\slash", "tab", "ß", "ﬁ"};
  const int n = static_cast<int>(rng() % 4) + (allow_empty ? 0 : 1);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += atoms[rng() % atoms.size()];
  }
  return s;
}

Corpus random_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Corpus c;
  c.period = "2019-2023";
  c.provenance = {"random.txt", "filter(years=2019-2023)"};
  for (std::size_t i = 0; i < n; ++i) {
    ArticleRecord r;
    r.id = "WOS:" + std::to_string(100000 + i);
    r.title = random_text(rng, true);
    r.source = random_text(rng, true);
    if (rng() % 5) r.pub_year = 1990 + static_cast<int>(rng() % 40);
    r.doc_type = rng() % 3 ? "Article" : "Review";
    for (auto* list : {&r.author_keywords, &r.keywords_plus, &r.research_areas, &r.wos_categories}) {
      const int m = static_cast<int>(rng() % 5);
      for (int j = 0; j < m; ++j) list->push_back(random_text(rng, false));
    }
    c.records.push_back(std::move(r));
  }
  return c;
}

}  // namespace

TEST_CASE("parse: single-line DE splits on semicolons") {
  const auto r = parse_export("PT J\nDE Complexity; Chaos\nUT WOS:1\nER\nEF\n", "t");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].author_keywords == std::vector<std::string>{"Complexity", "Chaos"});
  CHECK(r.warnings.empty());
}

TEST_CASE("parse: missing DE gives no author keywords") {
  const auto r = parse_export("PT J\nTI Something\nUT WOS:1\nER\nEF\n", "t");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].author_keywords.empty());
}

TEST_CASE("parse: DE continuation line joins with a space") {
  const auto r = parse_export("PT J\nDE Complexity; Agent-based\n   models\nUT WOS:1\nER\nEF\n", "t");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].author_keywords == std::vector<std::string>{"Complexity", "Agent-based models"});
}

TEST_CASE("parse: fixture DE fields agree with the reference reader") {
  const auto text = read_file(kFixture);
  const auto parsed = parse_fixture();
  const auto expected = reference_de(text);
  CHECK(parsed.warnings.empty());
  REQUIRE(parsed.records.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(parsed.records[i].author_keywords == expected[i]);
  CHECK(parsed.records[1].author_keywords ==
        std::vector<std::string>{"Complexity", "Agent-based models", "Financial Market"});
  CHECK(parsed.records[3].title == "Habitat complexity and biodiversity in coastal reefs under changing climate");
  CHECK(parsed.records[7].research_areas == std::vector<std::string>{"Physics", "Business & Economics"});
}

TEST_CASE("parse: record fields") {
  const auto r = parse_fixture().records.at(0);
  CHECK(r.id == "WOS:000170000000001");
  CHECK(r.title == "Complexity and chaos in coupled oscillators");
  CHECK(r.source == "PHYSICAL REVIEW E");
  CHECK(r.pub_year == 2001);
  CHECK(r.doc_type == "Article");
  CHECK(r.keywords_plus == std::vector<std::string>{"DYNAMICS", "STATISTICAL COMPLEXITY"});
  CHECK(r.wos_categories == std::vector<std::string>{"Physics, Fluids & Plasmas"});
}

TEST_CASE("parse: missing UT gets a synthetic id and a warning") {
  const auto r = parse_export("PT J\nUT WOS:1\nER\nPT J\nTI no id\nER\nEF\n", "x.txt");
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].id == "gen:x.txt:2");
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("without UT") != std::string::npos);
}

TEST_CASE("parse: unknown tags warn once per tag") {
  const auto r = parse_export("PT J\nZZ one\nZZ two\n   more\nUT WOS:1\nER\nPT J\nZZ three\nUT WOS:2\nER\nEF\n", "t");
  CHECK(r.records.size() == 2);
  CHECK(r.warnings.size() == 1);
  CHECK(r.warnings[0] == "t:2: unknown tag ZZ ignored");
}

TEST_CASE("parse: a record cut off before ER is an error") {
  CHECK_THROWS_AS(parse_export("PT J\nUT WOS:1\nEF\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_export("PT J\nUT WOS:1\n", "t"), ParseError);
  try {
    parse_export("FN x\nPT J\nUT WOS:1\nEF\n", "cut.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.code() == ExitCode::input);
  }
}

TEST_CASE("parse: malformed UTF-8 is an error") {
  CHECK_THROWS_AS(parse_export("PT J\nTI bad \xC3\x28 byte\nUT WOS:1\nER\nEF\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_export("PT J\nTI overlong \xC0\xAF\nUT WOS:1\nER\nEF\n", "t"), ParseError);
  CHECK_NOTHROW(parse_export("PT J\nTI ok \xC3\xA9\xE2\x80\x93\nUT WOS:1\nER\nEF\n", "t"));
}

TEST_CASE("parse: leading byte-order mark and CRLF") {
  const auto r = parse_export("\xEF\xBB\xBF" "FN x\r\nPT J\r\nDE A; B\r\nUT WOS:1\r\nER\r\nEF\r\n", "t");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].author_keywords == std::vector<std::string>{"A", "B"});
  CHECK(r.warnings.empty());
}

TEST_CASE("parse: empty and header-only inputs") {
  CHECK(parse_export("", "t").records.empty());
  CHECK(parse_export("FN Clarivate\nVR 1.0\nEF\n", "t").records.empty());
}

TEST_CASE("parse: concatenated exports equal the parts in sequence") {
  const std::string a = "FN x\nVR 1.0\nPT J\nUT WOS:1\nER\nEF\n";
  const std::string b = "FN x\nVR 1.0\nPT J\nUT WOS:2\nER\nEF\n";
  const auto joined = parse_export(a + b, "t");
  REQUIRE(joined.records.size() == 2);
  CHECK(joined.records[0] == parse_export(a, "t").records[0]);
  CHECK(joined.records[1] == parse_export(b, "t").records[0]);
}

TEST_CASE("parse: unusable PY warns and leaves the year unknown") {
  const auto r = parse_export("PT J\nPY 20x1\nUT WOS:1\nER\nEF\n", "t");
  REQUIRE(r.records.size() == 1);
  CHECK_FALSE(r.records[0].pub_year.has_value());
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("assemble: duplicate ids are dropped with a warning") {
  std::vector<ParseResult> parts{parse_export("PT J\nTI first\nUT WOS:1\nER\n", "a"),
                                 parse_export("PT J\nTI second\nUT WOS:1\nER\nPT J\nUT WOS:2\nER\n", "b")};
  std::vector<std::string> names{"a", "b"};
  std::vector<std::string> warnings;
  const auto c = assemble_corpus(parts, names, &warnings);
  REQUIRE(c.records.size() == 2);
  CHECK(c.records[0].title == "first");
  CHECK(c.provenance == names);
  CHECK(warnings.size() == 1);
}

TEST_CASE("filter: year range excludes records outside it") {
  ArticleRecord r;
  r.id = "a";
  r.pub_year = 2001;
  CorpusFilter f;
  f.years = YearRange{2019, 2023};
  CHECK_FALSE(f.accepts(r));
  r.pub_year.reset();
  CHECK_FALSE(f.accepts(r));
  r.pub_year = 2023;
  CHECK(f.accepts(r));
}

TEST_CASE("filter: research area match ignores case") {
  ArticleRecord r;
  r.id = "a";
  r.research_areas = {"Physics"};
  CorpusFilter f;
  f.with_area("physics");
  CHECK(f.accepts(r));
  CorpusFilter g;
  g.with_area("Sociology");
  CHECK_FALSE(g.accepts(r));
}

TEST_CASE("filter: fixture has seven articles") {
  Corpus c;
  c.records = parse_fixture().records;
  CorpusFilter f;
  f.with_doc_type("Article");
  const auto out = filter_corpus(c, f);
  CHECK(out.records.size() == 7);
  for (const auto& r : out.records) CHECK(r.doc_type.rfind("Article", 0) == 0);

  CorpusFilter late;
  late.with_doc_type("Article");
  late.years = YearRange{2019, 2023};
  late.label = "2019-2023";
  const auto l = filter_corpus(c, late);
  CHECK(l.records.size() == 4);
  CHECK(l.period == "2019-2023");
}

TEST_CASE("filter: empty filter keeps everything, filters are idempotent") {
  const auto c = random_corpus(300, 7);
  CHECK(filter_corpus(c, CorpusFilter{}).records == c.records);
  CorpusFilter f;
  f.years = YearRange{2000, 2010};
  f.with_doc_type("article");
  const auto once = filter_corpus(c, f);
  const auto twice = filter_corpus(once, f);
  CHECK(once == twice);
  CHECK(once.records.size() < c.records.size());
  for (const auto& r : c.records) {
    const bool kept = std::find(once.records.begin(), once.records.end(), r) != once.records.end();
    CHECK(kept == f.accepts(r));
  }
}

TEST_CASE("year range parsing") {
  CHECK(YearRange::parse("2000-2004") == YearRange{2000, 2004});
  CHECK(YearRange::parse("2010") == YearRange{2010, 2010});
  CHECK_THROWS_AS(YearRange::parse("2004-2000"), UsageError);
  CHECK_THROWS_AS(YearRange::parse("abc"), UsageError);
}

TEST_CASE("serialize: empty and single-record round trips") {
  Corpus empty;
  CHECK(deserialize_corpus(serialize_corpus(empty)) == empty);
  Corpus one;
  one.records = {parse_fixture().records.at(1)};
  CHECK(deserialize_corpus(serialize_corpus(one)) == one);
}

TEST_CASE("serialize: random corpus round trip and stable bytes") {
  const auto c = random_corpus(1000, 42);
  const auto text = serialize_corpus(c);
  const auto back = deserialize_corpus(text);
  CHECK(back == c);
  CHECK(serialize_corpus(back) == text);
}

TEST_CASE("serialize: schema errors name the path") {
  auto path_of = [](const std::string& json) {
    try {
      deserialize_corpus(json);
    } catch (const SchemaError& e) {
      return e.path();
    }
    return std::string("<no error>");
  };
  const std::string rec =
      R"({"id":"a","title":"","source":"","pub_year":null,"doc_type":"","author_keywords":[],)"
      R"("keywords_plus":[],"research_areas":[],"wos_categories":[]})";
  std::string bad_year = rec;
  bad_year.replace(bad_year.find("null"), 4, "\"x\"");
  bad_year.replace(bad_year.find("\"a\""), 3, "\"b\"");
  CHECK(path_of(R"({"period":"","provenance":[],"records":[)" + rec + "]}") == "<no error>");
  CHECK(path_of(R"({"period":"","provenance":[]})") == "$.records");
  CHECK(path_of(R"({"period":"","provenance":[],"records":[)" + rec + "," +
                bad_year + "]}") == "$.records[1].pub_year");
  CHECK(path_of(R"({"period":"","provenance":[],"records":[)" + rec + "," + rec + "]}") == "$.records[1].id");
  CHECK(path_of(R"({"period":"","provenance":[],"extra":1,"records":[]})") == "$.extra");
  CHECK_THROWS_AS(deserialize_corpus("not json"), InputError);
}

TEST_CASE("synthetic exports parse without warnings") {
  SynthSpec spec;
  spec.n_records = 10;
  const auto synth = generate_synthetic_corpus(spec);
  const auto r = parse_export(synth.wos_text, "synth");
  CHECK(r.records.size() == 10);
  CHECK(r.warnings.empty());
}
