#include "kwnet/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <unistd.h>

#include <json.hpp>

#include "kwnet/csv.hpp"
#include "kwnet/digest.hpp"
#include "kwnet/errors.hpp"
#include "kwnet/mst.hpp"
#include "kwnet/topology.hpp"

namespace kwnet {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string slug(std::string_view text) {
  std::string out;
  bool gap = false;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      if (gap && !out.empty()) out += '_';
      gap = false;
      out += c;
    } else if (c == '-' && !out.empty()) {
      if (gap) out += '_';
      gap = false;
      out += '-';
    } else {
      gap = true;
    }
  }
  return out.empty() ? std::string("x") : out;
}

void PipelineConfig::validate() const {
  if (periods.empty() || periods.size() > 2) throw UsageError("config: one or two periods are supported");
  if (periods.size() == 2 && slug(periods[0].label) == slug(periods[1].label))
    throw UsageError("config: period labels must be distinct");
  for (const auto& p : periods)
    if (p.years.low > p.years.high) throw UsageError("config: period " + p.label + " has low > high");
  if (k < 1) throw UsageError("config: k must be at least 1");
  std::set<std::string> seen;
  for (const auto& a : effective_areas())
    if (!seen.insert(slug(a.label)).second) throw UsageError("config: area label '" + a.label + "' repeated");
  network_period_spec();
}

std::vector<AreaSpec> PipelineConfig::effective_areas() const {
  if (areas.empty()) return {AreaSpec{"all", {}}};
  return areas;
}

const PeriodSpec& PipelineConfig::network_period_spec() const {
  if (periods.empty()) throw UsageError("config: no periods");
  if (network_period.empty()) return periods.back();
  for (const auto& p : periods)
    if (p.label == network_period) return p;
  throw UsageError("config: network_period '" + network_period + "' is not a configured period");
}

namespace {

const std::set<std::string> kConfigKeys{"inputs", "periods", "areas", "doc_types", "focal", "field", "k",
                                        "distance", "include_focal", "network_period", "synonyms", "lexicon",
                                        "out"};

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

}  // namespace

PipelineConfig config_from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  for (const auto& [key, _] : doc.items())
    if (!kConfigKeys.contains(key)) throw SchemaError("$." + key, "unknown config key");

  PipelineConfig cfg;
  if (doc.contains("inputs")) {
    const auto& v = doc["inputs"];
    if (!v.is_array()) throw SchemaError("$.inputs", "expected an array");
    cfg.inputs.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      cfg.inputs.emplace_back(as_string(v[i], "$.inputs[" + std::to_string(i) + "]"));
  }
  if (doc.contains("periods")) {
    const auto& v = doc["periods"];
    if (!v.is_array()) throw SchemaError("$.periods", "expected an array");
    cfg.periods.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string path = "$.periods[" + std::to_string(i) + "]";
      PeriodSpec p;
      if (v[i].is_string()) {
        p.years = YearRange::parse(v[i].get<std::string>());
        p.label = p.years.label();
      } else if (v[i].is_object() && v[i].contains("years")) {
        p.years = YearRange::parse(as_string(v[i]["years"], path + ".years"));
        p.label = v[i].contains("label") ? as_string(v[i]["label"], path + ".label") : p.years.label();
      } else {
        throw SchemaError(path, "expected \"A-B\" or {\"label\",\"years\"}");
      }
      cfg.periods.push_back(std::move(p));
    }
  }
  if (doc.contains("areas")) {
    const auto& v = doc["areas"];
    if (!v.is_array()) throw SchemaError("$.areas", "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string path = "$.areas[" + std::to_string(i) + "]";
      AreaSpec a;
      if (v[i].is_string()) {
        a.label = v[i].get<std::string>();
        a.match.insert(normalize_text(a.label));
      } else if (v[i].is_object() && v[i].contains("label")) {
        a.label = as_string(v[i]["label"], path + ".label");
        if (v[i].contains("match")) {
          const auto& m = v[i]["match"];
          if (!m.is_array()) throw SchemaError(path + ".match", "expected an array");
          for (std::size_t j = 0; j < m.size(); ++j)
            a.match.insert(normalize_text(as_string(m[j], path + ".match[" + std::to_string(j) + "]")));
        } else {
          a.match.insert(normalize_text(a.label));
        }
      } else {
        throw SchemaError(path, "expected a name or {\"label\",\"match\"}");
      }
      cfg.areas.push_back(std::move(a));
    }
  }
  if (doc.contains("doc_types")) {
    const auto& v = doc["doc_types"];
    if (!v.is_array()) throw SchemaError("$.doc_types", "expected an array");
    cfg.doc_types.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      cfg.doc_types.insert(normalize_text(as_string(v[i], "$.doc_types[" + std::to_string(i) + "]")));
  }
  if (doc.contains("focal")) cfg.focal = as_string(doc["focal"], "$.focal");
  if (doc.contains("field")) cfg.field = parse_field_kind(as_string(doc["field"], "$.field"));
  if (doc.contains("k")) {
    if (!doc["k"].is_number_integer() || doc["k"].get<std::int64_t>() < 1)
      throw SchemaError("$.k", "expected a positive integer");
    cfg.k = doc["k"].get<std::size_t>();
  }
  if (doc.contains("distance")) cfg.distance = parse_distance_transform(as_string(doc["distance"], "$.distance"));
  if (doc.contains("include_focal")) {
    if (!doc["include_focal"].is_boolean()) throw SchemaError("$.include_focal", "expected a boolean");
    cfg.include_focal = doc["include_focal"].get<bool>();
  }
  if (doc.contains("network_period")) cfg.network_period = as_string(doc["network_period"], "$.network_period");
  if (doc.contains("synonyms") && !doc["synonyms"].is_null())
    cfg.synonyms = as_string(doc["synonyms"], "$.synonyms");
  if (doc.contains("lexicon") && !doc["lexicon"].is_null()) cfg.lexicon = as_string(doc["lexicon"], "$.lexicon");
  if (doc.contains("out")) cfg.out = as_string(doc["out"], "$.out");
  return cfg;
}

std::string config_to_json(const PipelineConfig& config) {
  json doc;  // std::map-backed: keys come out sorted
  doc["inputs"] = json::array();
  for (const auto& p : config.inputs) doc["inputs"].push_back(p.string());
  doc["periods"] = json::array();
  for (const auto& p : config.periods) doc["periods"].push_back({{"label", p.label}, {"years", p.years.label()}});
  doc["areas"] = json::array();
  for (const auto& a : config.areas) doc["areas"].push_back({{"label", a.label}, {"match", a.match}});
  doc["doc_types"] = config.doc_types;
  doc["focal"] = config.focal;
  doc["field"] = std::string(to_string(config.field));
  doc["k"] = config.k;
  doc["distance"] = std::string(to_string(config.distance));
  doc["include_focal"] = config.include_focal;
  doc["network_period"] = config.network_period;
  doc["synonyms"] = config.synonyms ? json(config.synonyms->string()) : json(nullptr);
  doc["lexicon"] = config.lexicon ? json(config.lexicon->string()) : json(nullptr);
  doc["out"] = config.out.string();
  return doc.dump();
}

std::string RunManifest::to_json() const {
  ordered_json doc;
  doc["tool"] = "kwnet";
  doc["tool_version"] = tool_version;
  doc["config_hash"] = config_hash;
  doc["inputs"] = ordered_json::array();
  for (const auto& in : inputs)
    doc["inputs"].push_back(ordered_json{{"path", in.path}, {"sha256", in.sha256}, {"bytes", in.bytes}});
  doc["started_at"] = started_at;
  doc["finished_at"] = finished_at;
  doc["outputs"] = ordered_json::array();
  for (const auto& out : outputs)
    doc["outputs"].push_back(ordered_json{{"stage", out.stage}, {"path", out.path}, {"sha256", out.sha256}});
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

std::string overlap_json(const OverlapResult& result) {
  ordered_json doc;
  doc["old_size"] = result.old_size;
  doc["new_size"] = result.new_size;
  doc["intersection"] = result.intersection;
  doc["union"] = result.union_size;
  doc["overlap_pct"] = result.percent.value();
  return doc.dump(2) + "\n";
}

std::string growth_json(std::string_view area, std::string_view early_label, std::string_view late_label,
                        std::int64_t count_early, std::int64_t count_late) {
  const Ratio f = growth_ratio(count_late, count_early);
  ordered_json doc;
  doc["area"] = area;
  doc["early_period"] = early_label;
  doc["late_period"] = late_label;
  doc["count_early"] = count_early;
  doc["count_late"] = count_late;
  doc["f"] = f.rounded(2);
  return doc.dump(2) + "\n";
}

ProjectedNetwork focal_network(const Corpus& corpus, const CanonicalKeyword& focal, FieldKind field, std::size_t k,
                               bool include_focal, const SynonymMap& synonyms) {
  Corpus focal_papers;
  for (const auto& rec : corpus.records)
    if (author_keyword_set(rec, synonyms).contains(focal)) focal_papers.records.push_back(rec);

  std::vector<CanonicalKeyword> keywords;
  if (include_focal) keywords.push_back(focal);
  for (const auto& e : top_k(cooccurring_with(corpus, focal, field, synonyms), k).entries)
    keywords.push_back(e.keyword);
  if (keywords.empty()) return {};
  return project(build_bipartite(focal_papers, keywords, field, synonyms));
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct OutputFile {
  std::string stage;
  std::string path;
  std::string contents;
};

// Everything one (period, area) stratum contributes.
struct StratumResult {
  std::vector<OutputFile> files;
  std::vector<std::string> warnings;
  KeywordSet cooccurring;
  std::int64_t n_focal = 0;
};

struct Context {
  const PipelineConfig& cfg;
  const Corpus& corpus;
  const SynonymMap& synonyms;
  const CategoryLexicon& lexicon;
  CanonicalKeyword focal;
};

Corpus stratum_corpus(const Context& ctx, const PeriodSpec& period, const AreaSpec& area) {
  CorpusFilter filter;
  filter.years = period.years;
  filter.label = period.label;
  filter.doc_types = ctx.cfg.doc_types;
  filter.research_areas = area.match;
  Corpus c = filter_corpus(ctx.corpus, filter);
  if (c.records.empty())
    throw AnalysisError("empty corpus after filtering (period " + period.label + ", area " + area.label + ")");
  return c;
}

std::string categories_csv(const RankedKeywords& ranked, const CategoryLexicon& lexicon) {
  std::string out = "rank,keyword,category\n";
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const auto& k = ranked.entries[i].keyword;
    out += std::to_string(i + 1) + "," + csv_field(k.canonical) + "," + std::string(to_string(classify(k, lexicon))) +
           "\n";
  }
  return out;
}

StratumResult analyze_stratum(const Context& ctx, const PeriodSpec& period, const AreaSpec& area) {
  StratumResult r;
  const Corpus corpus = stratum_corpus(ctx, period, area);
  const std::string dir = "periods/" + slug(period.label) + "/" + slug(area.label) + "/";
  const auto field = ctx.cfg.field;

  r.files.push_back({"freq", dir + "frequencies.csv",
                     ranked_csv(rank_all(keyword_frequencies(corpus, field, ctx.synonyms)))});

  const auto table = cooccurring_with(corpus, ctx.focal, field, ctx.synonyms);
  r.cooccurring = table.keywords();
  r.n_focal = table.n_focal_papers;
  r.files.push_back({"cooccur", dir + "cooccurrence.csv", ranked_csv(rank_all(table.counts))});
  const auto top = top_k(table, ctx.cfg.k);
  r.files.push_back({"topk", dir + "topk.csv", ranked_csv(top)});
  r.files.push_back({"classify", dir + "categories.csv", categories_csv(top, ctx.lexicon)});

  // Author keywords against Keywords Plus within the same papers.
  const auto authors = field == FieldKind::author ? table : cooccurring_with(corpus, ctx.focal, FieldKind::author, ctx.synonyms);
  const auto plus = field == FieldKind::plus ? table : cooccurring_with(corpus, ctx.focal, FieldKind::plus, ctx.synonyms);
  const auto author_set = authors.keywords();
  const auto plus_set = plus.keywords();
  if (!author_set.empty() || !plus_set.empty()) {
    r.files.push_back({"overlap", dir + "field_overlap.json", overlap_json(overlap(author_set, plus_set))});
  } else {
    r.warnings.push_back("no co-occurring keywords in period " + period.label + ", area " + area.label +
                         "; field_overlap.json skipped");
  }
  if (ctx.focal.canonical.find(' ') == std::string::npos) {
    std::string csv = "keyword\n";
    for (const auto& k : multiword_containing(plus_set, ctx.focal.canonical)) csv += csv_field(k.canonical) + "\n";
    r.files.push_back({"multiword", dir + "multiword_plus.csv", std::move(csv)});
  }
  return r;
}

std::vector<OutputFile> analyze_network(const Context& ctx, const AreaSpec& area) {
  const auto& period = ctx.cfg.network_period_spec();
  const Corpus corpus = stratum_corpus(ctx, period, area);
  const auto network =
      focal_network(corpus, ctx.focal, ctx.cfg.field, ctx.cfg.k, ctx.cfg.include_focal, ctx.synonyms);
  if (network.size() == 0)
    throw AnalysisError("no keywords co-occur with '" + ctx.focal.canonical + "' in period " + period.label +
                        ", area " + area.label);
  const auto distances = to_distances<double>(network, ctx.cfg.distance);
  const auto clustering = single_link_cluster(distances);
  const auto report = topology_report(clustering.forest);

  const std::string dir = "network/" + slug(area.label) + "/";
  return {{"network", dir + "network.json", network_json(network)},
          {"mst", dir + "mst.dot", mst_dot(clustering.forest, network)},
          {"report", dir + "topology.json", topology_json(report)},
          {"report", dir + "topology.txt", topology_text(report)}};
}

void check_replaceable(const fs::path& out) {
  std::error_code ec;
  if (!fs::exists(out, ec)) return;
  if (!fs::is_directory(out)) throw UsageError("output path " + out.string() + " exists and is not a directory");
  if (fs::is_empty(out) || fs::exists(out / "manifest.json")) return;
  throw UsageError("refusing to replace non-empty directory " + out.string() + " (no manifest.json inside)");
}

[[noreturn]] void rethrow_as(ExitCode code, const std::string& what) {
  switch (code) {
    case ExitCode::usage: throw UsageError(what);
    case ExitCode::input: throw InputError(what);
    default: throw AnalysisError(what);
  }
}

// Runs `fn`, prefixing any failure with the stage name while keeping its error class.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    rethrow_as(e.code(), std::string(name) + ": " + e.what());
  } catch (const fs::filesystem_error& e) {
    rethrow_as(ExitCode::input, std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    rethrow_as(ExitCode::analysis, std::string(name) + ": " + e.what());
  }
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& cfg) {
  RunManifest manifest;
  manifest.started_at = utc_now();
  stage("config", [&] {
    cfg.validate();
    if (cfg.inputs.empty()) throw UsageError("no input files");
    check_replaceable(cfg.out);
  });
  manifest.config_hash = sha256_hex(config_to_json(cfg));

  const auto synonyms = stage("synonyms", [&] {
    return cfg.synonyms ? SynonymMap::from_csv(read_file(*cfg.synonyms)) : SynonymMap{};
  });
  const auto lexicon = stage("lexicon", [&] {
    return cfg.lexicon ? CategoryLexicon::from_csv(read_file(*cfg.lexicon)) : CategoryLexicon::reference();
  });
  const auto focal = stage("config", [&] {
    auto k = normalize(cfg.focal, synonyms);
    if (!k) throw UsageError("focal keyword is empty");
    return *k;
  });

  const Corpus corpus = stage("parse", [&] {
    for (const auto& path : cfg.inputs) {
      const std::string bytes = read_file(path);
      manifest.inputs.push_back({path.string(), sha256_hex(bytes), bytes.size()});
    }
    return load_corpus(cfg.inputs, &manifest.warnings);
  });

  const Context ctx{cfg, corpus, synonyms, lexicon, focal};
  const auto areas = cfg.effective_areas();

  std::vector<OutputFile> files;
  std::vector<std::vector<StratumResult>> strata(cfg.periods.size());
  stage("analyze", [&] {
    std::vector<std::vector<std::future<StratumResult>>> jobs(cfg.periods.size());
    for (std::size_t p = 0; p < cfg.periods.size(); ++p)
      for (const auto& area : areas)
        jobs[p].push_back(std::async(std::launch::async, analyze_stratum, std::cref(ctx), std::cref(cfg.periods[p]),
                                     std::cref(area)));
    // Collected in (period, area) order so the first failure is deterministic.
    for (std::size_t p = 0; p < jobs.size(); ++p)
      for (auto& job : jobs[p]) strata[p].push_back(job.get());
  });
  for (auto& row : strata) {
    for (auto& s : row) {
      files.insert(files.end(), s.files.begin(), s.files.end());
      manifest.warnings.insert(manifest.warnings.end(), s.warnings.begin(), s.warnings.end());
    }
  }

  if (cfg.periods.size() == 2) {
    stage("compare", [&] {
      for (std::size_t a = 0; a < areas.size(); ++a) {
        const auto& early = strata[0][a];
        const auto& late = strata[1][a];
        const std::string dir = "areas/" + slug(areas[a].label) + "/";
        files.push_back({"overlap", dir + "overlap.json", overlap_json(overlap(early.cooccurring, late.cooccurring))});
        files.push_back({"ratio", dir + "growth.json",
                         growth_json(areas[a].label, cfg.periods[0].label, cfg.periods[1].label, early.n_focal,
                                     late.n_focal)});
      }
    });
  }

  stage("network", [&] {
    for (const auto& area : areas) {
      auto out = analyze_network(ctx, area);
      files.insert(files.end(), out.begin(), out.end());
    }
  });

  const fs::path out_dir = cfg.out;
  const fs::path parent = out_dir.has_parent_path() ? out_dir.parent_path() : fs::path(".");
  const fs::path tmp = parent / ("." + out_dir.filename().string() + ".tmp-" + std::to_string(::getpid()));
  try {
    stage("write", [&] {
      fs::remove_all(tmp);
      std::sort(files.begin(), files.end(), [](const auto& x, const auto& y) { return x.path < y.path; });
      for (const auto& f : files) {
        const fs::path target = tmp / f.path;
        fs::create_directories(target.parent_path());
        std::ofstream os(target, std::ios::binary);
        os.write(f.contents.data(), static_cast<std::streamsize>(f.contents.size()));
        if (!os) throw InputError("cannot write " + target.string());
        manifest.outputs.push_back({f.stage, f.path, sha256_hex(f.contents)});
      }
      manifest.finished_at = utc_now();
      const std::string text = manifest.to_json();
      std::ofstream os(tmp / "manifest.json", std::ios::binary);
      os.write(text.data(), static_cast<std::streamsize>(text.size()));
      if (!os) throw InputError("cannot write manifest");
      os.close();

      check_replaceable(out_dir);
      if (fs::exists(out_dir)) fs::remove_all(out_dir);
      fs::rename(tmp, out_dir);
    });
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
  return manifest;
}

}  // namespace kwnet
