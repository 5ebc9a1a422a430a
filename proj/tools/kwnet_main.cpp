// kwnet: keyword co-occurrence analysis of Web of Science exports.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kwnet/cooccur.hpp"
#include "kwnet/errors.hpp"
#include "kwnet/mst.hpp"
#include "kwnet/network.hpp"
#include "kwnet/pipeline.hpp"
#include "kwnet/synth.hpp"
#include "kwnet/topology.hpp"
#include "kwnet/wos.hpp"

namespace fs = std::filesystem;
using namespace kwnet;

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string old_input;
  std::string new_input;
  std::string out;
  std::string focal = "complexity";
  std::string field = "author";
  std::size_t k = 15;
  std::optional<std::size_t> k_limit;
  std::string years;
  std::vector<std::string> areas;
  std::vector<std::string> doc_types;
  std::string distance = "inverse";
  std::string synonyms;
  std::string lexicon;
  std::string config;
  std::string truth;
  std::string mode = "periods";
  std::uint64_t seed = 1;
  int records = 1000;
  int planted_weight = 7;
  bool include_focal = false;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty() || opt.out == "-") {
    std::cout << text;
  } else {
    write_file_atomic(opt.out, text);
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

Corpus load(const std::vector<std::string>& inputs) {
  if (inputs.empty()) throw UsageError("--input is required");
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  std::vector<std::string> warnings;
  Corpus c = load_corpus(paths, &warnings);
  print_warnings(warnings);
  return c;
}

SynonymMap synonyms_of(const Options& opt) {
  return opt.synonyms.empty() ? SynonymMap{} : SynonymMap::from_csv(read_file(opt.synonyms));
}

CanonicalKeyword focal_of(const Options& opt, const SynonymMap& synonyms) {
  auto k = normalize(opt.focal, synonyms);
  if (!k) throw UsageError("--focal is empty");
  return *k;
}

CorpusFilter selection(const Options& opt) {
  CorpusFilter f;
  if (!opt.years.empty()) f.years = YearRange::parse(opt.years);
  for (const auto& a : opt.areas) f.with_area(a);
  for (const auto& d : opt.doc_types) f.with_doc_type(d);
  return f;
}

Corpus selected(const Options& opt, const std::vector<std::string>& inputs) {
  return filter_corpus(load(inputs), selection(opt));
}

void add_selection(CLI::App* sub, Options& opt) {
  sub->add_option("--years", opt.years, "Inclusive publication year range A-B");
  sub->add_option("--area", opt.areas, "Research area (SC) to keep; repeatable");
  sub->add_option("--doc-type", opt.doc_types, "Document type to keep; repeatable");
  sub->add_option("--synonyms", opt.synonyms, "alias,preferred CSV");
}

void add_field(CLI::App* sub, Options& opt) {
  sub->add_option("--field", opt.field, "Keyword field")->check(CLI::IsMember({"author", "plus"}));
}

void add_focal(CLI::App* sub, Options& opt) {
  sub->add_option("--focal", opt.focal, "Focal author keyword")->capture_default_str();
}

void add_io(CLI::App* sub, Options& opt, bool required_input = true) {
  auto* in = sub->add_option("--input", opt.inputs, "Input file(s)");
  if (required_input) in->required();
  sub->add_option("--out", opt.out, "Output file (default: stdout)");
}

ProjectedNetwork read_network(const Options& opt) {
  if (opt.inputs.size() != 1) throw UsageError("expected exactly one network JSON --input");
  return network_from_json(read_file(opt.inputs.front()));
}

SingleLinkResult<double> cluster(const ProjectedNetwork& network, const Options& opt) {
  return single_link_cluster(to_distances<double>(network, parse_distance_transform(opt.distance)));
}

int run(int argc, char** argv) {
  CLI::App app{"Keyword co-occurrence analysis of Web of Science exports"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Options opt;

  auto* parse = app.add_subcommand("parse", "Parse WoS plain-text exports into corpus JSON");
  add_io(parse, opt);
  parse->callback([&] { emit(opt, serialize_corpus(load(opt.inputs))); });

  auto* filter = app.add_subcommand("filter", "Select records by year, area, document type or keyword");
  add_io(filter, opt);
  add_selection(filter, opt);
  filter->add_option("--focal", opt.focal, "Keep only records with this author keyword");
  filter->callback([&] {
    auto f = selection(opt);
    if (filter->count("--focal")) f.require_author_keyword = focal_of(opt, {});
    emit(opt, serialize_corpus(filter_corpus(load(opt.inputs), f)));
  });

  auto* freq = app.add_subcommand("freq", "Keyword frequencies (papers per keyword)");
  add_io(freq, opt);
  add_selection(freq, opt);
  add_field(freq, opt);
  freq->add_option("--k", opt.k_limit, "Keep only the k most frequent");
  freq->callback([&] {
    const auto counts = keyword_frequencies(selected(opt, opt.inputs), parse_field_kind(opt.field), synonyms_of(opt));
    emit(opt, ranked_csv(opt.k_limit ? top_k(counts, *opt.k_limit) : rank_all(counts)));
  });

  auto* cooccur = app.add_subcommand("cooccur", "Keywords co-occurring with the focal keyword");
  add_io(cooccur, opt);
  add_selection(cooccur, opt);
  add_field(cooccur, opt);
  add_focal(cooccur, opt);
  cooccur->callback([&] {
    const auto syn = synonyms_of(opt);
    const auto table = cooccurring_with(selected(opt, opt.inputs), focal_of(opt, syn), parse_field_kind(opt.field), syn);
    std::cerr << "papers with '" << table.focal.canonical << "': " << table.n_focal_papers << "\n";
    emit(opt, ranked_csv(rank_all(table.counts)));
  });

  auto* topk = app.add_subcommand("topk", "Top-k keywords co-occurring with the focal keyword");
  add_io(topk, opt);
  add_selection(topk, opt);
  add_field(topk, opt);
  add_focal(topk, opt);
  topk->add_option("--k", opt.k, "Number of keywords")->capture_default_str()->check(CLI::PositiveNumber);
  topk->add_option("--lexicon", opt.lexicon, "keyword,category CSV; prints categories to stderr");
  topk->callback([&] {
    const auto syn = synonyms_of(opt);
    const auto table = cooccurring_with(selected(opt, opt.inputs), focal_of(opt, syn), parse_field_kind(opt.field), syn);
    const auto ranked = top_k(table, opt.k);
    if (topk->count("--lexicon")) {
      const auto lexicon = CategoryLexicon::from_csv(read_file(opt.lexicon));
      for (const auto& e : ranked.entries)
        std::cerr << e.keyword.canonical << ": " << to_string(classify(e.keyword, lexicon)) << "\n";
    }
    emit(opt, ranked_csv(ranked));
  });

  auto* ov = app.add_subcommand("overlap", "Overlap of co-occurring keyword sets");
  ov->add_option("--old", opt.old_input, "Earlier-period corpus (mode periods)");
  ov->add_option("--new", opt.new_input, "Later-period corpus (mode periods)");
  ov->add_option("--input", opt.inputs, "Corpus (mode fields)");
  ov->add_option("--out", opt.out, "Output file (default: stdout)");
  ov->add_option("--mode", opt.mode, "periods: old vs new corpus; fields: author keywords vs Keywords Plus")
      ->check(CLI::IsMember({"periods", "fields"}))
      ->capture_default_str();
  add_selection(ov, opt);
  add_field(ov, opt);
  add_focal(ov, opt);
  ov->callback([&] {
    const auto syn = synonyms_of(opt);
    const auto focal = focal_of(opt, syn);
    OverlapResult result;
    if (opt.mode == "fields") {
      const auto corpus = selected(opt, opt.inputs);
      result = overlap(cooccurring_with(corpus, focal, FieldKind::author, syn).keywords(),
                       cooccurring_with(corpus, focal, FieldKind::plus, syn).keywords());
    } else {
      if (opt.old_input.empty() || opt.new_input.empty()) throw UsageError("--old and --new are required");
      const auto field = parse_field_kind(opt.field);
      result = overlap(cooccurring_with(selected(opt, {opt.old_input}), focal, field, syn).keywords(),
                       cooccurring_with(selected(opt, {opt.new_input}), focal, field, syn).keywords());
    }
    std::cerr << "overlap: " << result.percent.fixed(2) << "%\n";
    emit(opt, overlap_json(result));
  });

  auto* ratio = app.add_subcommand("ratio", "Growth ratio of focal-keyword papers between two corpora");
  ratio->add_option("--old", opt.old_input, "Earlier-period corpus")->required();
  ratio->add_option("--new", opt.new_input, "Later-period corpus")->required();
  ratio->add_option("--out", opt.out, "Output file (default: stdout)");
  add_selection(ratio, opt);
  add_focal(ratio, opt);
  ratio->callback([&] {
    const auto syn = synonyms_of(opt);
    const auto focal = focal_of(opt, syn);
    const auto early = selected(opt, {opt.old_input});
    const auto late = selected(opt, {opt.new_input});
    const auto n_early = cooccurring_with(early, focal, FieldKind::author, syn).n_focal_papers;
    const auto n_late = cooccurring_with(late, focal, FieldKind::author, syn).n_focal_papers;
    std::string area;
    for (const auto& a : opt.areas) area += (area.empty() ? "" : "|") + a;
    emit(opt, growth_json(area.empty() ? "all" : area, early.period.empty() ? opt.old_input : early.period,
                          late.period.empty() ? opt.new_input : late.period, n_early, n_late));
  });

  auto* network = app.add_subcommand("network", "Weighted co-occurrence network of the top-k keywords");
  add_io(network, opt);
  add_selection(network, opt);
  add_field(network, opt);
  add_focal(network, opt);
  network->add_option("--k", opt.k, "Number of keywords")->capture_default_str()->check(CLI::PositiveNumber);
  network->add_flag("--include-focal", opt.include_focal, "Add the focal keyword as a node");
  network->callback([&] {
    const auto syn = synonyms_of(opt);
    const auto net = focal_network(selected(opt, opt.inputs), focal_of(opt, syn), parse_field_kind(opt.field), opt.k,
                                   opt.include_focal, syn);
    if (net.size() == 0) throw AnalysisError("no keywords co-occur with the focal keyword");
    emit(opt, network_json(net));
  });

  auto* mst = app.add_subcommand("mst", "Minimum spanning tree of a network JSON, as DOT");
  add_io(mst, opt);
  mst->add_option("--distance", opt.distance, "Distance transform")
      ->check(CLI::IsMember({"inverse", "linear"}))
      ->capture_default_str();
  mst->callback([&] {
    const auto net = read_network(opt);
    emit(opt, mst_dot(cluster(net, opt).forest, net));
  });

  auto* report = app.add_subcommand("report", "Topology coefficients of a network's MST");
  add_io(report, opt);
  report->add_option("--distance", opt.distance, "Distance transform")
      ->check(CLI::IsMember({"inverse", "linear"}))
      ->capture_default_str();
  report->callback([&] {
    const auto net = read_network(opt);
    const auto r = topology_report(cluster(net, opt).forest);
    emit(opt, topology_json(r));
    (opt.out.empty() ? std::cerr : std::cout) << topology_text(r);
  });

  auto* pipeline = app.add_subcommand("pipeline", "Run the full analysis into an output directory");
  PipelineConfig cfg;
  std::vector<std::string> period_flags;
  pipeline->add_option("--config", opt.config, "JSON config file");
  pipeline->add_option("--input", opt.inputs, "Input file(s); replaces config inputs");
  pipeline->add_option("--out", opt.out, "Output directory");
  pipeline->add_option("--years", period_flags, "Period A-B; give once or twice; replaces config periods");
  pipeline->add_option("--area", opt.areas, "Research area; repeatable; replaces config areas");
  pipeline->add_option("--doc-type", opt.doc_types, "Document type; repeatable; replaces config doc types");
  add_focal(pipeline, opt);
  add_field(pipeline, opt);
  pipeline->add_option("--k", opt.k, "Top-k size")->check(CLI::PositiveNumber);
  pipeline->add_option("--distance", opt.distance, "Distance transform")->check(CLI::IsMember({"inverse", "linear"}));
  pipeline->add_option("--synonyms", opt.synonyms, "alias,preferred CSV");
  pipeline->add_option("--lexicon", opt.lexicon, "keyword,category CSV");
  pipeline->add_flag("--include-focal", opt.include_focal, "Add the focal keyword as a network node");
  pipeline->callback([&] {
    if (!opt.config.empty()) cfg = config_from_json(read_file(opt.config));
    if (pipeline->count("--input")) cfg.inputs.assign(opt.inputs.begin(), opt.inputs.end());
    if (pipeline->count("--out")) cfg.out = opt.out;
    if (!period_flags.empty()) {
      cfg.periods.clear();
      for (const auto& y : period_flags) {
        const auto r = YearRange::parse(y);
        cfg.periods.push_back({r.label(), r});
      }
      cfg.network_period.clear();
    }
    if (pipeline->count("--area")) {
      cfg.areas.clear();
      for (const auto& a : opt.areas) cfg.areas.push_back({a, {normalize_text(a)}});
    }
    if (pipeline->count("--doc-type")) {
      cfg.doc_types.clear();
      for (const auto& d : opt.doc_types) cfg.doc_types.insert(normalize_text(d));
    }
    if (pipeline->count("--focal")) cfg.focal = opt.focal;
    if (pipeline->count("--field")) cfg.field = parse_field_kind(opt.field);
    if (pipeline->count("--k")) cfg.k = opt.k;
    if (pipeline->count("--distance")) cfg.distance = parse_distance_transform(opt.distance);
    if (pipeline->count("--synonyms")) cfg.synonyms = opt.synonyms;
    if (pipeline->count("--lexicon")) cfg.lexicon = opt.lexicon;
    if (opt.include_focal) cfg.include_focal = true;
    const auto manifest = run_pipeline(cfg);
    print_warnings(manifest.warnings);
    std::cerr << "wrote " << manifest.outputs.size() << " files to " << cfg.out.string() << "\n";
  });

  auto* synth = app.add_subcommand("synth", "Generate a synthetic WoS export with known counts");
  synth->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  synth->add_option("--records", opt.records, "Number of records")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--planted-weight", opt.planted_weight, "Co-occurrence count of the planted pair")
      ->capture_default_str();
  add_focal(synth, opt);
  synth->add_option("--out", opt.out, "WoS output file (default: stdout)");
  synth->add_option("--truth", opt.truth, "Ground-truth JSON output file");
  synth->callback([&] {
    SynthSpec spec;
    spec.seed = opt.seed;
    spec.n_records = opt.records;
    spec.planted_weight = opt.planted_weight;
    spec.focal = normalize_text(opt.focal);
    const auto corpus = generate_synthetic_corpus(spec);
    emit(opt, corpus.wos_text);
    if (!opt.truth.empty()) write_file_atomic(opt.truth, corpus.truth_json);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  } catch (const Error& e) {
    std::cerr << "kwnet: " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "kwnet: " << e.what() << "\n";
    return static_cast<int>(ExitCode::analysis);
  }
}
