// Acceptance suite: one PASS/FAIL line per criterion; exits 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kwnet/cooccur.hpp"
#include "kwnet/csv.hpp"
#include "kwnet/network.hpp"
#include "kwnet/pipeline.hpp"
#include "kwnet/synth.hpp"
#include "kwnet/topology.hpp"
#include "kwnet/wos.hpp"
#include "support/oracles.hpp"

using namespace kwnet;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kRoundTripSeconds = 5.0;
constexpr double kDeskScaleSeconds = 30.0;
constexpr double kTableTolerance = 0.03;
constexpr int kRoundTripRecords = 1000;
constexpr int kProjectionInstances = 100;
constexpr int kSmallGraphInstances = 200;
constexpr int kLargeGraphInstances = 60;
constexpr int kDualityInstances = 100;
constexpr int kRandomTrees = 1000;
constexpr int kOverlapPairs = 1000;
constexpr int kDeskScaleRecords = 100000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  return out;
}

// 1. generate -> parse -> serialize -> parse gives equal corpora, no warnings, in time.
Outcome round_trip(const fs::path&) {
  Outcome o;
  SynthSpec spec;
  spec.seed = 20240601;
  spec.n_records = kRoundTripRecords;
  const auto synth = generate_synthetic_corpus(spec);
  const auto t0 = Clock::now();
  const auto parsed = parse_export(synth.wos_text, "roundtrip.txt");
  Corpus corpus;
  corpus.records = parsed.records;
  corpus.provenance = {"roundtrip.txt"};
  const auto text = serialize_corpus(corpus);
  const auto back = deserialize_corpus(text);
  const bool stable = serialize_corpus(back) == text;
  const double elapsed = seconds_since(t0);
  if (!parsed.warnings.empty()) o.fail(std::to_string(parsed.warnings.size()) + " warnings: " + parsed.warnings[0]);
  if (parsed.records.size() != static_cast<std::size_t>(kRoundTripRecords)) o.fail("record count differs");
  if (!(back == corpus)) o.fail("deserialized corpus differs");
  if (!stable) o.fail("second serialization differs");
  if (elapsed >= kRoundTripSeconds) o.fail("took " + std::to_string(elapsed) + " s");
  if (o.pass) o.detail = std::to_string(kRoundTripRecords) + " records, 0 warnings, " + std::to_string(elapsed) + " s";
  return o;
}

// 2. projected weights equal brute-force pairwise intersection counts.
Outcome projection(const fs::path&) {
  Outcome o;
  std::mt19937_64 rng(2);
  for (int inst = 0; inst < kProjectionInstances && o.pass; ++inst) {
    const int n_articles = 1 + static_cast<int>(rng() % 200);
    const int n_keywords = 1 + static_cast<int>(rng() % 50);
    const double p = 0.02 + 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
    std::bernoulli_distribution has(p);
    std::vector<std::vector<bool>> member(n_articles, std::vector<bool>(n_keywords));
    Corpus corpus;
    for (int a = 0; a < n_articles; ++a) {
      ArticleRecord r;
      r.id = "A" + std::to_string(a);
      for (int k = 0; k < n_keywords; ++k)
        if ((member[a][k] = has(rng))) r.author_keywords.push_back((rng() % 2 ? "KW " : "kw ") + std::to_string(k));
      corpus.records.push_back(std::move(r));
    }
    std::vector<CanonicalKeyword> keys;
    for (int k = 0; k < n_keywords; ++k) keys.emplace_back("kw " + std::to_string(k));
    const auto net = project(build_bipartite(corpus, std::span<const CanonicalKeyword>(keys), FieldKind::author));
    if (net.size() != n_keywords) {
      o.fail("instance " + std::to_string(inst) + ": node count");
      break;
    }
    for (int i = 0; i < n_keywords && o.pass; ++i) {
      for (int j = 0; j < n_keywords; ++j) {
        std::int64_t shared = 0;
        if (i != j)
          for (int a = 0; a < n_articles; ++a) shared += member[a][i] && member[a][j];
        if (net.weight(i, j) != shared) {
          o.fail("instance " + std::to_string(inst) + ": w(" + std::to_string(i) + "," + std::to_string(j) +
                 ")=" + std::to_string(net.weight(i, j)) + ", expected " + std::to_string(shared));
          break;
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(kProjectionInstances) + " instances, all weights exact";
  return o;
}

// 3. single-link tree weight equals the exhaustive minimum (n <= 7, exact rationals)
// and the Prim cut-property tree (n <= 200).
Outcome mst_optimality(const fs::path&) {
  Outcome o;
  std::mt19937_64 rng(3);
  for (int inst = 0; inst < kSmallGraphInstances && o.pass; ++inst) {
    const int n = 2 + inst % 6;
    const auto edges = oracle::random_connected_graph(rng, n, 0.6, 1 + static_cast<std::int64_t>(rng() % 8));
    const auto r = single_link_cluster(to_distances<Rational>(oracle::network_of(edges, n)));
    const Rational got = total_distance(r.forest);
    const Rational want = oracle::exhaustive_min_tree(edges, n);
    if (got != want || r.forest.components.size() != 1)
      o.fail("small instance " + std::to_string(inst) + ": " + got.str() + " vs " + want.str());
  }
  for (int inst = 0; inst < kLargeGraphInstances && o.pass; ++inst) {
    const int n = 8 + static_cast<int>(rng() % 193);
    const auto edges = oracle::random_connected_graph(rng, n, 0.02 + 0.2 * (inst % 5) / 4.0,
                                                      1 + static_cast<std::int64_t>(rng() % 30));
    const auto net = oracle::network_of(edges, n);
    const auto d = to_distances(net);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dense[i][j] = d(i, j);
    const auto prim = oracle::prim_tree(dense, [](double x) { return std::isinf(x); });
    const auto r = single_link_cluster(d);
    if (!prim || oracle::sorted_tree_distances(r.forest) != *prim) {
      o.fail("large instance " + std::to_string(inst) + " (n=" + std::to_string(n) + "): tree distances differ");
      break;
    }
    double prim_total = 0;
    for (double x : *prim) prim_total += x;
    if (total_distance(r.forest) != prim_total) o.fail("large instance " + std::to_string(inst) + ": totals differ");
    // A third of the larger instances are also checked in exact arithmetic.
    if (inst % 3 == 0 && n <= 80) {
      const auto dq = to_distances<Rational>(net);
      std::vector<std::vector<Rational>> dense_q(n, std::vector<Rational>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dense_q[i][j] = dq(i, j);
      const auto prim_q = oracle::prim_tree(dense_q, [](const Rational& x) { return x < 0; });
      if (!prim_q || oracle::sorted_tree_distances(single_link_cluster(dq).forest) != *prim_q)
        o.fail("large instance " + std::to_string(inst) + ": exact tree distances differ");
    }
  }
  if (o.pass)
    o.detail = std::to_string(kSmallGraphInstances) + " exhaustive (n<=7) + " + std::to_string(kLargeGraphInstances) +
               " cut-property (n<=200) instances exact";
  return o;
}

// 4. sorted merge distances equal sorted tree edge distances.
Outcome duality(const fs::path&) {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int inst = 0; inst < kDualityInstances && o.pass; ++inst) {
    const int n = 2 + static_cast<int>(rng() % 80);
    auto edges = oracle::random_connected_graph(rng, n, 0.1, 1 + static_cast<std::int64_t>(rng() % 12));
    // Every fourth instance drops edges so the input is usually a forest.
    if (inst % 4 == 3) std::erase_if(edges, [&](const oracle::Edge&) { return rng() % 3 == 0; });
    const auto r = single_link_cluster(to_distances(oracle::network_of(edges, n)));
    if (oracle::sorted_merge_distances(r.dendrogram) != oracle::sorted_tree_distances(r.forest))
      o.fail("instance " + std::to_string(inst) + ": multisets differ");
    std::size_t tree_edges = 0;
    for (const auto& c : r.forest.components) tree_edges += c.edges.size();
    if (tree_edges + r.forest.components.size() != static_cast<std::size_t>(n))
      o.fail("instance " + std::to_string(inst) + ": forest edge count");
  }
  if (o.pass) o.detail = std::to_string(kDualityInstances) + " instances, multisets equal";
  return o;
}

// 5. structural invariants over random trees (a tenth forced stars, a tenth paths).
Outcome topology_invariants(const fs::path&) {
  Outcome o;
  std::mt19937_64 rng(5);
  int violations = 0, stars = 0, paths = 0;
  std::string first;
  for (int inst = 0; inst < kRandomTrees; ++inst) {
    const int n = 3 + static_cast<int>(rng() % 48);
    TreeShape t;
    if (inst % 10 == 0 || inst % 10 == 1) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      t.node_count = n;
      for (int i = 1; i < n; ++i) t.edges.emplace_back(perm[inst % 10 == 0 ? 0 : i - 1], perm[i]);
    } else {
      t = oracle::random_tree(rng, n);
    }
    const auto r = topology_report(t, 1);
    const bool star = oracle::is_star(t);
    const bool path = oracle::is_path(t);
    stars += star;
    paths += path;
    std::vector<std::string> broken;
    if (r.b + r.l != n) broken.push_back("b+l=N");
    if (r.d < 2 || r.d > n - 1) broken.push_back("2<=d<=N-1");
    if ((r.d == 2) != star || (r.l == n - 1) != star) broken.push_back("star");
    if ((r.d == n - 1) != path || (r.l == 2) != path) broken.push_back("path");
    if (r.d != oracle::all_pairs_diameter(t)) broken.push_back("diameter oracle");
    if (!broken.empty()) {
      ++violations;
      if (first.empty()) first = "tree " + std::to_string(inst) + " breaks " + broken[0];
    }
  }
  if (violations) o.fail(std::to_string(violations) + " violations; " + first);
  else
    o.detail = std::to_string(kRandomTrees) + " trees (" + std::to_string(stars) + " stars, " + std::to_string(paths) +
               " paths), 0 violations";
  return o;
}

// 6. overlap against set enumeration, plus fixed cases at two-decimal display.
Outcome overlap_oracle(const fs::path&) {
  Outcome o;
  auto set_of = [](std::initializer_list<const char*> items) {
    KeywordSet s;
    for (const char* i : items) s.insert(CanonicalKeyword(i));
    return s;
  };
  const std::vector<std::tuple<KeywordSet, KeywordSet, std::string>> fixed{
      {set_of({"a", "b", "c"}), set_of({"a", "b", "c"}), "100.00"},
      {set_of({"a", "b"}), set_of({"c", "d"}), "0.00"},
      {set_of({"a", "b", "c"}), set_of({"b", "c", "d"}), "50.00"}};
  for (const auto& [x, y, want] : fixed)
    if (const auto got = overlap(x, y).percent.fixed(2); got != want) o.fail("fixed case gave " + got + ", want " + want);

  std::mt19937_64 rng(6);
  for (int inst = 0; inst < kOverlapPairs && o.pass; ++inst) {
    const int universe = 1 + static_cast<int>(rng() % 40);
    std::vector<bool> in_x(universe), in_y(universe);
    KeywordSet x, y;
    for (int e = 0; e < universe; ++e) {
      if ((in_x[e] = rng() % 3 == 0)) x.insert(CanonicalKeyword("e" + std::to_string(e)));
      if ((in_y[e] = rng() % 3 == 0)) y.insert(CanonicalKeyword("e" + std::to_string(e)));
    }
    if (x.empty() && y.empty()) {
      bool threw = false;
      try {
        overlap(x, y);
      } catch (const AnalysisError&) {
        threw = true;
      }
      if (!threw) o.fail("both-empty pair did not raise");
      continue;
    }
    std::int64_t both = 0, either = 0;
    for (int e = 0; e < universe; ++e) {
      both += in_x[e] && in_y[e];
      either += in_x[e] || in_y[e];
    }
    const auto r = overlap(x, y);
    // Two-decimal text from integers: round(10000 * both / either) half up.
    const std::int64_t hundredths = (20000 * both + either) / (2 * either);
    char want[32];
    std::snprintf(want, sizeof want, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                  static_cast<long long>(hundredths % 100));
    if (!(r.percent == Ratio{100 * both, either}) || r.intersection != static_cast<std::size_t>(both) ||
        r.union_size != static_cast<std::size_t>(either) || r.percent.fixed(2) != want)
      o.fail("pair " + std::to_string(inst) + ": " + r.percent.fixed(2) + " vs " + want);
  }
  if (o.pass) o.detail = "3 fixed cases + " + std::to_string(kOverlapPairs) + " random pairs exact";
  return o;
}

// 7. reference d/(N-1) values against the two normalizations.
Outcome table_ratios(const fs::path&) {
  Outcome o;
  struct Row {
    const char* area;
    int n;
    int d;
    double printed;
  };
  const Row rows[] = {{"Mathematics", 14, 4, 0.30}, {"Physics", 15, 4, 0.26}, {"Sociology", 16, 7, 0.44},
                      {"Neurosciences", 15, 7, 0.47}, {"Economics", 13, 5, 0.41}};
  std::string summary;
  for (const auto& row : rows) {
    TreeShape t{row.n, {}};
    for (int i = 0; i < row.d; ++i) t.edges.emplace_back(i, i + 1);
    for (int i = row.d + 1; i < row.n; ++i) t.edges.emplace_back(1, i);
    const auto r = topology_report(t, 1);
    if (r.N != row.n || r.d != row.d) {
      o.fail(std::string(row.area) + ": test tree has wrong shape");
      continue;
    }
    const double a = r.norm_diameter->value();
    const double b = r.norm_diameter_alt->value();
    const bool close = std::abs(a - row.printed) <= kTableTolerance || std::abs(b - row.printed) <= kTableTolerance;
    if (!close) o.fail(std::string(row.area) + ": neither ratio near the printed value");
    summary += std::string(summary.empty() ? "" : ", ") + row.area + " " + r.norm_diameter->fixed(2) + "/" +
               r.norm_diameter_alt->fixed(2);
    const auto text = topology_text(r);
    if (text.find("d/N") == std::string::npos || text.find("instead of N-1") == std::string::npos)
      o.fail("topology report does not document the two normalizations");
  }
  if (o.pass) o.detail = "d/(N-1) and d/N: " + summary;
  return o;
}

// 8. planted counts survive generate -> pipeline.
Outcome planted(const fs::path& work) {
  Outcome o;
  SynthSpec spec;
  spec.seed = 8;
  spec.n_records = 3000;
  spec.planted_weight = 7;
  const auto synth = generate_synthetic_corpus(spec);
  const fs::path input = work / "planted.txt";
  write_file_atomic(input, synth.wos_text);

  PipelineConfig cfg;
  cfg.inputs = {input};
  cfg.out = work / "planted-out";
  for (const auto& a : spec.areas) cfg.areas.push_back({a, {normalize_text(a)}});
  cfg.areas.push_back({"all", {}});
  run_pipeline(cfg);

  const auto truth = nlohmann::json::parse(synth.truth_json);
  std::size_t checked = 0;
  std::map<std::string, std::int64_t> focal_by_stratum;
  for (const auto& stratum : truth["strata"]) {
    const std::string period = stratum["period"];
    const std::string area = stratum["area"];
    focal_by_stratum[period + "/" + area] = stratum["n_focal_papers"];
    const auto rows = parse_csv(read_file(cfg.out / "periods" / slug(period) / slug(area) / "cooccurrence.csv"));
    std::map<std::string, std::int64_t> got;
    for (std::size_t i = 1; i < rows.size(); ++i) got[rows[i].at(1)] = std::stoll(rows[i].at(2));
    const auto want = stratum["cooccurrence"].get<std::map<std::string, std::int64_t>>();
    if (got != want) o.fail("co-occurrence counts differ in " + period + "/" + area);
    checked += want.size();
  }
  for (const auto& a : cfg.areas) {
    const auto g = nlohmann::json::parse(read_file(cfg.out / "areas" / slug(a.label) / "growth.json"));
    const std::string early = g["early_period"], late = g["late_period"];
    if (g["count_early"] != focal_by_stratum[early + "/" + a.label] ||
        g["count_late"] != focal_by_stratum[late + "/" + a.label])
      o.fail("focal paper counts differ for " + a.label);
  }

  const auto& pair = truth["planted_pair"];
  const auto net = network_from_json(read_file(cfg.out / "network" / slug(pair["area"].get<std::string>()) / "network.json"));
  int ia = -1, ib = -1;
  for (int i = 0; i < net.size(); ++i) {
    if (net.nodes[i].canonical == pair["a"]) ia = i;
    if (net.nodes[i].canonical == pair["b"]) ib = i;
  }
  std::int64_t w = -1;
  if (ia < 0 || ib < 0) o.fail("planted pair missing from the network");
  else if ((w = net.weight(ia, ib)) != pair["weight"].get<std::int64_t>())
    o.fail("planted pair weight " + std::to_string(w) + ", expected " + pair["weight"].dump());
  if (o.pass)
    o.detail = std::to_string(checked) + " co-occurrence counts over " + std::to_string(truth["strata"].size()) +
               " strata, focal counts, planted w=" + std::to_string(w);
  return o;
}

// 9. reruns give byte-identical outputs apart from manifest timestamps.
Outcome determinism(const fs::path& work) {
  Outcome o;
  SynthSpec spec;
  spec.seed = 9;
  spec.n_records = 4000;
  const fs::path input = work / "determinism.txt";
  write_file_atomic(input, generate_synthetic_corpus(spec).wos_text);
  PipelineConfig cfg;
  cfg.inputs = {input};
  cfg.areas = {{"Physics", {"physics"}}, {"Economics", {"economics"}}, {"Sociology", {"sociology"}}};
  cfg.out = work / "determinism-out";

  auto run_once = [&] {
    run_pipeline(cfg);
    auto files = tree_contents(cfg.out);
    auto manifest = nlohmann::ordered_json::parse(files.at("manifest.json"));
    manifest.erase("started_at");
    manifest.erase("finished_at");
    files["manifest.json"] = manifest.dump();
    return files;
  };
  const auto first = run_once();
  const auto second = run_once();
  if (first.size() != second.size()) o.fail("different file sets");
  for (const auto& [path, bytes] : first) {
    const auto it = second.find(path);
    if (it == second.end() || it->second != bytes) o.fail(path + " differs");
  }
  if (o.pass) o.detail = std::to_string(first.size()) + " files identical (manifest timestamps excluded)";
  return o;
}

// 10. parse + full default pipeline over a large export.
Outcome desk_scale(const fs::path& work) {
  Outcome o;
  SynthSpec spec;
  spec.seed = 10;
  spec.n_records = kDeskScaleRecords;
  const fs::path input = work / "desk.txt";
  write_file_atomic(input, generate_synthetic_corpus(spec).wos_text);
  PipelineConfig cfg;
  cfg.inputs = {input};
  cfg.out = work / "desk-out";
  const auto t0 = Clock::now();
  const auto manifest = run_pipeline(cfg);
  const double elapsed = seconds_since(t0);
  if (elapsed >= kDeskScaleSeconds) o.fail("took " + std::to_string(elapsed) + " s");
  if (manifest.outputs.empty()) o.fail("no outputs");
  if (o.pass) o.detail = std::to_string(kDeskScaleRecords) + " records in " + std::to_string(elapsed) + " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "kwnet-acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<const char*, std::function<Outcome(const fs::path&)>>> criteria{
      {"parser round trip", round_trip},
      {"projection oracle", projection},
      {"MST optimality", mst_optimality},
      {"single-link/MST duality", duality},
      {"topology invariants", topology_invariants},
      {"overlap oracle", overlap_oracle},
      {"normalized diameter cross-check", table_ratios},
      {"planted end-to-end", planted},
      {"determinism", determinism},
      {"desk-scale performance", desk_scale},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second(work);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
