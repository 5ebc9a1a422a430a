#include "kwnet/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "kwnet/errors.hpp"

namespace kwnet {

namespace {

// Portable draws on top of mt19937_64, whose output sequence is fixed by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

const char* const kBackground[] = {
    "chaos", "entropy", "emergence", "self-organization", "networks", "agent-based models", "algorithms",
    "fractals", "complex adaptive systems", "computational complexity", "complexity theory", "innovation",
    "econophysics", "climate change", "sustainability", "evolution", "predation", "biodiversity", "eeg",
    "aging", "alzheimer's disease", "working memory", "leadership", "simulation", "power laws", "volatility",
    "stochastic process", "kolmogorov complexity", "linear complexity", "cellular automata", "convergence",
    "habitat complexity", "structural complexity", "task complexity", "path dependence", "self-similarity",
    "machine learning", "financial market", "social work", "resilience"};

const char* const kPlusPool[] = {
    "complexity theory", "cognitive complexity", "habitat complexity", "economic complexity",
    "statistical complexity", "computational complexity", "parameterized complexity", "topological complexity",
    "cortical complexity", "structural complexity", "environmental complexity", "project complexity",
    "social complexity", "institutional complexity", "task complexity", "dendritic complexity",
    "kolmogorov complexity", "time complexity", "linear complexity", "polynomial complexity",
    "complexity analysis", "low complexity", "product complexity", "dynamics", "model", "systems",
    "behavior", "networks", "evolution", "performance"};

std::string title_case(const std::string& s) {
  std::string out = s;
  bool start = true;
  for (char& c : out) {
    if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    start = c == ' ' || c == '-';
  }
  return out;
}

std::string upper(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

// A surface spelling of `canonical` that normalizes back to it.
std::string surface(const std::string& canonical, Rng& rng) {
  switch (rng.below(7)) {
    case 0: return title_case(canonical);
    case 1: return upper(canonical);
    case 2: return canonical + " ";
    case 3: {
      const auto dash = canonical.find('-');
      if (dash == std::string::npos) return title_case(canonical);
      return canonical.substr(0, dash) + "\xE2\x80\x93" + canonical.substr(dash + 1);  // en dash
    }
    case 4: {
      const auto space = canonical.find(' ');
      if (space == std::string::npos) return canonical;
      return canonical.substr(0, space) + "  " + canonical.substr(space + 1);
    }
    default: return canonical;
  }
}

// Emits `tag value`, wrapping at spaces onto three-space continuation lines.
void emit_field(std::string& out, const char* tag, const std::string& value) {
  constexpr std::size_t kWidth = 72;
  out += tag;
  out += ' ';
  std::size_t col = 3;
  std::size_t i = 0;
  while (i < value.size()) {
    if (value[i] == ' ' && col >= kWidth) {
      while (i < value.size() && value[i] == ' ') ++i;
      out += "\n   ";
      col = 3;
      continue;
    }
    out += value[i++];
    ++col;
  }
  out += '\n';
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

struct Stratum {
  std::int64_t n_articles = 0;
  std::int64_t n_focal = 0;
  std::map<std::string, std::int64_t> cooccurrence;
};

}  // namespace

SynthCorpus generate_synthetic_corpus(const SynthSpec& spec) {
  if (spec.n_records < 1) throw UsageError("synth: n_records must be at least 1");
  if (spec.areas.empty() || spec.periods.empty()) throw UsageError("synth: need at least one area and period");
  if (spec.planted_weight < 0 || spec.planted_weight > spec.n_records)
    throw UsageError("synth: planted weight must lie in [0, n_records]");
  if (spec.min_keywords < 1 || spec.max_keywords < spec.min_keywords || spec.pool_size < 1)
    throw UsageError("synth: invalid keyword pool shape");
  for (std::size_t i = 0; i < spec.periods.size(); ++i)
    for (std::size_t j = i + 1; j < spec.periods.size(); ++j)
      if (spec.periods[i].years.low <= spec.periods[j].years.high &&
          spec.periods[j].years.low <= spec.periods[i].years.high)
        throw UsageError("synth: periods overlap");

  // Canonical (already normalized) spellings throughout; only the emitted text varies.
  const std::string focal = spec.focal;
  std::vector<std::string> pool;
  for (const char* k : kBackground) {
    if (static_cast<int>(pool.size()) == spec.pool_size) break;
    if (k != focal && k != spec.planted_a && k != spec.planted_b) pool.emplace_back(k);
  }
  for (int t = 1; static_cast<int>(pool.size()) < spec.pool_size; ++t) pool.push_back("topic " + std::to_string(t));

  // Zipf-like popularity over the pool.
  std::vector<double> cumulative;
  double total = 0;
  for (std::size_t r = 0; r < pool.size(); ++r) cumulative.push_back(total += 1.0 / static_cast<double>(r + 1));

  auto year_outside_periods = [&](int year) {
    for (const auto& p : spec.periods)
      if (p.years.contains(year)) return false;
    return true;
  };
  std::vector<int> off_years;
  for (int y = 1990; y <= 2030; ++y)
    if (year_outside_periods(y)) off_years.push_back(y);

  const std::size_t n_periods = spec.periods.size();
  const std::size_t n_areas = spec.areas.size();
  const std::size_t target_period = n_periods - 1;
  // strata[p][a]; a == n_areas is the union of all areas.
  std::vector<std::vector<Stratum>> strata(n_periods, std::vector<Stratum>(n_areas + 1));
  std::int64_t pair_weight = 0;
  std::int64_t target_alternate = 0;

  Rng rng(spec.seed);
  std::string out = "FN Clarivate Analytics Web of Science\nVR 1.0\n";

  for (int i = 0; i < spec.n_records; ++i) {
    const bool planted = i < spec.planted_weight;
    const std::size_t area = planted ? 0 : rng.below(n_areas);
    const bool review = !planted && rng.chance(spec.review_rate);
    int year;
    std::optional<std::size_t> period;
    if (!planted && !off_years.empty() && rng.chance(spec.off_period_rate)) {
      year = off_years[rng.below(off_years.size())];
    } else {
      period = planted ? target_period : rng.below(n_periods);
      year = rng.between(spec.periods[*period].years.low, spec.periods[*period].years.high);
    }
    const bool has_focal = planted || rng.chance(spec.focal_rate);

    std::vector<std::string> keywords;  // canonical, distinct
    const int m = rng.between(spec.min_keywords, spec.max_keywords);
    for (int tries = 0; static_cast<int>(keywords.size()) < m && tries < 8 * m; ++tries) {
      const double x = rng.unit() * total;
      const auto r = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin());
      const auto& k = pool[std::min(r, pool.size() - 1)];
      if (std::find(keywords.begin(), keywords.end(), k) == keywords.end()) keywords.push_back(k);
    }
    const bool in_target = period && *period == target_period && area == 0 && !review;
    if (planted) {
      keywords.push_back(spec.planted_a);
      keywords.push_back(spec.planted_b);
    } else if (in_target && has_focal) {
      keywords.push_back(target_alternate++ % 2 == 0 ? spec.planted_a : spec.planted_b);
    } else if (rng.chance(0.05)) {
      keywords.push_back(rng.chance(0.5) ? spec.planted_a : spec.planted_b);
    }
    if (has_focal) keywords.push_back(focal);

    // Shuffle, then spell each keyword; now and then repeat one in another spelling.
    for (std::size_t s = keywords.size(); s > 1; --s) std::swap(keywords[s - 1], keywords[rng.below(s)]);
    std::vector<std::string> spelled;
    for (const auto& k : keywords) {
      spelled.push_back(surface(k, rng));
      if (rng.chance(0.05)) spelled.push_back(surface(k, rng));
    }

    std::vector<std::string> plus;
    const int n_plus = rng.between(0, 4);
    for (int p = 0; p < n_plus; ++p) {
      const std::string k = kPlusPool[rng.below(std::size(kPlusPool))];
      if (std::find(plus.begin(), plus.end(), upper(k)) == plus.end()) plus.push_back(upper(k));
    }

    const std::string& area_name = spec.areas[area];
    char ut[32];
    std::snprintf(ut, sizeof ut, "WOS:%015d", i + 1);

    out += "PT J\n";
    out += "AU Author, A" + std::to_string(i % 97) + "\n   Author, B" + std::to_string(i % 89) + "\n";
    emit_field(out, "TI", "Synthetic study " + std::to_string(i + 1) + " on " + title_case(keywords.front()) +
                              " and related questions in " + area_name + " research");
    out += "SO JOURNAL OF SYNTHETIC " + upper(area_name) + "\n";
    out += std::string("DT ") + (review ? "Review" : "Article") + "\n";
    emit_field(out, "DE", join(spelled, "; "));
    if (!plus.empty()) emit_field(out, "ID", join(plus, "; "));
    out += "PY " + std::to_string(year) + "\n";
    out += "WC " + area_name + "\n";
    out += "SC " + area_name + "\n";
    out += std::string("UT ") + ut + "\n";
    out += "ER\n\n";

    if (period && !review) {
      for (const std::size_t a : {area, n_areas}) {
        auto& st = strata[*period][a];
        ++st.n_articles;
        if (!has_focal) continue;
        ++st.n_focal;
        for (const auto& k : keywords)
          if (k != focal) ++st.cooccurrence[k];
      }
      if (in_target && std::find(keywords.begin(), keywords.end(), spec.planted_a) != keywords.end() &&
          std::find(keywords.begin(), keywords.end(), spec.planted_b) != keywords.end())
        ++pair_weight;
    }
  }
  out += "EF\n";

  nlohmann::ordered_json truth;
  truth["seed"] = spec.seed;
  truth["n_records"] = spec.n_records;
  truth["focal"] = focal;
  truth["planted_pair"] = {{"a", spec.planted_a},
                           {"b", spec.planted_b},
                           {"period", spec.periods[target_period].label},
                           {"area", spec.areas[0]},
                           {"weight", pair_weight}};
  truth["strata"] = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < n_periods; ++p) {
    for (std::size_t a = 0; a <= n_areas; ++a) {
      const auto& st = strata[p][a];
      nlohmann::ordered_json s;
      s["period"] = spec.periods[p].label;
      s["area"] = a == n_areas ? std::string("all") : spec.areas[a];
      s["n_articles"] = st.n_articles;
      s["n_focal_papers"] = st.n_focal;
      s["cooccurrence"] = nlohmann::ordered_json::object();
      for (const auto& [k, c] : st.cooccurrence) s["cooccurrence"][k] = c;
      truth["strata"].push_back(std::move(s));
    }
  }
  return {std::move(out), truth.dump(2) + "\n"};
}

}  // namespace kwnet
