#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kwnet/wos.hpp"

namespace kwnet {

struct SynthPeriod {
  std::string label;
  YearRange years;
};

// Shape of a generated corpus.
struct SynthSpec {
  std::uint64_t seed = 1;
  int n_records = 100;
  std::string focal = "complexity";
  std::vector<std::string> areas{"Physics", "Economics", "Sociology"};
  std::vector<SynthPeriod> periods{{"2000-2004", {2000, 2004}}, {"2019-2023", {2019, 2023}}};
  int pool_size = 60;           // background author keywords
  double focal_rate = 0.5;      // share of records carrying the focal keyword
  double review_rate = 0.1;     // share typed "Review"
  double off_period_rate = 0.05;  // share dated outside every period
  int min_keywords = 2;
  int max_keywords = 6;
  // Planted pair: co-occurs in exactly `planted_weight` focal articles of the last
  // period in the first area and nowhere else.
  std::string planted_a = "planted alpha";
  std::string planted_b = "planted beta";
  int planted_weight = 7;
};

struct SynthCorpus {
  std::string wos_text;    // WoS plain-text export
  std::string truth_json;  // counts known by construction
};

// Deterministic: the same spec gives identical bytes. Throws UsageError if
// n_records < 1 or the planted pair does not fit.
SynthCorpus generate_synthetic_corpus(const SynthSpec& spec);

}  // namespace kwnet
