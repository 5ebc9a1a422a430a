#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kwnet/cooccur.hpp"
#include "kwnet/network.hpp"
#include "kwnet/wos.hpp"

namespace kwnet {

inline constexpr const char* kToolVersion = "0.3.0";

struct PeriodSpec {
  std::string label;
  YearRange years;
};

// A research area, possibly grouping several SC values ("Economics" with
// "Business & Economics", ...). An empty match set selects every record.
struct AreaSpec {
  std::string label;
  std::set<std::string> match;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::vector<PeriodSpec> periods{{"2000-2004", {2000, 2004}}, {"2019-2023", {2019, 2023}}};
  std::vector<AreaSpec> areas;  // empty: a single "all" area
  std::set<std::string> doc_types{"article"};
  std::string focal = "complexity";
  FieldKind field = FieldKind::author;
  std::size_t k = 15;
  DistanceTransform distance = DistanceTransform::inverse;
  bool include_focal = false;
  std::string network_period;  // empty: the last period
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::filesystem::path> lexicon;
  std::filesystem::path out = "kwnet-out";

  // Throws UsageError on duplicate labels, k == 0 or an unknown network period.
  void validate() const;

  std::vector<AreaSpec> effective_areas() const;
  const PeriodSpec& network_period_spec() const;
};

// Reads a JSON config document. Missing keys keep their defaults; unknown keys are
// rejected.
PipelineConfig config_from_json(std::string_view json_text);

// Canonical JSON of the effective configuration (sorted keys).
std::string config_to_json(const PipelineConfig& config);

struct ManifestInput {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct ManifestOutput {
  std::string stage;
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string config_hash;  // sha256 of config_to_json
  std::vector<ManifestInput> inputs;
  std::string started_at;
  std::string finished_at;
  std::vector<ManifestOutput> outputs;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// Runs every stage and publishes the output directory in one rename. Any failure
// removes the partial output and rethrows with the stage name prefixed.
RunManifest run_pipeline(const PipelineConfig& config);

// Path-safe slug: lowercase ASCII alphanumerics, other runs become '_'.
std::string slug(std::string_view text);

// Projection of the papers carrying `focal` among their author keywords onto the k
// keywords that co-occur with it most often (plus the focal keyword itself when
// `include_focal`). Empty when nothing co-occurs.
ProjectedNetwork focal_network(const Corpus& corpus, const CanonicalKeyword& focal, FieldKind field, std::size_t k,
                               bool include_focal, const SynonymMap& synonyms = {});

// Report documents shared by the pipeline and the CLI.
std::string overlap_json(const OverlapResult& result);
std::string growth_json(std::string_view area, std::string_view early_label, std::string_view late_label,
                        std::int64_t count_early, std::int64_t count_late);

}  // namespace kwnet
