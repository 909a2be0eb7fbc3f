#ifndef COPNET_PIPELINE_HPP
#define COPNET_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "copnet/coverage.hpp"
#include "copnet/graph.hpp"
#include "copnet/metrics.hpp"
#include "copnet/tiles.hpp"
#include "json.hpp"

namespace copnet {

struct PipelineOptions {
  BuildConfig config;
  int min_tile = 5;
  bool dedup_per_customer = false;
  std::vector<int> n_sweep;  // extra thresholds for the stats table
  uint64_t seed = 0;
  // Execution knob only; results never depend on it, so it is not echoed
  // into the report.
  int workers = 1;
  int top_staples = 20;
  std::filesystem::path products_path;
  std::filesystem::path sales_path;
  std::filesystem::path out_dir;
  // report-only runs skip the intermediate stage files
  bool write_stage_artifacts = true;
};

struct TileTypeRow {
  std::size_t count_before = 0;
  std::size_t count_after = 0;
  std::size_t coverage_before = 0;
  std::size_t coverage_after = 0;
  double mean_size_before = 0.0;
  double mean_size_after = 0.0;
};

struct PipelineReport {
  struct IngestSummary {
    std::size_t catalog_size = 0;
    std::size_t excluded_non_material = 0;
    std::size_t excluded_mixed = 0;
    std::size_t events = 0;
    std::size_t returns_dropped = 0;
    std::size_t unknown_dropped = 0;
    std::size_t duplicates_collapsed = 0;
  };

  IngestSummary ingest;
  // labels "1", "5", "5*", ... in threshold order, pruned row after its base
  std::vector<std::pair<std::string, NetworkStats>> network_stats;
  std::vector<StapleEntry> staples;  // top K by degree
  std::map<TileKind, TileTypeRow> tile_table;
  TileTypeRow tile_total;
  std::size_t selected_tiles = 0;
  std::size_t uncovered_count = 0;
  std::map<std::string, EntropyReport> entropy;  // hierarchy levels + tiles
  std::optional<PowerLawFit> degree_fit;
  std::optional<PowerLawFit> sales_fit;
  std::map<std::size_t, std::size_t> overcoverage_before;
  std::map<std::size_t, std::size_t> overcoverage_after;

  /// Deterministic serialization: sorted keys, numbers rounded to six
  /// significant digits.
  nlohmann::json to_json(const PipelineOptions& options) const;
};

/// ingest -> pairs -> graph -> stats -> prune -> small-component filter ->
/// tiles -> cover -> metrics, writing every documented artifact under
/// out_dir. Output is byte-identical for fixed inputs and config,
/// regardless of the worker count.
PipelineReport run_pipeline(const PipelineOptions& options);

nlohmann::json stats_to_json(const NetworkStats& stats);
void write_ingest_json(const ProductCatalog& catalog, const SaleLog& log,
                       const std::filesystem::path& path);

/// Member counts per hierarchy level of the catalog, for the entropy
/// reports: values of the maps are the number of material products per
/// subcategory / class / group.
std::vector<uint64_t> hierarchy_sizes(const ProductCatalog& catalog,
                                      const std::string& level);

}  // namespace copnet

#endif
