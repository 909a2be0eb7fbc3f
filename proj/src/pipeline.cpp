#include "copnet/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "copnet/cooccur.hpp"
#include "copnet/synth.hpp"
#include "copnet/util.hpp"

namespace copnet {

namespace {

nlohmann::json fit_to_json(const std::optional<PowerLawFit>& fit) {
  if (!fit) return nullptr;
  return {{"alpha", round_sig(fit->alpha)},
          {"intercept", round_sig(fit->intercept)},
          {"r_squared", round_sig(fit->r_squared)}};
}

nlohmann::json entropy_to_json(const EntropyReport& report) {
  return {{"members", report.member_sizes.size()},
          {"h1", round_sig(report.h1)},
          {"h0", round_sig(report.h0)}};
}

nlohmann::json histogram_to_json(const std::map<std::size_t, std::size_t>& hist) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [bin, count] : hist) arr.push_back({bin, count});
  return arr;
}

nlohmann::json row_to_json(const TileTypeRow& row) {
  return {{"count", {{"before", row.count_before}, {"after", row.count_after}}},
          {"node_coverage",
           {{"before", row.coverage_before}, {"after", row.coverage_after}}},
          {"mean_size",
           {{"before", round_sig(row.mean_size_before)},
            {"after", round_sig(row.mean_size_after)}}}};
}

void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << doc.dump(2) << '\n';
}

}  // namespace

nlohmann::json stats_to_json(const NetworkStats& stats) {
  return {{"edges", stats.edges},
          {"nodes", stats.nodes},
          {"isolated_nodes", stats.isolated_nodes},
          {"isolated_pairs", stats.isolated_pairs},
          {"components", stats.components},
          {"gcc_size_abs", stats.gcc_size_abs},
          {"gcc_size_rel", round_sig(stats.gcc_size_rel)},
          {"gcc_sales_share", round_sig(stats.gcc_sales_share)}};
}

void write_ingest_json(const ProductCatalog& catalog, const SaleLog& log,
                       const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["catalog"] = {{"size", catalog.size()},
                    {"excluded_non_material", catalog.meta.excluded_non_material},
                    {"excluded_mixed", catalog.meta.excluded_mixed}};
  doc["sales"] = {{"events", log.events.size()},
                  {"returns_dropped", log.meta.returns_dropped},
                  {"unknown_dropped", log.meta.unknown_dropped},
                  {"duplicates_collapsed", log.meta.duplicates_collapsed}};
  write_json_file(doc, path);
}

std::vector<uint64_t> hierarchy_sizes(const ProductCatalog& catalog,
                                      const std::string& level) {
  std::map<std::string, uint64_t> sizes;
  for (const auto& [id, rec] : catalog.records()) {
    if (level == "subcategory") ++sizes[rec.subcategory_id];
    else if (level == "class") ++sizes[rec.class_id];
    else if (level == "group") ++sizes[rec.group_id];
    else fail(strprintf("unknown hierarchy level '%s'", level.c_str()));
  }
  std::vector<uint64_t> out;
  out.reserve(sizes.size());
  for (const auto& [key, n] : sizes) out.push_back(n);
  return out;
}

nlohmann::json PipelineReport::to_json(const PipelineOptions& options) const {
  nlohmann::json doc;

  doc["config"] = {{"threshold_N", options.config.threshold_N},
                   {"staple_percent", round_sig(options.config.staple_percent)},
                   {"min_component", options.config.min_component},
                   {"window_days", options.config.window_days},
                   {"cpm_k", options.config.cpm_k},
                   {"min_gain", options.config.min_gain},
                   {"min_tile", options.min_tile},
                   {"dedup_per_customer", options.dedup_per_customer},
                   {"n_sweep", options.n_sweep},
                   {"seed", options.seed},
                   {"top_staples", options.top_staples},
                   {"products", options.products_path.string()},
                   {"sales", options.sales_path.string()},
                   {"out_dir", options.out_dir.string()}};

  doc["ingest"] = {{"catalog_size", ingest.catalog_size},
                   {"excluded_non_material", ingest.excluded_non_material},
                   {"excluded_mixed", ingest.excluded_mixed},
                   {"events", ingest.events},
                   {"returns_dropped", ingest.returns_dropped},
                   {"unknown_dropped", ingest.unknown_dropped},
                   {"duplicates_collapsed", ingest.duplicates_collapsed}};

  doc["network_stats"] = nlohmann::json::array();
  for (const auto& [label, stats] : network_stats) {
    nlohmann::json row = stats_to_json(stats);
    row["N"] = label;
    doc["network_stats"].push_back(std::move(row));
  }

  doc["staples"] = nlohmann::json::array();
  for (const auto& staple : staples)
    doc["staples"].push_back({{"product_id", staple.product_id},
                              {"degree", staple.degree},
                              {"sales_volume", staple.sales_volume}});

  nlohmann::json table;
  for (const auto& [kind, row] : tile_table) table[to_string(kind)] = row_to_json(row);
  table["total"] = row_to_json(tile_total);
  doc["tile_table"] = std::move(table);
  doc["coverage"] = {{"selected_tiles", selected_tiles},
                     {"uncovered_count", uncovered_count}};

  nlohmann::json entropy_json;
  for (const auto& [name, report] : entropy)
    entropy_json[name] = entropy_to_json(report);
  doc["entropy"] = std::move(entropy_json);

  doc["power_law"] = {{"degree", fit_to_json(degree_fit)},
                      {"sales", fit_to_json(sales_fit)}};
  doc["overcoverage"] = {{"before", histogram_to_json(overcoverage_before)},
                         {"after", histogram_to_json(overcoverage_after)}};
  return doc;
}

PipelineReport run_pipeline(const PipelineOptions& options) {
  options.config.validate();
  if (options.min_tile < 1) fail("min_tile must be >= 1");
  std::filesystem::create_directories(options.out_dir);
  const auto& out = options.out_dir;
  const bool artifacts = options.write_stage_artifacts;

  PipelineReport report;

  // ingest
  ProductCatalog catalog = load_products(options.products_path);
  SaleLog log = load_sales(options.sales_path, catalog);
  report.ingest = {catalog.size(),
                   catalog.meta.excluded_non_material,
                   catalog.meta.excluded_mixed,
                   log.events.size(),
                   log.meta.returns_dropped,
                   log.meta.unknown_dropped,
                   log.meta.duplicates_collapsed};
  if (artifacts) {
    write_products_csv(catalog, out / "catalog.csv");
    write_sales_csv(log, out / "sales_clean.csv");
    write_ingest_json(catalog, log, out / "ingest.json");
  }

  // pairs
  CoOccurrenceCounts counts = count_copurchases(
      log, options.config.window_days, options.dedup_per_customer, options.workers);
  if (artifacts) write_pairs_tsv(counts, out / "pairs.tsv");

  // graph at the configured threshold
  ProductGraph graph =
      build_graph(counts, catalog, log, options.config.threshold_N);
  if (artifacts) {
    write_nodes_tsv(graph, out / "nodes.tsv");
    write_edges_tsv(graph, out / "edges.tsv");
    write_graphml(graph, out / "graph.graphml");
    write_dot(graph, out / "graph.dot");
  }

  // stats, including the optional threshold sweep
  NetworkStats main_stats = component_stats(graph);
  if (artifacts) write_json_file(stats_to_json(main_stats), out / "stats.json");

  // prune staples
  auto [pruned, staples] = prune_staples(graph, options.config.staple_percent);
  report.staples.assign(
      staples.begin(),
      staples.begin() + std::min<std::size_t>(staples.size(),
                                              options.top_staples < 0
                                                  ? 0
                                                  : options.top_staples));
  if (artifacts) {
    write_staples_tsv(staples, out / "staples.tsv");
    write_nodes_tsv(pruned, out / "nodes_pruned.tsv");
    write_edges_tsv(pruned, out / "edges_pruned.tsv");
  }

  std::set<int> sweep(options.n_sweep.begin(), options.n_sweep.end());
  sweep.insert(options.config.threshold_N);
  for (int n : sweep) {
    NetworkStats stats = n == options.config.threshold_N
                             ? main_stats
                             : component_stats(build_graph(counts, catalog, log, n));
    report.network_stats.emplace_back(strprintf("%d", n), stats);
    if (n == options.config.threshold_N)
      report.network_stats.emplace_back(strprintf("%d*", n),
                                        component_stats(pruned));
  }

  // G*: drop the small components, then tile it
  ProductGraph gstar =
      remove_small_components(pruned, options.config.min_component);
  std::vector<std::string> universe;
  universe.reserve(gstar.node_count());
  for (uint32_t v = 0; v < gstar.node_count(); ++v)
    universe.push_back(gstar.id_of(v));
  if (artifacts) write_universe_tsv(universe, out / "universe.tsv");

  std::vector<Tile> tiles = extract_tiles(
      gstar, options.config.cpm_k, options.min_tile, options.workers);
  if (artifacts) write_tiles_json(tiles, out / "tiles.json");

  // coverage optimization
  CoverageSolution solution =
      greedy_cover(tiles, universe, options.config.min_gain);
  if (artifacts) write_coverage_json(solution, out / "coverage.json");
  report.selected_tiles = solution.selected.size();
  report.uncovered_count = solution.uncovered_count;

  // tile table, before and after optimization
  {
    std::map<TileKind, std::vector<const Tile*>> by_kind;
    for (const auto& tile : tiles) by_kind[tile.kind].push_back(&tile);
    std::set<std::string> covered_union;
    for (auto& [kind, group] : by_kind) {
      TileTypeRow& row = report.tile_table[kind];
      row.count_before = group.size();
      std::set<std::string> nodes;
      double size_sum = 0;
      for (const Tile* tile : group) {
        nodes.insert(tile->members.begin(), tile->members.end());
        size_sum += static_cast<double>(tile->members.size());
      }
      covered_union.insert(nodes.begin(), nodes.end());
      row.coverage_before = nodes.size();
      row.mean_size_before = group.empty() ? 0.0 : size_sum / group.size();
      auto count_it = solution.per_type_counts.find(kind);
      row.count_after = count_it == solution.per_type_counts.end() ? 0 : count_it->second;
      auto cover_it = solution.node_coverage_per_type.find(kind);
      row.coverage_after = cover_it == solution.node_coverage_per_type.end() ? 0 : cover_it->second;
      auto mean_it = solution.mean_size_per_type.find(kind);
      row.mean_size_after = mean_it == solution.mean_size_per_type.end() ? 0.0 : mean_it->second;
    }
    report.tile_total.count_before = tiles.size();
    report.tile_total.count_after = solution.selected.size();
    report.tile_total.coverage_before = covered_union.size();
    report.tile_total.coverage_after = solution.covered.size();
    double before_sum = 0, after_sum = 0;
    for (const auto& tile : tiles) before_sum += static_cast<double>(tile.members.size());
    for (const auto& [kind, mean] : solution.mean_size_per_type)
      after_sum += mean * static_cast<double>(solution.per_type_counts.at(kind));
    report.tile_total.mean_size_before =
        tiles.empty() ? 0.0 : before_sum / static_cast<double>(tiles.size());
    report.tile_total.mean_size_after =
        solution.selected.empty()
            ? 0.0
            : after_sum / static_cast<double>(solution.selected.size());
  }

  // metrics
  for (const char* level : {"group", "class", "subcategory"}) {
    auto sizes = hierarchy_sizes(catalog, level);
    if (!sizes.empty())
      report.entropy.emplace(strprintf("%s_sizes", level), size_entropy(sizes));
  }
  {
    std::vector<uint64_t> tile_sizes;
    std::map<std::string, const Tile*> by_id;
    for (const auto& tile : tiles) by_id[tile.tile_id] = &tile;
    for (const auto& sel : solution.selected)
      tile_sizes.push_back(by_id.at(sel.tile_id)->members.size());
    if (!tile_sizes.empty())
      report.entropy.emplace("essential_tile_sizes", size_entropy(tile_sizes));
  }

  auto degree_hist = degree_histogram(graph);
  auto sales_hist = sales_histogram(graph);
  try {
    report.degree_fit = fit_power_law(degree_hist);
  } catch (const Error&) {
    report.degree_fit.reset();  // degenerate graph; reported as null
  }
  try {
    report.sales_fit = fit_power_law(sales_hist);
  } catch (const Error&) {
    report.sales_fit.reset();
  }

  report.overcoverage_before = overcoverage(tiles, universe);
  {
    std::set<std::string> selected_ids;
    for (const auto& sel : solution.selected) selected_ids.insert(sel.tile_id);
    std::vector<Tile> essential;
    for (const auto& tile : tiles)
      if (selected_ids.count(tile.tile_id)) essential.push_back(tile);
    report.overcoverage_after = overcoverage(essential, universe);
  }

  write_histogram_csv(interpurchase_histogram(log), out / "hist_interpurchase.csv");
  write_histogram_csv(degree_hist, out / "hist_degree.csv");
  write_histogram_csv(sales_hist, out / "hist_sales.csv");
  write_histogram_csv(report.overcoverage_before, out / "hist_overcoverage_before.csv");
  write_histogram_csv(report.overcoverage_after, out / "hist_overcoverage_after.csv");

  write_json_file(report.to_json(options), out / "report.json");
  return report;
}

}  // namespace copnet
