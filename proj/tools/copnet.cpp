// copnet: build a co-purchase product network from retail transaction logs,
// decompose it into structural tiles, and select essential tiles by greedy
// coverage. Subcommands read and write the documented file formats so every
// stage can run (and be tested) on its own.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "copnet/cooccur.hpp"
#include "copnet/coverage.hpp"
#include "copnet/graph.hpp"
#include "copnet/ingest.hpp"
#include "copnet/metrics.hpp"
#include "copnet/pipeline.hpp"
#include "copnet/synth.hpp"
#include "copnet/tiles.hpp"
#include "copnet/util.hpp"

namespace fs = std::filesystem;
using namespace copnet;

namespace {

struct Knobs {
  int threshold = 5;
  double staple_percent = 0.05;
  int min_component = 5;
  int window_days = 7;
  int cpm_k = 3;
  int min_gain = 1;
  int min_tile = 5;
  bool dedup_per_customer = false;
  std::string n_sweep;
  uint64_t seed = 0;
  int workers = 0;  // 0 = machine parallelism
  int top_staples = 20;
  std::string out_dir = "out";
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Flat key=value config mirroring the BuildConfig field names; any key can
// be overridden by the same-named command-line flag (flags win).
std::map<std::string, std::string> load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(strprintf("cannot open config '%s'", path.string().c_str()));
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string::npos)
      fail(strprintf("config line %zu: expected key = value", lineno));
    kv[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, Knobs& knobs,
                  const CLI::App* cmd) {
  auto given = [&](const std::string& flag) {
    auto* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  for (const auto& [key, value] : kv) {
    try {
      if (key == "threshold_N") {
        if (!given("--threshold")) knobs.threshold = std::stoi(value);
      } else if (key == "staple_percent") {
        if (!given("--staple-percent")) knobs.staple_percent = std::stod(value);
      } else if (key == "min_component") {
        if (!given("--min-component")) knobs.min_component = std::stoi(value);
      } else if (key == "window_days") {
        if (!given("--window-days")) knobs.window_days = std::stoi(value);
      } else if (key == "cpm_k") {
        if (!given("--cpm-k")) knobs.cpm_k = std::stoi(value);
      } else if (key == "min_gain") {
        if (!given("--min-gain")) knobs.min_gain = std::stoi(value);
      } else if (key == "min_tile") {
        if (!given("--min-tile")) knobs.min_tile = std::stoi(value);
      } else if (key == "dedup_per_customer") {
        if (!given("--dedup-per-customer"))
          knobs.dedup_per_customer = value == "true" || value == "1";
      } else if (key == "n_sweep") {
        if (!given("--n-sweep")) knobs.n_sweep = value;
      } else if (key == "seed") {
        if (!given("--seed")) knobs.seed = std::stoull(value);
      } else if (key == "workers") {
        if (!given("--workers")) knobs.workers = std::stoi(value);
      } else if (key == "top_staples") {
        if (!given("--top-staples")) knobs.top_staples = std::stoi(value);
      } else if (key == "out_dir") {
        if (!given("--out-dir")) knobs.out_dir = value;
      } else {
        fail(strprintf("unknown config key '%s'", key.c_str()));
      }
    } catch (const std::invalid_argument&) {
      fail(strprintf("bad value for config key '%s'", key.c_str()));
    }
  }
}

std::vector<int> parse_sweep(const std::string& text) {
  std::vector<int> out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      std::string t = trim(token);
      if (!t.empty()) out.push_back(std::stoi(t));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return out;
}

PipelineOptions make_pipeline_options(const Knobs& knobs, const fs::path& products,
                                      const fs::path& sales) {
  PipelineOptions options;
  options.config.threshold_N = knobs.threshold;
  options.config.staple_percent = knobs.staple_percent;
  options.config.min_component = knobs.min_component;
  options.config.window_days = knobs.window_days;
  options.config.cpm_k = knobs.cpm_k;
  options.config.min_gain = knobs.min_gain;
  options.min_tile = knobs.min_tile;
  options.dedup_per_customer = knobs.dedup_per_customer;
  options.n_sweep = parse_sweep(knobs.n_sweep);
  options.seed = knobs.seed;
  options.workers = knobs.workers;
  options.top_staples = knobs.top_staples;
  options.products_path = products;
  options.sales_path = sales;
  options.out_dir = knobs.out_dir;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-purchase product network toolkit"};
  app.require_subcommand(1);

  Knobs knobs;
  std::string config_path;
  std::string products_path, sales_path;
  std::string catalog_path, pairs_path;
  std::string nodes_path, edges_path;
  std::string tiles_path, universe_path;

  // synth knobs
  CorpusSpec corpus_spec;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "flat key=value config file; flags win over file values");
    cmd->add_option("--out-dir", knobs.out_dir, "output directory");
    cmd->add_option("--workers", knobs.workers,
                    "worker threads (0 = machine parallelism)");
  };
  auto add_build_knobs = [&](CLI::App* cmd) {
    cmd->add_option("--threshold", knobs.threshold, "togetherness threshold N");
    cmd->add_option("--window-days", knobs.window_days, "togetherness window");
    cmd->add_option("--staple-percent", knobs.staple_percent,
                    "GCC share pruned as staples");
    cmd->add_option("--min-component", knobs.min_component,
                    "smallest surviving component");
    cmd->add_option("--min-tile", knobs.min_tile, "smallest surviving tile");
    cmd->add_option("--cpm-k", knobs.cpm_k, "clique percolation k");
    cmd->add_option("--min-gain", knobs.min_gain, "greedy coverage stop gain");
    cmd->add_flag("--dedup-per-customer", knobs.dedup_per_customer,
                  "count each product pair at most once per customer");
    cmd->add_option("--n-sweep", knobs.n_sweep,
                    "extra thresholds for the stats table, e.g. \"1,5,10,20\"");
    cmd->add_option("--seed", knobs.seed, "seed echoed into the report");
    cmd->add_option("--top-staples", knobs.top_staples,
                    "staples listed in the report");
  };

  CLI::App* c_ingest = app.add_subcommand(
      "ingest", "load, validate, and normalize the catalog and sales log");
  c_ingest->add_option("--products", products_path, "products.csv")->required();
  c_ingest->add_option("--sales", sales_path, "sales.csv")->required();
  add_common(c_ingest);

  CLI::App* c_pairs = app.add_subcommand(
      "pairs", "count 7-day same-customer co-purchases");
  c_pairs->add_option("--catalog", catalog_path, "catalog.csv from ingest")->required();
  c_pairs->add_option("--sales", sales_path, "sales_clean.csv from ingest")->required();
  add_common(c_pairs);
  add_build_knobs(c_pairs);

  CLI::App* c_graph = app.add_subcommand(
      "graph", "build the thresholded product network");
  c_graph->add_option("--catalog", catalog_path, "catalog.csv")->required();
  c_graph->add_option("--sales", sales_path, "sales_clean.csv")->required();
  c_graph->add_option("--pairs", pairs_path, "pairs.tsv")->required();
  add_common(c_graph);
  add_build_knobs(c_graph);

  CLI::App* c_stats = app.add_subcommand("stats", "network statistics");
  c_stats->add_option("--nodes", nodes_path, "nodes.tsv")->required();
  c_stats->add_option("--edges", edges_path, "edges.tsv")->required();
  add_common(c_stats);

  CLI::App* c_prune = app.add_subcommand(
      "prune", "remove the highest-degree GCC nodes (staples)");
  c_prune->add_option("--nodes", nodes_path, "nodes.tsv")->required();
  c_prune->add_option("--edges", edges_path, "edges.tsv")->required();
  add_common(c_prune);
  add_build_knobs(c_prune);

  CLI::App* c_tiles = app.add_subcommand(
      "tiles", "extract stars, linear tiles, and clique communities");
  c_tiles->add_option("--nodes", nodes_path, "nodes_pruned.tsv")->required();
  c_tiles->add_option("--edges", edges_path, "edges_pruned.tsv")->required();
  add_common(c_tiles);
  add_build_knobs(c_tiles);

  CLI::App* c_cover = app.add_subcommand(
      "cover", "select essential tiles by greedy coverage");
  c_cover->add_option("--tiles", tiles_path, "tiles.json")->required();
  c_cover->add_option("--universe", universe_path, "universe.tsv")->required();
  add_common(c_cover);
  add_build_knobs(c_cover);

  CLI::App* c_report = app.add_subcommand(
      "report", "assemble report.json and histogram exports");
  c_report->add_option("--products", products_path, "products.csv")->required();
  c_report->add_option("--sales", sales_path, "sales.csv")->required();
  add_common(c_report);
  add_build_knobs(c_report);

  CLI::App* c_synth = app.add_subcommand(
      "synth", "generate a synthetic catalog and sales log");
  c_synth->add_option("--n-products", corpus_spec.n_products, "material products");
  c_synth->add_option("--n-customers", corpus_spec.n_customers, "customers");
  c_synth->add_option("--n-events", corpus_spec.n_events, "sale events (approx)");
  c_synth->add_option("--horizon-days", corpus_spec.horizon_days, "time span");
  c_synth->add_option("--synth-seed", corpus_spec.seed, "generator seed");
  add_common(c_synth);

  CLI::App* c_pipeline = app.add_subcommand(
      "pipeline", "run every stage and write all artifacts");
  c_pipeline->add_option("--products", products_path, "products.csv")->required();
  c_pipeline->add_option("--sales", sales_path, "sales.csv")->required();
  add_common(c_pipeline);
  add_build_knobs(c_pipeline);

  CLI11_PARSE(app, argc, argv);
  CLI::App* cmd = app.get_subcommands().front();

  try {
    if (!config_path.empty())
      apply_config(load_config_file(config_path), knobs, cmd);

    fs::path out = knobs.out_dir;
    fs::create_directories(out);

    if (cmd == c_ingest) {
      ProductCatalog catalog = load_products(products_path);
      SaleLog log = load_sales(sales_path, catalog);
      write_products_csv(catalog, out / "catalog.csv");
      write_sales_csv(log, out / "sales_clean.csv");
      write_ingest_json(catalog, log, out / "ingest.json");
    } else if (cmd == c_pairs) {
      ProductCatalog catalog = load_products(catalog_path);
      SaleLog log = load_sales(sales_path, catalog);
      CoOccurrenceCounts counts = count_copurchases(
          log, knobs.window_days, knobs.dedup_per_customer, knobs.workers);
      write_pairs_tsv(counts, out / "pairs.tsv");
    } else if (cmd == c_graph) {
      ProductCatalog catalog = load_products(catalog_path);
      SaleLog log = load_sales(sales_path, catalog);
      CoOccurrenceCounts counts = read_pairs_tsv(pairs_path, knobs.window_days);
      ProductGraph graph = build_graph(counts, catalog, log, knobs.threshold);
      write_nodes_tsv(graph, out / "nodes.tsv");
      write_edges_tsv(graph, out / "edges.tsv");
      write_graphml(graph, out / "graph.graphml");
      write_dot(graph, out / "graph.dot");
    } else if (cmd == c_stats) {
      ProductGraph graph = read_graph_tsv(nodes_path, edges_path);
      nlohmann::json doc = stats_to_json(component_stats(graph));
      std::ofstream file(out / "stats.json", std::ios::binary);
      file << doc.dump(2) << '\n';
    } else if (cmd == c_prune) {
      ProductGraph graph = read_graph_tsv(nodes_path, edges_path);
      auto [pruned, staples] = prune_staples(graph, knobs.staple_percent);
      write_staples_tsv(staples, out / "staples.tsv");
      write_nodes_tsv(pruned, out / "nodes_pruned.tsv");
      write_edges_tsv(pruned, out / "edges_pruned.tsv");
    } else if (cmd == c_tiles) {
      ProductGraph pruned = read_graph_tsv(nodes_path, edges_path);
      ProductGraph gstar = remove_small_components(pruned, knobs.min_component);
      std::vector<std::string> universe;
      for (uint32_t v = 0; v < gstar.node_count(); ++v)
        universe.push_back(gstar.id_of(v));
      write_universe_tsv(universe, out / "universe.tsv");
      auto tiles = extract_tiles(gstar, knobs.cpm_k, knobs.min_tile, knobs.workers);
      write_tiles_json(tiles, out / "tiles.json");
    } else if (cmd == c_cover) {
      auto tiles = read_tiles_json(tiles_path);
      auto universe = read_universe_tsv(universe_path);
      CoverageSolution solution = greedy_cover(tiles, universe, knobs.min_gain);
      write_coverage_json(solution, out / "coverage.json");
    } else if (cmd == c_report) {
      PipelineOptions options = make_pipeline_options(knobs, products_path, sales_path);
      options.write_stage_artifacts = false;
      run_pipeline(options);
    } else if (cmd == c_synth) {
      Corpus corpus = generate_corpus(corpus_spec);
      write_products_csv(corpus.products, out / "products.csv");
      write_sales_csv(corpus.log, out / "sales.csv", corpus.returns);
    } else if (cmd == c_pipeline) {
      run_pipeline(make_pipeline_options(knobs, products_path, sales_path));
    }
  } catch (const std::exception& e) {
    std::cerr << "copnet " << cmd->get_name() << ": error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
