#ifndef COPNET_SYNTH_HPP
#define COPNET_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "copnet/graph.hpp"
#include "copnet/ingest.hpp"
#include "copnet/tiles.hpp"

namespace copnet {

/// Blueprint for a graph with known planted structure. Planted stars,
/// cliques, and paths are pairwise vertex-disjoint; noise edges touch
/// filler nodes only, so the planted ground truth stays exact.
struct PlantSpec {
  struct Star {
    int leaf_count = 4;
    int chord_count = 0;
  };
  std::vector<Star> star_specs;
  std::vector<int> clique_specs;  // clique sizes
  std::vector<int> path_specs;    // path lengths (node counts)
  int filler_nodes = 0;
  int noise_edges = 0;
  uint64_t seed = 0;
};

struct PlantedGraph {
  ProductGraph graph;
  std::vector<Tile> truth;  // what the extractors should find
};

/// Same spec and seed always produce the same graph. Throws when a star's
/// chord_count exceeds floor(leaf_count / 2) (each leaf carries at most one
/// chord) or noise_edges exceeds the filler pair budget.
PlantedGraph generate_planted_graph(const PlantSpec& spec);

struct PlantedPair {
  std::string product_a;
  std::string product_b;
  int repetitions = 1;
};

/// Sale log in which every planted pair is co-purchased by one customer
/// within window_days, `repetitions` times (unique registers keep the
/// events from collapsing). count_copurchases over the result yields at
/// least the planted counts.
SaleLog generate_transactions(int n_customers,
                              const std::vector<PlantedPair>& planted_pairs,
                              int window_days, uint64_t seed);

/// Knobs of the synthetic retail corpus: customers shop latent product
/// pools in short sessions, sometimes returning to the pool a few days
/// later, with a small set of globally popular add-on products.
struct CorpusSpec {
  int n_products = 10000;
  int n_non_material = 25;
  int n_mixed = 5;
  int n_customers = 20000;
  long long n_events = 1000000;
  int horizon_days = 730;
  int pool_size = 12;
  int pool_stride = 10;  // consecutive pools overlap by pool_size - stride
  double staple_fraction = 0.01;
  double return_fraction = 0.01;  // emitted as kind=return rows in the CSV
  uint64_t seed = 1;
};

struct Corpus {
  std::vector<ProductRecord> products;  // includes non-material/mixed rows
  SaleLog log;                          // material sales only, normalized
  std::vector<SaleEvent> returns;       // dropped by ingest, kept for the CSV

  ProductCatalog catalog() const;
};

Corpus generate_corpus(const CorpusSpec& spec);

/// Exact products.csv / sales.csv formats of the ingest module.
void write_products_csv(const std::vector<ProductRecord>& products,
                        const std::filesystem::path& path);
void write_products_csv(const ProductCatalog& catalog,
                        const std::filesystem::path& path);
void write_sales_csv(const SaleLog& log, const std::filesystem::path& path,
                     const std::vector<SaleEvent>& returns = {});

}  // namespace copnet

#endif
