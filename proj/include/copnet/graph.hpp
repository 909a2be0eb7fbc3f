#ifndef COPNET_GRAPH_HPP
#define COPNET_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "copnet/cooccur.hpp"
#include "copnet/ingest.hpp"

namespace copnet {

/// Knobs of the network-construction and tiling pipeline.
struct BuildConfig {
  int threshold_N = 5;          // minimum togetherness count for an edge
  double staple_percent = 0.05; // share of GCC nodes pruned as staples
  int min_component = 5;        // smaller components are dropped before tiling
  int window_days = 7;          // togetherness window
  int cpm_k = 3;                // clique-percolation k
  int min_gain = 1;             // greedy coverage stopping gain

  void validate() const;
};

/// Simple undirected product graph: no loops, no parallel edges. Node
/// indexes are assigned in ascending product_id order and adjacency lists
/// are kept sorted, so iteration order is deterministic. Immutable once
/// built; operations return new graphs.
class ProductGraph {
 public:
  class Builder {
   public:
    /// Nodes may be added in any order; build() sorts them by id.
    void add_node(std::string id, uint64_t sales_volume = 0,
                  std::string description = "");
    void add_edge(const std::string& a, const std::string& b);
    ProductGraph build() &&;

   private:
    std::vector<std::string> ids_;
    std::vector<uint64_t> sales_;
    std::vector<std::string> descriptions_;
    std::vector<std::pair<std::string, std::string>> edges_;
  };

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::string& id_of(uint32_t index) const { return ids_[index]; }
  /// Index of the product, or npos when absent.
  uint32_t index_of(const std::string& id) const;
  static constexpr uint32_t npos = UINT32_MAX;

  uint64_t sales_volume(uint32_t index) const { return sales_[index]; }
  const std::string& description(uint32_t index) const { return descriptions_[index]; }
  const std::vector<uint32_t>& neighbors(uint32_t index) const { return adj_[index]; }
  std::size_t degree(uint32_t index) const { return adj_[index].size(); }
  bool has_edge(uint32_t a, uint32_t b) const;

  uint64_t total_sales() const;

  /// Subgraph induced by keeping the flagged nodes; preserves id order.
  ProductGraph induced(const std::vector<bool>& keep) const;

  /// Connected components as sorted node-index lists, ordered by smallest
  /// member index.
  std::vector<std::vector<uint32_t>> components() const;

  /// Structural self-check (sorted unique adjacency, symmetry, no loops).
  void validate() const;

 private:
  std::vector<std::string> ids_;          // ascending
  std::vector<uint64_t> sales_;
  std::vector<std::string> descriptions_;
  std::vector<std::vector<uint32_t>> adj_;  // sorted neighbor lists
  std::size_t edge_count_ = 0;
  friend class Builder;
};

struct NetworkStats {
  std::size_t edges = 0;
  std::size_t nodes = 0;
  std::size_t isolated_nodes = 0;
  std::size_t isolated_pairs = 0;
  std::size_t components = 0;
  std::size_t gcc_size_abs = 0;
  double gcc_size_rel = 0.0;
  double gcc_sales_share = 0.0;
};

struct StapleEntry {
  std::string product_id;
  std::size_t degree = 0;
  uint64_t sales_volume = 0;
};

/// Nodes are the material products with at least one sale in the log;
/// an edge joins two products whose togetherness count is >= threshold_N.
/// Node sales_volume is the number of sale events of the product.
ProductGraph build_graph(const CoOccurrenceCounts& counts,
                         const ProductCatalog& catalog, const SaleLog& log,
                         int threshold_N);

NetworkStats component_stats(const ProductGraph& graph);

/// Remove round(staple_percent * |GCC|) GCC nodes of highest degree (ties:
/// higher sales volume, then smaller product id). Returns the pruned graph
/// and the removed nodes sorted by descending degree.
std::pair<ProductGraph, std::vector<StapleEntry>> prune_staples(
    const ProductGraph& graph, double staple_percent);

ProductGraph remove_small_components(const ProductGraph& graph, int min_component);

void write_edges_tsv(const ProductGraph& graph, const std::filesystem::path& path);
void write_nodes_tsv(const ProductGraph& graph, const std::filesystem::path& path);
void write_graphml(const ProductGraph& graph, const std::filesystem::path& path);
void write_dot(const ProductGraph& graph, const std::filesystem::path& path);
void write_staples_tsv(const std::vector<StapleEntry>& staples,
                       const std::filesystem::path& path);

/// Rebuild a graph from nodes.tsv + edges.tsv written by the functions above.
ProductGraph read_graph_tsv(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path);

}  // namespace copnet

#endif
