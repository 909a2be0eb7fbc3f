#include "copnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "copnet/util.hpp"

namespace copnet {

void BuildConfig::validate() const {
  if (threshold_N < 1) fail("threshold_N must be >= 1");
  if (staple_percent < 0.0 || staple_percent > 1.0)
    fail("staple_percent must be in [0, 1]");
  if (min_component < 1) fail("min_component must be >= 1");
  if (window_days < 1) fail("window_days must be >= 1");
  if (cpm_k < 3) fail("cpm_k must be >= 3");
  if (min_gain < 1) fail("min_gain must be >= 1");
}

void ProductGraph::Builder::add_node(std::string id, uint64_t sales_volume,
                                     std::string description) {
  ids_.push_back(std::move(id));
  sales_.push_back(sales_volume);
  descriptions_.push_back(std::move(description));
}

void ProductGraph::Builder::add_edge(const std::string& a, const std::string& b) {
  edges_.emplace_back(a, b);
}

ProductGraph ProductGraph::Builder::build() && {
  ProductGraph g;
  std::vector<uint32_t> order(ids_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return ids_[a] < ids_[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (ids_[order[i]] == ids_[order[i - 1]])
      fail(strprintf("duplicate node '%s'", ids_[order[i]].c_str()));

  g.ids_.reserve(ids_.size());
  g.sales_.reserve(ids_.size());
  g.descriptions_.reserve(ids_.size());
  for (uint32_t src : order) {
    g.ids_.push_back(std::move(ids_[src]));
    g.sales_.push_back(sales_[src]);
    g.descriptions_.push_back(std::move(descriptions_[src]));
  }
  g.adj_.assign(g.ids_.size(), {});

  for (const auto& [a, b] : edges_) {
    uint32_t ia = g.index_of(a);
    uint32_t ib = g.index_of(b);
    if (ia == ProductGraph::npos || ib == ProductGraph::npos)
      fail(strprintf("edge references unknown node '%s'",
                     (ia == ProductGraph::npos ? a : b).c_str()));
    if (ia == ib) fail(strprintf("loop edge on '%s'", a.c_str()));
    g.adj_[ia].push_back(ib);
    g.adj_[ib].push_back(ia);
  }
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    g.edge_count_ += nbrs.size();
  }
  g.edge_count_ /= 2;
  return g;
}

uint32_t ProductGraph::index_of(const std::string& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return npos;
  return static_cast<uint32_t>(it - ids_.begin());
}

bool ProductGraph::has_edge(uint32_t a, uint32_t b) const {
  const auto& nbrs = adj_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

uint64_t ProductGraph::total_sales() const {
  uint64_t sum = 0;
  for (uint64_t s : sales_) sum += s;
  return sum;
}

ProductGraph ProductGraph::induced(const std::vector<bool>& keep) const {
  std::vector<uint32_t> remap(node_count(), npos);
  ProductGraph g;
  for (uint32_t i = 0; i < node_count(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<uint32_t>(g.ids_.size());
    g.ids_.push_back(ids_[i]);
    g.sales_.push_back(sales_[i]);
    g.descriptions_.push_back(descriptions_[i]);
  }
  g.adj_.assign(g.ids_.size(), {});
  for (uint32_t i = 0; i < node_count(); ++i) {
    if (!keep[i]) continue;
    for (uint32_t j : adj_[i]) {
      if (!keep[j]) continue;
      g.adj_[remap[i]].push_back(remap[j]);
    }
    g.edge_count_ += g.adj_[remap[i]].size();
  }
  // Filtering a sorted list with an order-preserving remap keeps it sorted.
  g.edge_count_ /= 2;
  return g;
}

std::vector<std::vector<uint32_t>> ProductGraph::components() const {
  std::vector<std::vector<uint32_t>> comps;
  std::vector<bool> visited(node_count(), false);
  std::vector<uint32_t> stack;
  for (uint32_t start = 0; start < node_count(); ++start) {
    if (visited[start]) continue;
    std::vector<uint32_t> comp;
    stack.push_back(start);
    visited[start] = true;
    while (!stack.empty()) {
      uint32_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (uint32_t w : adj_[v]) {
        if (!visited[w]) {
          visited[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

void ProductGraph::validate() const {
  std::size_t degree_sum = 0;
  for (uint32_t i = 0; i < node_count(); ++i) {
    const auto& nbrs = adj_[i];
    if (!std::is_sorted(nbrs.begin(), nbrs.end()))
      fail("adjacency list not sorted");
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
      fail("parallel edge");
    for (uint32_t j : nbrs) {
      if (j == i) fail("loop edge");
      if (j >= node_count()) fail("neighbor out of range");
      if (!has_edge(j, i)) fail("asymmetric adjacency");
    }
    degree_sum += nbrs.size();
  }
  if (degree_sum != 2 * edge_count_) fail("edge count mismatch");
  if (!std::is_sorted(ids_.begin(), ids_.end())) fail("node ids not sorted");
}

ProductGraph build_graph(const CoOccurrenceCounts& counts,
                         const ProductCatalog& catalog, const SaleLog& log,
                         int threshold_N) {
  if (threshold_N < 1) fail("threshold_N must be >= 1");

  // One node per product with at least one sale event.
  std::unordered_map<std::string, uint64_t> volume;
  for (const auto& ev : log.events) ++volume[ev.product_id];

  ProductGraph::Builder builder;
  for (const auto& [id, events] : volume) {
    const ProductRecord* rec = catalog.find(id);
    builder.add_node(id, events, rec ? rec->description : "");
  }

  const auto& products = counts.products();
  counts.for_each([&](uint32_t a, uint32_t b, uint64_t n) {
    if (n < static_cast<uint64_t>(threshold_N)) return;
    const std::string& ida = products[a];
    const std::string& idb = products[b];
    // Counts always stem from the same log, so both endpoints are nodes;
    // skip anything else rather than invent sales-free nodes.
    if (!volume.count(ida) || !volume.count(idb)) return;
    builder.add_edge(ida, idb);
  });
  return std::move(builder).build();
}

NetworkStats component_stats(const ProductGraph& graph) {
  NetworkStats stats;
  stats.nodes = graph.node_count();
  stats.edges = graph.edge_count();

  auto comps = graph.components();
  stats.components = comps.size();
  std::size_t gcc_index = comps.size();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].size() == 1) ++stats.isolated_nodes;
    if (comps[i].size() == 2) ++stats.isolated_pairs;
    // Largest component; ties go to the one holding the smallest id, which
    // is the first found since traversal runs in ascending index order.
    if (gcc_index == comps.size() || comps[i].size() > comps[gcc_index].size())
      gcc_index = i;
  }
  if (gcc_index < comps.size()) {
    stats.gcc_size_abs = comps[gcc_index].size();
    uint64_t gcc_sales = 0;
    for (uint32_t v : comps[gcc_index]) gcc_sales += graph.sales_volume(v);
    uint64_t total = graph.total_sales();
    stats.gcc_size_rel = stats.nodes == 0
                             ? 0.0
                             : static_cast<double>(stats.gcc_size_abs) /
                                   static_cast<double>(stats.nodes);
    stats.gcc_sales_share = total == 0 ? 0.0
                                       : static_cast<double>(gcc_sales) /
                                             static_cast<double>(total);
  }
  return stats;
}

std::pair<ProductGraph, std::vector<StapleEntry>> prune_staples(
    const ProductGraph& graph, double staple_percent) {
  if (staple_percent < 0.0 || staple_percent > 1.0)
    fail("staple_percent must be in [0, 1]");

  std::vector<StapleEntry> staples;
  if (graph.node_count() == 0 || staple_percent == 0.0)
    return {graph.induced(std::vector<bool>(graph.node_count(), true)), staples};

  auto comps = graph.components();
  std::size_t gcc_index = 0;
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (comps[i].size() > comps[gcc_index].size()) gcc_index = i;
  const auto& gcc = comps[gcc_index];

  // Round-half-up of percent * |GCC|.
  auto m = static_cast<std::size_t>(
      std::floor(staple_percent * static_cast<double>(gcc.size()) + 0.5));
  m = std::min(m, gcc.size());

  std::vector<uint32_t> ordered(gcc.begin(), gcc.end());
  std::sort(ordered.begin(), ordered.end(), [&](uint32_t a, uint32_t b) {
    if (graph.degree(a) != graph.degree(b)) return graph.degree(a) > graph.degree(b);
    if (graph.sales_volume(a) != graph.sales_volume(b))
      return graph.sales_volume(a) > graph.sales_volume(b);
    return a < b;  // index order is id order
  });

  std::vector<bool> keep(graph.node_count(), true);
  for (std::size_t i = 0; i < m; ++i) {
    uint32_t v = ordered[i];
    keep[v] = false;
    staples.push_back({graph.id_of(v), graph.degree(v), graph.sales_volume(v)});
  }
  return {graph.induced(keep), std::move(staples)};
}

ProductGraph remove_small_components(const ProductGraph& graph, int min_component) {
  if (min_component < 1) fail("min_component must be >= 1");
  std::vector<bool> keep(graph.node_count(), false);
  for (const auto& comp : graph.components()) {
    if (comp.size() >= static_cast<std::size_t>(min_component))
      for (uint32_t v : comp) keep[v] = true;
  }
  return graph.induced(keep);
}

void write_edges_tsv(const ProductGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  for (uint32_t i = 0; i < graph.node_count(); ++i)
    for (uint32_t j : graph.neighbors(i))
      if (i < j) out << graph.id_of(i) << '\t' << graph.id_of(j) << '\n';
}

namespace {

std::string tsv_safe(std::string text) {
  for (char& c : text)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return text;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void write_nodes_tsv(const ProductGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  for (uint32_t i = 0; i < graph.node_count(); ++i)
    out << graph.id_of(i) << '\t' << graph.sales_volume(i) << '\t'
        << tsv_safe(graph.description(i)) << '\n';
}

void write_graphml(const ProductGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"d0\" for=\"node\" attr.name=\"sales_volume\" attr.type=\"long\"/>\n"
      << "  <key id=\"d1\" for=\"node\" attr.name=\"degree\" attr.type=\"long\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (uint32_t i = 0; i < graph.node_count(); ++i) {
    out << "    <node id=\"" << xml_escape(graph.id_of(i)) << "\">"
        << "<data key=\"d0\">" << graph.sales_volume(i) << "</data>"
        << "<data key=\"d1\">" << graph.degree(i) << "</data></node>\n";
  }
  for (uint32_t i = 0; i < graph.node_count(); ++i)
    for (uint32_t j : graph.neighbors(i))
      if (i < j)
        out << "    <edge source=\"" << xml_escape(graph.id_of(i))
            << "\" target=\"" << xml_escape(graph.id_of(j)) << "\"/>\n";
  out << "  </graph>\n</graphml>\n";
}

void write_dot(const ProductGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << "graph product_network {\n";
  for (uint32_t i = 0; i < graph.node_count(); ++i)
    out << "  \"" << dot_escape(graph.id_of(i)) << "\" [sales_volume="
        << graph.sales_volume(i) << ", degree=" << graph.degree(i) << "];\n";
  for (uint32_t i = 0; i < graph.node_count(); ++i)
    for (uint32_t j : graph.neighbors(i))
      if (i < j)
        out << "  \"" << dot_escape(graph.id_of(i)) << "\" -- \""
            << dot_escape(graph.id_of(j)) << "\";\n";
  out << "}\n";
}

void write_staples_tsv(const std::vector<StapleEntry>& staples,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  for (const auto& s : staples)
    out << s.product_id << '\t' << s.degree << '\t' << s.sales_volume << '\n';
}

ProductGraph read_graph_tsv(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path) {
  std::ifstream nodes(nodes_path, std::ios::binary);
  if (!nodes) fail(strprintf("cannot open '%s'", nodes_path.string().c_str()));
  ProductGraph::Builder builder;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(nodes, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      fail(strprintf("%s line %zu: expected 'id\\tsales\\tdescription'",
                     nodes_path.string().c_str(), lineno));
    uint64_t sales = 0;
    try {
      sales = std::stoull(line.substr(t1 + 1, t2 - t1 - 1));
    } catch (const std::exception&) {
      fail(strprintf("%s line %zu: bad sales volume",
                     nodes_path.string().c_str(), lineno));
    }
    builder.add_node(line.substr(0, t1), sales, line.substr(t2 + 1));
  }

  std::ifstream edges(edges_path, std::ios::binary);
  if (!edges) fail(strprintf("cannot open '%s'", edges_path.string().c_str()));
  lineno = 0;
  while (std::getline(edges, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    if (t1 == std::string::npos)
      fail(strprintf("%s line %zu: expected 'a\\tb'",
                     edges_path.string().c_str(), lineno));
    builder.add_edge(line.substr(0, t1), line.substr(t1 + 1));
  }
  return std::move(builder).build();
}

}  // namespace copnet
