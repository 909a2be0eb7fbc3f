#include "copnet/coverage.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>

#include "copnet/util.hpp"
#include "json.hpp"

namespace copnet {

namespace {

int kind_rank(TileKind kind) {
  // Coverage tie-break preference: community > star > linear.
  switch (kind) {
    case TileKind::community: return 0;
    case TileKind::star: return 1;
    case TileKind::linear: return 2;
  }
  return 3;
}

struct Candidate {
  std::size_t gain;
  std::size_t size;
  int rank;
  std::size_t id_order;  // position in tile_id order
  std::size_t tile;

  bool operator<(const Candidate& other) const {
    // priority_queue is a max-heap; "better" must compare greater.
    if (gain != other.gain) return gain < other.gain;
    if (size != other.size) return size < other.size;
    if (rank != other.rank) return rank > other.rank;
    return id_order > other.id_order;
  }
};

}  // namespace

CoverageSolution greedy_cover(const std::vector<Tile>& tiles,
                              const std::vector<std::string>& universe,
                              int min_gain) {
  if (min_gain < 1) fail("min_gain must be >= 1");

  std::vector<std::string> sorted_universe = universe;
  std::sort(sorted_universe.begin(), sorted_universe.end());
  sorted_universe.erase(
      std::unique(sorted_universe.begin(), sorted_universe.end()),
      sorted_universe.end());
  auto universe_index = [&](const std::string& id) -> std::size_t {
    auto it = std::lower_bound(sorted_universe.begin(), sorted_universe.end(), id);
    if (it == sorted_universe.end() || *it != id) return SIZE_MAX;
    return static_cast<std::size_t>(it - sorted_universe.begin());
  };

  // Universe-resident members per tile, as universe indexes.
  std::vector<std::vector<std::size_t>> tile_nodes(tiles.size());
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    for (const auto& id : tiles[t].members) {
      std::size_t idx = universe_index(id);
      if (idx != SIZE_MAX) tile_nodes[t].push_back(idx);
    }
  }

  std::vector<std::size_t> id_order(tiles.size());
  {
    std::vector<std::size_t> by_id(tiles.size());
    std::iota(by_id.begin(), by_id.end(), 0);
    std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
      return tiles[a].tile_id < tiles[b].tile_id;
    });
    for (std::size_t pos = 0; pos < by_id.size(); ++pos) id_order[by_id[pos]] = pos;
  }

  std::priority_queue<Candidate> heap;
  for (std::size_t t = 0; t < tiles.size(); ++t)
    heap.push({tile_nodes[t].size(), tiles[t].members.size(),
               kind_rank(tiles[t].kind), id_order[t], t});

  CoverageSolution solution;
  std::vector<bool> is_covered(sorted_universe.size(), false);
  std::size_t covered_count = 0;

  auto fresh_gain = [&](std::size_t t) {
    std::size_t gain = 0;
    for (std::size_t idx : tile_nodes[t])
      if (!is_covered[idx]) ++gain;
    return gain;
  };

  // Lazy greedy: stored gains are upper bounds (coverage is submodular),
  // so a popped entry whose recomputed gain still tops the heap is the
  // exact argmax under the full tie-break order.
  while (!heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    std::size_t gain = fresh_gain(top.tile);
    if (gain != top.gain) {
      top.gain = gain;
      if (!heap.empty() && top < heap.top()) {
        heap.push(top);
        continue;
      }
    }
    if (gain < static_cast<std::size_t>(min_gain)) break;
    for (std::size_t idx : tile_nodes[top.tile]) {
      if (!is_covered[idx]) {
        is_covered[idx] = true;
        ++covered_count;
      }
    }
    solution.selected.push_back({tiles[top.tile].tile_id, gain});

    const Tile& tile = tiles[top.tile];
    ++solution.per_type_counts[tile.kind];
    solution.mean_size_per_type[tile.kind] +=
        static_cast<double>(tile.members.size());
  }

  for (auto& [kind, sum] : solution.mean_size_per_type)
    sum /= static_cast<double>(solution.per_type_counts[kind]);

  solution.covered.reserve(covered_count);
  for (std::size_t i = 0; i < sorted_universe.size(); ++i)
    if (is_covered[i]) solution.covered.push_back(sorted_universe[i]);
  solution.uncovered_count = sorted_universe.size() - covered_count;

  // Per-kind node coverage: union of the selected tiles of that kind.
  std::map<TileKind, std::vector<bool>> kind_cover;
  std::map<std::string, std::size_t> tile_by_id;
  for (std::size_t t = 0; t < tiles.size(); ++t) tile_by_id[tiles[t].tile_id] = t;
  for (const auto& sel : solution.selected) {
    std::size_t t = tile_by_id[sel.tile_id];
    auto& bits = kind_cover[tiles[t].kind];
    if (bits.empty()) bits.assign(sorted_universe.size(), false);
    for (std::size_t idx : tile_nodes[t]) bits[idx] = true;
  }
  for (const auto& [kind, bits] : kind_cover)
    solution.node_coverage_per_type[kind] =
        static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));

  return solution;
}

std::map<std::size_t, std::size_t> overcoverage(
    const std::vector<Tile>& tiles, const std::vector<std::string>& universe) {
  std::vector<std::string> sorted_universe = universe;
  std::sort(sorted_universe.begin(), sorted_universe.end());
  sorted_universe.erase(
      std::unique(sorted_universe.begin(), sorted_universe.end()),
      sorted_universe.end());

  std::vector<std::size_t> tiles_per_node(sorted_universe.size(), 0);
  for (const auto& tile : tiles) {
    for (const auto& id : tile.members) {
      auto it = std::lower_bound(sorted_universe.begin(), sorted_universe.end(), id);
      if (it != sorted_universe.end() && *it == id)
        ++tiles_per_node[it - sorted_universe.begin()];
    }
  }
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t n : tiles_per_node) ++histogram[n];
  return histogram;
}

void write_coverage_json(const CoverageSolution& solution,
                         const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["selected"] = nlohmann::json::array();
  for (const auto& sel : solution.selected)
    doc["selected"].push_back({{"tile_id", sel.tile_id}, {"gain", sel.gain}});
  doc["uncovered_count"] = solution.uncovered_count;
  nlohmann::json per_type;
  for (TileKind kind : {TileKind::star, TileKind::community, TileKind::linear}) {
    auto count_it = solution.per_type_counts.find(kind);
    std::size_t count = count_it == solution.per_type_counts.end() ? 0 : count_it->second;
    auto cover_it = solution.node_coverage_per_type.find(kind);
    std::size_t cover = cover_it == solution.node_coverage_per_type.end() ? 0 : cover_it->second;
    auto mean_it = solution.mean_size_per_type.find(kind);
    double mean = mean_it == solution.mean_size_per_type.end() ? 0.0 : mean_it->second;
    per_type[to_string(kind)] = {{"count", count},
                                 {"node_coverage", cover},
                                 {"mean_size", round_sig(mean)}};
  }
  doc["per_type"] = std::move(per_type);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << doc.dump(2) << '\n';
}

void write_universe_tsv(const std::vector<std::string>& universe,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  for (const auto& id : universe) out << id << '\n';
}

std::vector<std::string> read_universe_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(strprintf("cannot open '%s'", path.string().c_str()));
  std::vector<std::string> universe;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) universe.push_back(line);
  return universe;
}

}  // namespace copnet
