#include "copnet/tiles.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "copnet/util.hpp"
#include "json.hpp"

namespace copnet {

namespace {

std::vector<std::string> resolve_ids(const ProductGraph& graph,
                                     const std::vector<uint32_t>& nodes) {
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (uint32_t v : nodes) ids.push_back(graph.id_of(v));
  // Node index order is product id order, so the result is already sorted.
  return ids;
}

void assign_ids(std::vector<Tile>& tiles, const char* prefix) {
  std::sort(tiles.begin(), tiles.end(), [](const Tile& a, const Tile& b) {
    return std::tie(a.members, a.center) < std::tie(b.members, b.center);
  });
  for (std::size_t i = 0; i < tiles.size(); ++i)
    tiles[i].tile_id = strprintf("%s-%06zu", prefix, i);
}

std::vector<uint32_t> intersect_sorted(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

void bron_kerbosch(const ProductGraph& graph, std::vector<uint32_t>& current,
                   std::vector<uint32_t> candidates, std::vector<uint32_t> excluded,
                   std::vector<std::vector<uint32_t>>& out) {
  if (candidates.empty() && excluded.empty()) {
    out.push_back(current);
    return;
  }
  // Pivot with the most candidate neighbors; smallest index on ties.
  uint32_t pivot = 0;
  std::size_t best = SIZE_MAX;
  for (const auto* pool : {&candidates, &excluded}) {
    for (uint32_t u : *pool) {
      std::size_t hits = intersect_sorted(candidates, graph.neighbors(u)).size();
      std::size_t misses = candidates.size() - hits;
      if (best == SIZE_MAX || misses < best) {
        best = misses;
        pivot = u;
      }
    }
  }
  std::vector<uint32_t> branch;
  std::set_difference(candidates.begin(), candidates.end(),
                      graph.neighbors(pivot).begin(), graph.neighbors(pivot).end(),
                      std::back_inserter(branch));
  for (uint32_t v : branch) {
    current.push_back(v);
    bron_kerbosch(graph, current, intersect_sorted(candidates, graph.neighbors(v)),
                  intersect_sorted(excluded, graph.neighbors(v)), out);
    current.pop_back();
    candidates.erase(std::lower_bound(candidates.begin(), candidates.end(), v));
    excluded.insert(std::lower_bound(excluded.begin(), excluded.end(), v), v);
  }
}

struct UnionFind {
  std::vector<uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so the representative stays deterministic.
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

const char* to_string(TileKind kind) {
  switch (kind) {
    case TileKind::star: return "star";
    case TileKind::community: return "community";
    case TileKind::linear: return "linear";
  }
  return "?";
}

const char* to_string(TileLabel label) {
  switch (label) {
    case TileLabel::complements: return "complements";
    case TileLabel::substitutes_by_choice: return "substitutes_by_choice";
    case TileLabel::substitutes_by_ignorance: return "substitutes_by_ignorance";
  }
  return "?";
}

TileKind parse_tile_kind(const std::string& text) {
  if (text == "star") return TileKind::star;
  if (text == "community") return TileKind::community;
  if (text == "linear") return TileKind::linear;
  fail(strprintf("unknown tile kind '%s'", text.c_str()));
}

TileLabel label_for(TileKind kind) {
  switch (kind) {
    case TileKind::community: return TileLabel::complements;
    case TileKind::star: return TileLabel::substitutes_by_choice;
    case TileKind::linear: return TileLabel::substitutes_by_ignorance;
  }
  return TileLabel::complements;
}

std::vector<Tile> extract_stars(const ProductGraph& graph,
                                std::size_t min_members, int workers) {
  std::size_t n = graph.node_count();
  std::size_t n_chunks = 1;
  if (workers > 1 && n > 1024)
    n_chunks = std::min<std::size_t>(static_cast<std::size_t>(workers) * 4,
                                     n / 512);
  std::size_t per_chunk = (n + n_chunks - 1) / std::max<std::size_t>(n_chunks, 1);
  std::vector<std::vector<Tile>> partial(n_chunks);

  parallel_chunks(n_chunks, workers, [&](std::size_t chunk) {
    std::vector<uint32_t> leaves;
    for (uint32_t c = static_cast<uint32_t>(chunk * per_chunk),
                  stop = static_cast<uint32_t>(
                      std::min(n, (chunk + 1) * per_chunk));
         c < stop; ++c) {
      leaves.clear();
      for (uint32_t v : graph.neighbors(c))
        if (graph.degree(v) <= 2) leaves.push_back(v);
      if (leaves.size() < 4) continue;

      // Leaves have degree <= 2, so counting their neighbors inside the
      // leaf set is cheap; every chord is seen from both ends.
      std::size_t chord_ends = 0;
      for (uint32_t v : leaves)
        for (uint32_t w : graph.neighbors(v))
          if (w != c && std::binary_search(leaves.begin(), leaves.end(), w))
            ++chord_ends;
      std::size_t chords = chord_ends / 2;

      std::size_t member_count = leaves.size() + 1;
      if (chords > member_count / 2) continue;
      if (member_count < min_members) continue;

      std::vector<uint32_t> members = leaves;
      members.insert(std::lower_bound(members.begin(), members.end(), c), c);

      Tile tile;
      tile.kind = TileKind::star;
      tile.label = label_for(tile.kind);
      tile.members = resolve_ids(graph, members);
      tile.center = graph.id_of(c);
      tile.chord_count = chords;
      partial[chunk].push_back(std::move(tile));
    }
  });

  std::vector<Tile> tiles;
  for (auto& part : partial)
    for (auto& tile : part) tiles.push_back(std::move(tile));
  assign_ids(tiles, "star");
  return tiles;
}

std::vector<Tile> extract_linear(const ProductGraph& graph, std::size_t min_members) {
  std::size_t n = graph.node_count();
  std::vector<bool> in_core(n, false);
  for (uint32_t v = 0; v < n; ++v)
    in_core[v] = graph.degree(v) >= 1 && graph.degree(v) <= 3;

  // Raw cores: connected components of the degree-1..3 induced subgraph.
  struct RawTile {
    std::vector<uint32_t> members;  // core plus anchors, sorted
    std::vector<uint32_t> anchors;  // sorted
  };
  std::vector<RawTile> raw;
  std::vector<bool> visited(n, false);
  for (uint32_t start = 0; start < n; ++start) {
    if (!in_core[start] || visited[start]) continue;
    std::vector<uint32_t> core;
    std::vector<uint32_t> stack{start};
    visited[start] = true;
    while (!stack.empty()) {
      uint32_t v = stack.back();
      stack.pop_back();
      core.push_back(v);
      for (uint32_t w : graph.neighbors(v))
        if (in_core[w] && !visited[w]) {
          visited[w] = true;
          stack.push_back(w);
        }
    }
    std::sort(core.begin(), core.end());

    RawTile tile;
    for (uint32_t v : core)
      for (uint32_t w : graph.neighbors(v))
        if (!in_core[w] && graph.degree(w) >= 4) tile.anchors.push_back(w);
    std::sort(tile.anchors.begin(), tile.anchors.end());
    tile.anchors.erase(std::unique(tile.anchors.begin(), tile.anchors.end()),
                       tile.anchors.end());
    std::merge(core.begin(), core.end(), tile.anchors.begin(), tile.anchors.end(),
               std::back_inserter(tile.members));
    raw.push_back(std::move(tile));
  }

  // Provisional ids: canonical member-list order.
  std::sort(raw.begin(), raw.end(), [](const RawTile& a, const RawTile& b) {
    return a.members < b.members;
  });

  // Merge pass. Live groups carry the union of their raw tiles; a group is
  // adjacent to another when they share an anchor node.
  UnionFind uf(raw.size());
  std::vector<std::set<uint32_t>> group_members(raw.size());
  std::vector<std::set<uint32_t>> group_anchors(raw.size());
  std::map<uint32_t, std::vector<uint32_t>> tiles_at_anchor;
  for (uint32_t t = 0; t < raw.size(); ++t) {
    group_members[t].insert(raw[t].members.begin(), raw[t].members.end());
    group_anchors[t].insert(raw[t].anchors.begin(), raw[t].anchors.end());
    for (uint32_t a : raw[t].anchors) tiles_at_anchor[a].push_back(t);
  }

  auto merge_groups = [&](uint32_t a, uint32_t b) {
    // Both arguments are live roots; the smaller id stays representative
    // and keeps the union payload.
    uf.unite(a, b);
    uint32_t root = uf.find(a);
    uint32_t other = root == a ? b : a;
    group_members[root].insert(group_members[other].begin(),
                               group_members[other].end());
    group_anchors[root].insert(group_anchors[other].begin(),
                               group_anchors[other].end());
    group_members[other].clear();
    group_anchors[other].clear();
  };

  for (uint32_t t = 0; t < raw.size(); ++t) {
    uint32_t g = uf.find(t);
    if (group_members[g].size() >= min_members) continue;
    // Partner: adjacent live group with the most members; ties go to the
    // smaller group id.
    uint32_t partner = UINT32_MAX;
    for (uint32_t anchor : group_anchors[g]) {
      for (uint32_t other : tiles_at_anchor[anchor]) {
        uint32_t og = uf.find(other);
        if (og == g) continue;
        if (partner == UINT32_MAX ||
            group_members[og].size() > group_members[partner].size() ||
            (group_members[og].size() == group_members[partner].size() &&
             og < partner))
          partner = og;
      }
    }
    if (partner == UINT32_MAX) continue;  // nothing shares an anchor
    merge_groups(g, partner);
  }

  std::vector<Tile> tiles;
  for (uint32_t t = 0; t < raw.size(); ++t) {
    if (uf.find(t) != t || group_members[t].empty()) continue;
    if (group_members[t].size() < min_members) continue;
    Tile tile;
    tile.kind = TileKind::linear;
    tile.label = label_for(tile.kind);
    tile.members = resolve_ids(
        graph, {group_members[t].begin(), group_members[t].end()});
    tile.anchors = resolve_ids(
        graph, {group_anchors[t].begin(), group_anchors[t].end()});
    tiles.push_back(std::move(tile));
  }
  assign_ids(tiles, "linear");
  return tiles;
}

std::vector<std::vector<uint32_t>> maximal_cliques(const ProductGraph& graph) {
  std::vector<uint32_t> all(graph.node_count());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<uint32_t>> cliques;
  std::vector<uint32_t> current;
  bron_kerbosch(graph, current, std::move(all), {}, cliques);
  for (auto& clique : cliques) std::sort(clique.begin(), clique.end());
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

std::vector<std::vector<uint32_t>> clique_percolation(const ProductGraph& graph,
                                                      int k) {
  if (k < 3) fail("clique percolation requires k >= 3");
  auto cliques = maximal_cliques(graph);
  // Any k-clique lives inside a maximal clique of size >= k, and two
  // maximal cliques overlap in >= k-1 nodes exactly when their k-cliques
  // chain, so percolating maximal cliques gives the same communities.
  std::erase_if(cliques, [&](const auto& c) {
    return c.size() < static_cast<std::size_t>(k);
  });

  std::vector<std::vector<uint32_t>> cliques_of_node(graph.node_count());
  for (uint32_t c = 0; c < cliques.size(); ++c)
    for (uint32_t v : cliques[c]) cliques_of_node[v].push_back(c);

  UnionFind uf(cliques.size());
  std::vector<uint32_t> shared;
  for (uint32_t c = 0; c < cliques.size(); ++c) {
    shared.clear();
    for (uint32_t v : cliques[c])
      for (uint32_t other : cliques_of_node[v])
        if (other < c) shared.push_back(other);
    std::sort(shared.begin(), shared.end());
    // Multiplicity of `other` in `shared` equals |clique[c] ∩ clique[other]|.
    for (std::size_t i = 0; i < shared.size();) {
      std::size_t j = i;
      while (j < shared.size() && shared[j] == shared[i]) ++j;
      if (j - i >= static_cast<std::size_t>(k - 1)) uf.unite(c, shared[i]);
      i = j;
    }
  }

  std::map<uint32_t, std::set<uint32_t>> groups;
  for (uint32_t c = 0; c < cliques.size(); ++c)
    groups[uf.find(c)].insert(cliques[c].begin(), cliques[c].end());

  std::vector<std::vector<uint32_t>> communities;
  communities.reserve(groups.size());
  for (auto& [root, nodes] : groups)
    communities.emplace_back(nodes.begin(), nodes.end());
  std::sort(communities.begin(), communities.end());
  return communities;
}

std::vector<Tile> extract_communities(const ProductGraph& graph, int k,
                                      std::size_t min_members) {
  auto communities = clique_percolation(graph, k);
  std::vector<Tile> tiles;
  for (auto& nodes : communities) {
    if (nodes.size() < min_members) continue;
    Tile tile;
    tile.kind = TileKind::community;
    tile.label = label_for(tile.kind);
    tile.members = resolve_ids(graph, nodes);
    tile.k = k;
    tiles.push_back(std::move(tile));
  }
  assign_ids(tiles, "community");
  return tiles;
}

std::vector<Tile> extract_tiles(const ProductGraph& graph, int k,
                                std::size_t min_members, int workers) {
  std::vector<Tile> tiles = extract_communities(graph, k, min_members);
  auto stars = extract_stars(graph, min_members, workers);
  auto linear = extract_linear(graph, min_members);
  tiles.insert(tiles.end(), std::make_move_iterator(stars.begin()),
               std::make_move_iterator(stars.end()));
  tiles.insert(tiles.end(), std::make_move_iterator(linear.begin()),
               std::make_move_iterator(linear.end()));
  std::sort(tiles.begin(), tiles.end(),
            [](const Tile& a, const Tile& b) { return a.tile_id < b.tile_id; });
  return tiles;
}

void write_tiles_json(const std::vector<Tile>& tiles,
                      const std::filesystem::path& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& tile : tiles) {
    nlohmann::json obj;
    obj["tile_id"] = tile.tile_id;
    obj["kind"] = to_string(tile.kind);
    obj["label"] = to_string(tile.label);
    obj["members"] = tile.members;
    if (tile.kind == TileKind::star) {
      obj["center"] = *tile.center;
      obj["chord_count"] = tile.chord_count;
    }
    if (tile.kind == TileKind::community) obj["k"] = tile.k;
    obj["anchors"] = tile.anchors;
    arr.push_back(std::move(obj));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << arr.dump(2) << '\n';
}

std::vector<Tile> read_tiles_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(strprintf("cannot open '%s'", path.string().c_str()));
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const std::exception& e) {
    fail(strprintf("%s: %s", path.string().c_str(), e.what()));
  }
  std::vector<Tile> tiles;
  for (const auto& obj : arr) {
    Tile tile;
    tile.tile_id = obj.at("tile_id").get<std::string>();
    tile.kind = parse_tile_kind(obj.at("kind").get<std::string>());
    tile.label = label_for(tile.kind);
    tile.members = obj.at("members").get<std::vector<std::string>>();
    if (obj.contains("center")) tile.center = obj["center"].get<std::string>();
    if (obj.contains("chord_count")) tile.chord_count = obj["chord_count"].get<std::size_t>();
    if (obj.contains("k")) tile.k = obj["k"].get<int>();
    if (obj.contains("anchors"))
      tile.anchors = obj["anchors"].get<std::vector<std::string>>();
    tiles.push_back(std::move(tile));
  }
  return tiles;
}

}  // namespace copnet
