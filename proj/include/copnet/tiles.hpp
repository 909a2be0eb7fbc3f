#ifndef COPNET_TILES_HPP
#define COPNET_TILES_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "copnet/graph.hpp"

namespace copnet {

enum class TileKind { star, community, linear };
enum class TileLabel { complements, substitutes_by_choice, substitutes_by_ignorance };

const char* to_string(TileKind kind);
const char* to_string(TileLabel label);
TileKind parse_tile_kind(const std::string& text);

/// community -> complements, star -> substitutes by choice,
/// linear -> substitutes by ignorance.
TileLabel label_for(TileKind kind);

/// A structural subnetwork: star, clique-percolation community, or linear
/// chain/pendant. Members are sorted product ids; tiles of any kind may
/// overlap.
struct Tile {
  std::string tile_id;
  TileKind kind = TileKind::star;
  std::vector<std::string> members;
  std::optional<std::string> center;  // star only
  std::vector<std::string> anchors;   // linear only, sorted
  std::size_t chord_count = 0;        // star only
  int k = 0;                          // community only
  TileLabel label = TileLabel::substitutes_by_choice;
};

/// Imperfect stars: a hub with >= 4 neighbors of (global) degree <= 2,
/// tolerating up to floor(|members|/2) chords between the leaves. One
/// candidate star per center.
std::vector<Tile> extract_stars(const ProductGraph& graph,
                                std::size_t min_members = 5, int workers = 1);

/// Linear chains/pendants: connected runs of degree-1..3 nodes, with every
/// adjacent degree->=4 node attached as an anchor member. Tiles below
/// min_members merge into the anchor-sharing tile with the most members
/// (ties: smaller provisional id); leftovers below the floor are dropped.
std::vector<Tile> extract_linear(const ProductGraph& graph,
                                 std::size_t min_members = 5);

/// k-clique percolation communities of at least min_members nodes.
std::vector<Tile> extract_communities(const ProductGraph& graph, int k,
                                      std::size_t min_members = 5);

/// Raw clique-percolation communities, no size filter: connected families
/// of k-cliques chained by (k-1)-node overlaps, each returned as the sorted
/// union of its cliques' node indexes. Computed over maximal cliques, which
/// yields exactly the k-clique percolation result.
std::vector<std::vector<uint32_t>> clique_percolation(const ProductGraph& graph,
                                                      int k);

/// All maximal cliques (Bron-Kerbosch with pivoting), each sorted; the
/// clique list is sorted as well.
std::vector<std::vector<uint32_t>> maximal_cliques(const ProductGraph& graph);

/// All three extractors; result sorted by tile_id.
std::vector<Tile> extract_tiles(const ProductGraph& graph, int k,
                                std::size_t min_members = 5, int workers = 1);

void write_tiles_json(const std::vector<Tile>& tiles,
                      const std::filesystem::path& path);
std::vector<Tile> read_tiles_json(const std::filesystem::path& path);

}  // namespace copnet

#endif
