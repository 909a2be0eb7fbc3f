#ifndef COPNET_COVERAGE_HPP
#define COPNET_COVERAGE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "copnet/tiles.hpp"

namespace copnet {

struct SelectedTile {
  std::string tile_id;
  std::size_t gain = 0;  // newly covered nodes at selection time
};

struct CoverageSolution {
  std::vector<SelectedTile> selected;      // in selection order
  std::vector<std::string> covered;        // sorted union of selected members
  std::size_t uncovered_count = 0;
  std::map<TileKind, std::size_t> per_type_counts;
  std::map<TileKind, double> mean_size_per_type;
  std::map<TileKind, std::size_t> node_coverage_per_type;
};

/// Greedy maximum coverage: repeatedly pick the tile covering the most
/// not-yet-covered universe nodes, stopping when the best gain drops below
/// min_gain. Ties: larger tile, then community > star > linear, then
/// smaller tile_id. Members outside the universe never count toward gains.
CoverageSolution greedy_cover(const std::vector<Tile>& tiles,
                              const std::vector<std::string>& universe,
                              int min_gain = 1);

/// Histogram: bin b holds the number of universe nodes belonging to exactly
/// b of the given tiles; bin 0 counts uncovered nodes.
std::map<std::size_t, std::size_t> overcoverage(
    const std::vector<Tile>& tiles, const std::vector<std::string>& universe);

void write_coverage_json(const CoverageSolution& solution,
                         const std::filesystem::path& path);

void write_universe_tsv(const std::vector<std::string>& universe,
                        const std::filesystem::path& path);
std::vector<std::string> read_universe_tsv(const std::filesystem::path& path);

}  // namespace copnet

#endif
