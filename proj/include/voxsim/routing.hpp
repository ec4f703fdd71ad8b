#pragma once

// Planar 4-connected navigation over the voxel grid. Receptors block their
// (x, y) footprint at every height; agents never block each other.

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "voxsim/core_model.hpp"

namespace voxsim {

// Time an agent spends moving into one path cell.
struct OccupancyInterval {
  Cell cell;
  Seconds begin = 0.0;
  Seconds end = 0.0;
  std::string agent_id;

  friend bool operator==(const OccupancyInterval&, const OccupancyInterval&) = default;
};

class NavGrid {
 public:
  static constexpr int kUnreachable = -1;

  NavGrid(const Parameters& params, const std::vector<Receptor>& receptors);

  int width() const { return width_; }
  int depth() const { return depth_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < depth_; }
  bool blocked(Cell c) const { return blocked_[flat(c)] != 0; }
  std::size_t flat(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }

  // Free cells 4-adjacent to a footprint, in +x, +y, -x, -y order.
  std::vector<Cell> access_cells(Cell target) const;

  // Path length from every cell to the nearest access cell of receptor
  // `receptor_index`, kUnreachable where none is reachable. Cached.
  const std::vector<int>& distance_field(std::size_t receptor_index) const;

  const std::vector<std::int64_t>& traversal_counts() const { return traversal_counts_; }
  std::int64_t traversal_count(Cell c) const { return traversal_counts_[flat(c)]; }
  const std::vector<OccupancyInterval>& occupancy() const { return occupancy_; }

  void record(const std::vector<Cell>& path, Seconds depart, double speed, std::string_view agent_id);

 private:
  int width_;
  int depth_;
  std::vector<unsigned char> blocked_;
  std::vector<Cell> receptor_cells_;
  std::vector<std::int64_t> traversal_counts_;
  std::vector<OccupancyInterval> occupancy_;
  mutable std::unordered_map<std::size_t, std::vector<int>> distance_cache_;
};

// Minimum-length path from `from` to some free cell 4-adjacent to the
// receptor's footprint. The start cell is excluded, the goal included, so an
// already adjacent start yields an empty path. Expansion order +x, +y, -x, -y
// fixes ties. Throws Error{Unreachable}.
std::vector<Cell> shortest_path(const NavGrid& grid, Cell from, const VoxelCoord& receptor);

Seconds travel_time(std::size_t path_length, const AgentType& type);
Seconds travel_time(const std::vector<Cell>& path, const AgentType& type);

enum class HandlingKind { load, unload };

// Base time plus one elevation penalty per level above ground.
Seconds handling_time(HandlingKind kind, const AgentType& type, const Receptor& receptor);

// Adds one traversal per path cell and logs the agent's transit interval for
// each cell: cell k (1-based) is occupied during [depart + (k-1)/speed, depart + k/speed].
void record_traversal(NavGrid& grid, const std::vector<Cell>& path, Seconds depart, double speed,
                      std::string_view agent_id);

}  // namespace voxsim
