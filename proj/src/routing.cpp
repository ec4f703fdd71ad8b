#include "voxsim/routing.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace voxsim {

namespace {

constexpr std::array<Cell, 4> kSteps{Cell{1, 0}, Cell{0, 1}, Cell{-1, 0}, Cell{0, -1}};

std::string cell_text(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

NavGrid::NavGrid(const Parameters& params, const std::vector<Receptor>& receptors)
    : width_(params.width),
      depth_(params.depth),
      blocked_(static_cast<std::size_t>(params.width) * params.depth, 0),
      traversal_counts_(blocked_.size(), 0) {
  receptor_cells_.reserve(receptors.size());
  for (const auto& r : receptors) {
    const Cell c = footprint(r.coord);
    receptor_cells_.push_back(c);
    if (in_bounds(c)) blocked_[flat(c)] = 1;
  }
}

std::vector<Cell> NavGrid::access_cells(Cell target) const {
  std::vector<Cell> out;
  for (const Cell& s : kSteps) {
    const Cell n{target.x + s.x, target.y + s.y};
    if (in_bounds(n) && !blocked(n)) out.push_back(n);
  }
  return out;
}

const std::vector<int>& NavGrid::distance_field(std::size_t receptor_index) const {
  if (auto it = distance_cache_.find(receptor_index); it != distance_cache_.end()) return it->second;

  std::vector<int> dist(blocked_.size(), kUnreachable);
  std::deque<Cell> queue;
  for (const Cell& c : access_cells(receptor_cells_.at(receptor_index))) {
    if (dist[flat(c)] == kUnreachable) {
      dist[flat(c)] = 0;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (const Cell& s : kSteps) {
      const Cell n{c.x + s.x, c.y + s.y};
      if (!in_bounds(n) || blocked(n) || dist[flat(n)] != kUnreachable) continue;
      dist[flat(n)] = dist[flat(c)] + 1;
      queue.push_back(n);
    }
  }
  return distance_cache_.emplace(receptor_index, std::move(dist)).first->second;
}

void NavGrid::record(const std::vector<Cell>& path, Seconds depart, double speed, std::string_view agent_id) {
  for (std::size_t k = 0; k < path.size(); ++k) {
    const Cell c = path[k];
    ++traversal_counts_[flat(c)];
    occupancy_.push_back(OccupancyInterval{c, depart + static_cast<double>(k) / speed,
                                           depart + static_cast<double>(k + 1) / speed, std::string(agent_id)});
  }
}

std::vector<Cell> shortest_path(const NavGrid& grid, Cell from, const VoxelCoord& receptor) {
  const Cell target = footprint(receptor);
  const auto goals = grid.access_cells(target);
  auto is_goal = [&](Cell c) { return std::find(goals.begin(), goals.end(), c) != goals.end(); };

  if (!grid.in_bounds(from)) {
    throw Error(ErrorCode::Unreachable, cell_text(from), "start cell lies outside the grid");
  }
  if (grid.blocked(from)) throw Error(ErrorCode::Unreachable, cell_text(from), "start cell is blocked");
  if (is_goal(from)) return {};
  if (goals.empty()) {
    throw Error(ErrorCode::Unreachable, cell_text(target), "receptor has no free adjacent cell");
  }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(static_cast<std::size_t>(grid.width()) * grid.depth(), kNone);
  const std::size_t start = grid.flat(from);
  parent[start] = start;
  std::deque<Cell> queue{from};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (is_goal(c)) {
      std::vector<Cell> path;
      for (std::size_t at = grid.flat(c); at != start; at = parent[at]) {
        path.push_back(Cell{static_cast<int>(at % grid.width()), static_cast<int>(at / grid.width())});
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const Cell& s : kSteps) {
      const Cell n{c.x + s.x, c.y + s.y};
      if (!grid.in_bounds(n) || grid.blocked(n)) continue;
      const std::size_t fn = grid.flat(n);
      if (parent[fn] != kNone) continue;
      parent[fn] = grid.flat(c);
      queue.push_back(n);
    }
  }
  throw Error(ErrorCode::Unreachable, cell_text(target),
              "no free cell next to the receptor can be reached from " + cell_text(from));
}

Seconds travel_time(std::size_t path_length, const AgentType& type) {
  if (path_length == 0) return 0.0;
  return static_cast<double>(path_length) / type.speed;
}

Seconds travel_time(const std::vector<Cell>& path, const AgentType& type) {
  return travel_time(path.size(), type);
}

Seconds handling_time(HandlingKind kind, const AgentType& type, const Receptor& receptor) {
  const Seconds base = kind == HandlingKind::load ? type.base_load_time : type.base_unload_time;
  return base + static_cast<double>(receptor.coord.z) * type.elevation_penalty_per_level;
}

void record_traversal(NavGrid& grid, const std::vector<Cell>& path, Seconds depart, double speed,
                      std::string_view agent_id) {
  grid.record(path, depart, speed, agent_id);
}

}  // namespace voxsim
