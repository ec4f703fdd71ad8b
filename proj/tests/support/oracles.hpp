#pragma once

// Independent recomputations used as test oracles. None of these call into
// the routing or reporting code they check.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voxsim/core_model.hpp"
#include "voxsim/engine.hpp"

namespace oracle {

using voxsim::Cell;
using voxsim::Count;
using voxsim::EventRecord;
using voxsim::SimulationModel;

// Dijkstra over the 4-connected grid with receptor footprints blocked.
// Length of the shortest path from `from` to any free cell adjacent to the
// receptor, 0 when `from` already is one, nullopt when none is reachable.
std::optional<int> path_length(const SimulationModel& model, Cell from, std::size_t receptor);

// True when `path` steps 4-connected over free cells from `from` and ends
// next to the receptor (or is empty and `from` is already adjacent).
bool path_is_valid(const SimulationModel& model, Cell from, std::size_t receptor, const std::vector<Cell>& path);

// Traversals per cell, recounted from arrival events. Row-major, row = y.
std::vector<std::int64_t> heat_map(const std::vector<EventRecord>& log, int width, int depth);

// Overlapping interval pairs of distinct agents per cell, by comparing every
// pair of intervals rebuilt from arrival paths and agent speeds.
std::vector<std::int64_t> collision_pairs(const std::vector<EventRecord>& log, const SimulationModel& model);

// Replays the log keeping stock and carried items apart. Returns a message
// for the first event after which some item total differs from the initial
// total (adjusted by assembly consumption and output), or nullopt.
std::optional<std::string> conservation_violation(const std::vector<EventRecord>& log, const SimulationModel& model);

// Completed transports aggregated by (item, source, destination).
using RouteKey = std::tuple<std::string, std::string, std::string>;
std::map<RouteKey, Count> completed_routes(const std::vector<EventRecord>& log);

// Stock per receptor after replaying the log on top of the item locations.
std::map<std::string, std::map<std::string, Count>> final_stock(const std::vector<EventRecord>& log,
                                                                const SimulationModel& model);

}  // namespace oracle
