#pragma once

// Parameter sweep over agent counts per type.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voxsim/engine.hpp"

namespace voxsim {

struct SweepAxis {
  std::string agent_type;  // exact agent type ID
  std::vector<int> counts;
};

struct SweepConfig {
  std::vector<SweepAxis> axes;
  // Receptor whose first free neighbour receives added agents. Without one,
  // added agents start where the first agent of their type starts.
  std::optional<std::string> spawn_receptor;
  unsigned workers = 1;
  RunConfig run;
};

struct SweepRow {
  std::vector<int> counts;  // one per axis
  std::string status;       // run outcome, or "error:<Code>"
  Seconds makespan = 0.0;
  double throughput_per_hour = 0.0;
  double mean_utilization = 0.0;
  double max_utilization = 0.0;
};

// "1..4" or "1,2,5". Throws InvalidValue.
std::vector<int> parse_count_range(std::string_view text);

// Copy of `model` holding exactly `count` agents of `agent_type`. Existing
// agents are kept in order up to `count`; extras get IDs "<type>#<k>".
SimulationModel with_agent_count(const SimulationModel& model, const std::string& agent_type, int count,
                                 const std::optional<std::string>& spawn_receptor);

// Cartesian product of the axes, first axis slowest. Rows come back in axis
// order whatever the worker count.
std::vector<SweepRow> sweep(const SimulationModel& model, const SweepConfig& config);

std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRow>& rows);

}  // namespace voxsim
