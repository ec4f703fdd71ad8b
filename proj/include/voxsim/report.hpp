#pragma once

// KPIs computed from a finished run: makespan, throughput, utilization,
// traversal heat map, collision risk and receptor occupancy.

#include <map>
#include <string>
#include <vector>

#include "voxsim/core_model.hpp"
#include "voxsim/engine.hpp"
#include "voxsim/routing.hpp"

namespace voxsim {

struct AgentUtilization {
  std::string agent;
  Seconds busy_time = 0.0;
  double utilization = 0.0;

  friend bool operator==(const AgentUtilization&, const AgentUtilization&) = default;
};

struct IncompleteOrder {
  OrderId id = 0;
  std::string kind;  // "transport" or "assembly"
  std::string status;
  std::string description;

  friend bool operator==(const IncompleteOrder&, const IncompleteOrder&) = default;
};

// Row-major grid of per-cell values, row = y.
struct GridCounts {
  int width = 0;
  int depth = 0;
  std::vector<std::int64_t> values;

  std::int64_t at(Cell c) const { return values[static_cast<std::size_t>(c.y) * width + c.x]; }
  std::int64_t sum() const;

  friend bool operator==(const GridCounts&, const GridCounts&) = default;
};

struct SimulationReport {
  Seconds makespan = 0.0;
  Count completed_outputs = 0;
  double throughput_per_hour = 0.0;
  std::size_t completed_orders = 0;
  std::size_t event_count = 0;
  std::vector<AgentUtilization> utilization;  // model order
  GridCounts heat_map;
  GridCounts collision_risk;
  // Time-weighted mean item count per receptor group; receptors without a
  // group are reported under their own ID.
  std::map<std::string, double> occupancy;
  std::string outcome = "completed";
  std::vector<IncompleteOrder> incomplete_orders;
  std::map<std::string, Inventory> final_inventory;
  std::vector<Diagnostic> diagnostics;

  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

// KPIs that follow from the log, the model and the traversal grid alone.
SimulationReport compute_report(const std::vector<EventRecord>& log, const SimulationModel& model,
                                const NavGrid& grid);

// Full report for a simulation that has stopped, including outcome,
// diagnostics, incomplete orders and final inventory.
SimulationReport compute_report(const Simulation& sim, RunOutcome outcome);

// Collision risk per cell: overlapping pairs of occupancy intervals that
// belong to different agents. Overlap needs positive duration.
GridCounts collision_risk(const NavGrid& grid);

std::string format_report(const SimulationReport& report);
std::string heatmap_csv(const GridCounts& grid);
std::string report_json(const SimulationReport& report);

}  // namespace voxsim
