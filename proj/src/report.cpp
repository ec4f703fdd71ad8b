#include "voxsim/report.hpp"

#include <algorithm>

#include "json.hpp"
#include "voxsim/format.hpp"

namespace voxsim {

std::int64_t GridCounts::sum() const {
  std::int64_t s = 0;
  for (auto v : values) s += v;
  return s;
}

GridCounts collision_risk(const NavGrid& grid) {
  GridCounts out{grid.width(), grid.depth(), std::vector<std::int64_t>(grid.traversal_counts().size(), 0)};
  std::map<std::size_t, std::vector<const OccupancyInterval*>> by_cell;
  for (const auto& iv : grid.occupancy()) by_cell[grid.flat(iv.cell)].push_back(&iv);
  for (auto& [cell, ivs] : by_cell) {
    std::sort(ivs.begin(), ivs.end(), [](auto* a, auto* b) { return a->begin < b->begin; });
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      for (std::size_t j = i + 1; j < ivs.size() && ivs[j]->begin < ivs[i]->end; ++j) {
        if (ivs[j]->agent_id == ivs[i]->agent_id) continue;
        if (std::max(ivs[i]->begin, ivs[j]->begin) < std::min(ivs[i]->end, ivs[j]->end)) ++pairs;
      }
    }
    out.values[cell] = pairs;
  }
  return out;
}

SimulationReport compute_report(const std::vector<EventRecord>& log, const SimulationModel& model,
                                const NavGrid& grid) {
  SimulationReport rep;
  rep.event_count = log.size();
  Count assembled = 0;
  Count delivered = 0;
  bool any_assembly = false;
  std::map<std::string, Seconds> busy;
  for (const auto& e : log) {
    const bool completion = e.kind == EventKind::unload_complete || e.kind == EventKind::assembly_complete;
    if (completion) {
      rep.makespan = std::max(rep.makespan, e.time);
      ++rep.completed_orders;
    }
    for (const auto& d : e.items) {
      if (d.delta <= 0) continue;
      if (e.kind == EventKind::assembly_complete) assembled += d.delta;
      if (e.kind == EventKind::unload_complete) delivered += d.delta;
    }
    any_assembly = any_assembly || e.kind == EventKind::assembly_complete;
    if (!e.agent.empty()) busy[e.agent] += e.time - e.start;
  }
  rep.completed_outputs = any_assembly ? assembled : delivered;
  if (rep.makespan > 0) rep.throughput_per_hour = static_cast<double>(rep.completed_outputs) * 3600.0 / rep.makespan;

  for (const auto& a : model.agents) {
    AgentUtilization u{a.id, 0.0, 0.0};
    if (auto it = busy.find(a.id); it != busy.end()) u.busy_time = it->second;
    if (rep.makespan > 0) u.utilization = u.busy_time / rep.makespan;
    rep.utilization.push_back(u);
  }

  rep.heat_map = GridCounts{grid.width(), grid.depth(), grid.traversal_counts()};
  rep.collision_risk = collision_risk(grid);

  if (rep.makespan > 0) {
    // Piecewise-constant item count per receptor, integrated up to the makespan.
    struct Level {
      Count count = 0;
      Seconds since = 0.0;
      double integral = 0.0;
    };
    std::map<std::string, Level> levels;
    for (const auto& r : model.receptors) levels[r.id];
    for (const auto& loc : model.item_locations) levels[loc.receptor_id].count += loc.count;
    for (const auto& e : log) {
      if (e.items.empty()) continue;
      auto& l = levels[e.receptor];
      const Seconds t = std::min(e.time, rep.makespan);
      l.integral += static_cast<double>(l.count) * (t - l.since);
      l.since = t;
      for (const auto& d : e.items) l.count += d.delta;
    }
    for (const auto& r : model.receptors) {
      auto& l = levels[r.id];
      const double integral = l.integral + static_cast<double>(l.count) * (rep.makespan - l.since);
      if (r.groups.empty()) {
        rep.occupancy[r.id] += integral / rep.makespan;
      } else {
        for (const auto& g : r.groups) rep.occupancy[g] += integral / rep.makespan;
      }
    }
  }
  return rep;
}

SimulationReport compute_report(const Simulation& sim, RunOutcome outcome) {
  const auto& st = sim.state();
  SimulationReport rep = compute_report(st.event_log, sim.model(), st.grid);
  rep.outcome = std::string(to_string(outcome));
  const auto& model = sim.model();
  for (std::size_t r = 0; r < st.inventories.size(); ++r) {
    if (!st.inventories[r].empty()) rep.final_inventory[model.receptors[r].id] = st.inventories[r];
  }
  for (const auto& [id, t] : st.book.transports()) {
    if (t.status == OrderStatus::completed) continue;
    rep.incomplete_orders.push_back(IncompleteOrder{
        id, "transport", std::string(to_string(t.status)),
        t.order.item_id + " x" + std::to_string(t.order.count) + " " + t.order.source + " -> " + t.order.destination});
  }
  for (const auto& [id, a] : st.book.assemblies()) {
    if (a.status == OrderStatus::completed) continue;
    rep.incomplete_orders.push_back(IncompleteOrder{id, "assembly", std::string(to_string(a.status)),
                                                    a.order.output.item_id + " x" +
                                                        std::to_string(a.order.output.count) + " at " +
                                                        model.receptors[a.place].id});
  }
  std::sort(rep.incomplete_orders.begin(), rep.incomplete_orders.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  rep.diagnostics = st.diagnostics;
  return rep;
}

std::string format_report(const SimulationReport& r) {
  std::string out;
  out += "outcome: " + r.outcome + "\n";
  out += "makespan_s: " + format_number(r.makespan) + "\n";
  out += "completed_orders: " + std::to_string(r.completed_orders) + "\n";
  out += "completed_outputs: " + std::to_string(r.completed_outputs) + "\n";
  out += "throughput_per_hour: " + format_number(r.throughput_per_hour) + "\n";
  out += "events: " + std::to_string(r.event_count) + "\n";
  out += "\n[utilization]\n";
  for (const auto& u : r.utilization) {
    out += u.agent + " busy_s=" + format_number(u.busy_time) + " utilization=" + format_number(u.utilization) + "\n";
  }
  out += "\n[occupancy]\n";
  for (const auto& [group, v] : r.occupancy) out += group + " mean_items=" + format_number(v) + "\n";
  out += "\n[traffic]\n";
  out += "traversals: " + std::to_string(r.heat_map.sum()) + "\n";
  out += "collision_risk_pairs: " + std::to_string(r.collision_risk.sum()) + "\n";
  out += "\n[final_inventory]\n";
  for (const auto& [rid, inv] : r.final_inventory) {
    out += rid;
    for (const auto& [item, n] : inv.items()) out += " " + item + ":" + std::to_string(n);
    out += "\n";
  }
  out += "\n[incomplete_orders]\n";
  for (const auto& o : r.incomplete_orders) {
    out += std::to_string(o.id) + " " + o.kind + " " + o.status + " " + o.description + "\n";
  }
  out += "\n[diagnostics]\n";
  for (const auto& d : r.diagnostics) out += format_diagnostic(d) + "\n";
  return out;
}

std::string heatmap_csv(const GridCounts& grid) {
  std::string out;
  for (int y = 0; y < grid.depth; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (x) out += ',';
      out += std::to_string(grid.at(Cell{x, y}));
    }
    out += '\n';
  }
  return out;
}

std::string report_json(const SimulationReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["outcome"] = r.outcome;
  j["makespan_s"] = r.makespan;
  j["completed_orders"] = r.completed_orders;
  j["completed_outputs"] = r.completed_outputs;
  j["throughput_per_hour"] = r.throughput_per_hour;
  j["events"] = r.event_count;
  j["utilization"] = ordered_json::array();
  for (const auto& u : r.utilization) {
    j["utilization"].push_back({{"agent", u.agent}, {"busy_s", u.busy_time}, {"utilization", u.utilization}});
  }
  j["occupancy"] = ordered_json::object();
  for (const auto& [g, v] : r.occupancy) j["occupancy"][g] = v;
  auto grid = [](const GridCounts& g) {
    ordered_json rows = ordered_json::array();
    for (int y = 0; y < g.depth; ++y) {
      ordered_json row = ordered_json::array();
      for (int x = 0; x < g.width; ++x) row.push_back(g.at(Cell{x, y}));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["heat_map"] = grid(r.heat_map);
  j["collision_risk"] = grid(r.collision_risk);
  j["final_inventory"] = ordered_json::object();
  for (const auto& [rid, inv] : r.final_inventory) {
    for (const auto& [item, n] : inv.items()) j["final_inventory"][rid][item] = n;
  }
  j["incomplete_orders"] = ordered_json::array();
  for (const auto& o : r.incomplete_orders) {
    j["incomplete_orders"].push_back(
        {{"id", o.id}, {"kind", o.kind}, {"status", o.status}, {"description", o.description}});
  }
  j["diagnostics"] = ordered_json::array();
  for (const auto& d : r.diagnostics) j["diagnostics"].push_back(format_diagnostic(d));
  return j.dump(2);
}

}  // namespace voxsim
