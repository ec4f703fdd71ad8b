#include "voxsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <set>
#include <thread>

#include "voxsim/format.hpp"
#include "voxsim/report.hpp"

namespace voxsim {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || v < 0) {
    throw Error(ErrorCode::InvalidValue, "counts", "'" + std::string(whole) + "' is not a count list or a..b range");
  }
  return v;
}

}  // namespace

std::vector<int> parse_count_range(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) return out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const int lo = parse_int(text.substr(0, dots), text);
    const int hi = parse_int(text.substr(dots + 2), text);
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_int(text.substr(pos, comma - pos), text));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

SimulationModel with_agent_count(const SimulationModel& model, const std::string& agent_type, int count,
                                 const std::optional<std::string>& spawn_receptor) {
  if (!model.parameters.agent_types.count(agent_type)) {
    throw Error(ErrorCode::UnknownAgentType, "sweep", "no agent type '" + agent_type + "'");
  }
  SimulationModel out = model;
  out.agents.clear();
  int kept = 0;
  std::optional<VoxelCoord> first_of_type;
  for (const auto& a : model.agents) {
    if (a.type != agent_type) {
      out.agents.push_back(a);
      continue;
    }
    if (!first_of_type) first_of_type = a.coord;
    if (kept < count) {
      out.agents.push_back(a);
      ++kept;
    }
  }
  if (kept == count) return out;

  VoxelCoord spawn;
  if (spawn_receptor) {
    const ModelIndex index(model);
    auto r = index.receptor_index(*spawn_receptor);
    if (!r) throw Error(ErrorCode::UnknownLocation, "sweep", "no receptor '" + *spawn_receptor + "'");
    const NavGrid grid(model.parameters, model.receptors);
    const auto cells = grid.access_cells(footprint(model.receptors[*r].coord));
    if (cells.empty()) {
      throw Error(ErrorCode::Unreachable, "receptor " + *spawn_receptor, "no free cell to spawn agents on");
    }
    spawn = VoxelCoord{cells.front().x, cells.front().y, 0};
  } else if (first_of_type) {
    spawn = *first_of_type;
  } else if (!model.agents.empty()) {
    spawn = model.agents.front().coord;
  } else {
    throw Error(ErrorCode::InvalidValue, "sweep", "no spawn receptor and no agent to copy a position from");
  }

  std::set<std::string> ids;
  for (const auto& a : out.agents) ids.insert(a.id);
  for (int k = 1; kept < count; ++k) {
    std::string id = agent_type + "#" + std::to_string(k);
    if (ids.count(id)) continue;
    out.agents.push_back(Agent{id, agent_type, spawn, {}});
    ids.insert(id);
    ++kept;
  }
  return out;
}

std::vector<SweepRow> sweep(const SimulationModel& model, const SweepConfig& config) {
  std::vector<std::vector<int>> cells{{}};
  for (const auto& axis : config.axes) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : cells) {
      for (int c : axis.counts) {
        auto row = prefix;
        row.push_back(c);
        next.push_back(std::move(row));
      }
    }
    cells = std::move(next);
  }
  if (config.axes.empty()) cells.clear();

  std::vector<SweepRow> rows(cells.size());
  auto run_cell = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.counts = cells[i];
    try {
      SimulationModel m = model;
      for (std::size_t a = 0; a < config.axes.size(); ++a) {
        m = with_agent_count(m, config.axes[a].agent_type, cells[i][a], config.spawn_receptor);
      }
      const RunResult r = run(m, config.run);
      row.status = std::string(to_string(r.outcome));
      row.makespan = r.report->makespan;
      row.throughput_per_hour = r.report->throughput_per_hour;
      double sum = 0.0;
      for (const auto& u : r.report->utilization) {
        sum += u.utilization;
        row.max_utilization = std::max(row.max_utilization, u.utilization);
      }
      if (!r.report->utilization.empty()) row.mean_utilization = sum / r.report->utilization.size();
    } catch (const Error& e) {
      row.status = "error:" + std::string(to_string(e.code()));
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(cells.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::string out;
  for (const auto& axis : config.axes) out += axis.agent_type + ",";
  out += "status,makespan_s,throughput_per_hour,mean_utilization,max_utilization\n";
  for (const auto& r : rows) {
    for (int c : r.counts) out += std::to_string(c) + ",";
    out += r.status + "," + format_number(r.makespan) + "," + format_number(r.throughput_per_hour) + "," +
           format_number(r.mean_utilization) + "," + format_number(r.max_utilization) + "\n";
  }
  return out;
}

}  // namespace voxsim
