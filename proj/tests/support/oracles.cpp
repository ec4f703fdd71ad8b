#include "oracles.hpp"

#include <algorithm>
#include <climits>
#include <queue>
#include <set>
#include <tuple>

namespace oracle {

namespace {

struct Grid {
  int w;
  int d;
  std::vector<char> blocked;

  explicit Grid(const SimulationModel& m) : w(m.parameters.width), d(m.parameters.depth), blocked(w * d, 0) {
    for (const auto& r : m.receptors) blocked[r.coord.y * w + r.coord.x] = 1;
  }
  bool free(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < d && !blocked[y * w + x]; }
};

bool adjacent_to(const SimulationModel& m, Cell c, std::size_t receptor) {
  const auto& r = m.receptors[receptor].coord;
  return std::abs(c.x - r.x) + std::abs(c.y - r.y) == 1;
}

}  // namespace

std::optional<int> path_length(const SimulationModel& model, Cell from, std::size_t receptor) {
  const Grid g(model);
  std::vector<int> dist(g.w * g.d, INT_MAX);
  using Item = std::pair<int, int>;  // (distance, flat cell)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[from.y * g.w + from.x] = 0;
  pq.push({0, from.y * g.w + from.x});
  while (!pq.empty()) {
    auto [dd, at] = pq.top();
    pq.pop();
    if (dd > dist[at]) continue;
    const Cell c{at % g.w, at / g.w};
    if (adjacent_to(model, c, receptor)) return dd;
    const int dx[] = {0, 0, 1, -1};
    const int dy[] = {1, -1, 0, 0};
    for (int k = 0; k < 4; ++k) {
      const int nx = c.x + dx[k];
      const int ny = c.y + dy[k];
      if (!g.free(nx, ny)) continue;
      const int n = ny * g.w + nx;
      if (dd + 1 < dist[n]) {
        dist[n] = dd + 1;
        pq.push({dd + 1, n});
      }
    }
  }
  return std::nullopt;
}

bool path_is_valid(const SimulationModel& model, Cell from, std::size_t receptor, const std::vector<Cell>& path) {
  const Grid g(model);
  Cell at = from;
  for (const Cell& c : path) {
    if (std::abs(c.x - at.x) + std::abs(c.y - at.y) != 1) return false;
    if (!g.free(c.x, c.y)) return false;
    at = c;
  }
  return adjacent_to(model, at, receptor) && g.free(at.x, at.y);
}

std::vector<std::int64_t> heat_map(const std::vector<EventRecord>& log, int width, int depth) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(width) * depth, 0);
  for (const auto& e : log) {
    if (e.kind != voxsim::EventKind::agent_arrival) continue;
    for (const auto& c : e.path) ++out[c.y * width + c.x];
  }
  return out;
}

std::vector<std::int64_t> collision_pairs(const std::vector<EventRecord>& log, const SimulationModel& model) {
  struct Interval {
    int cell;
    double begin;
    double end;
    std::string agent;
  };
  std::map<std::string, double> speed;
  for (const auto& a : model.agents) speed[a.id] = model.parameters.agent_types.at(a.type).speed;
  const int w = model.parameters.width;
  std::vector<Interval> all;
  for (const auto& e : log) {
    if (e.kind != voxsim::EventKind::agent_arrival) continue;
    const double v = speed.at(e.agent);
    for (std::size_t k = 0; k < e.path.size(); ++k) {
      all.push_back(Interval{e.path[k].y * w + e.path[k].x, e.start + static_cast<double>(k) / v,
                             e.start + static_cast<double>(k + 1) / v, e.agent});
    }
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(w) * model.parameters.depth, 0);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const auto& a = all[i];
      const auto& b = all[j];
      if (a.cell != b.cell || a.agent == b.agent) continue;
      if (std::max(a.begin, b.begin) < std::min(a.end, b.end)) ++out[a.cell];
    }
  }
  return out;
}

std::optional<std::string> conservation_violation(const std::vector<EventRecord>& log, const SimulationModel& model) {
  std::map<std::string, Count> expected;
  std::map<std::pair<std::string, std::string>, Count> stock;
  std::map<std::string, std::map<std::string, Count>> carried;  // agent -> item -> count
  for (const auto& l : model.item_locations) {
    expected[l.item_id] += l.count;
    stock[{l.receptor_id, l.item_id}] += l.count;
  }
  for (const auto& e : log) {
    for (const auto& d : e.items) {
      stock[{e.receptor, d.item_id}] += d.delta;
      if (stock[{e.receptor, d.item_id}] < 0) {
        return "negative stock of " + d.item_id + " at " + e.receptor + " after seq " + std::to_string(e.seq);
      }
      switch (e.kind) {
        case voxsim::EventKind::load_complete: carried[e.agent][d.item_id] -= d.delta; break;
        case voxsim::EventKind::unload_complete: carried[e.agent][d.item_id] -= d.delta; break;
        case voxsim::EventKind::assembly_complete: expected[d.item_id] += d.delta; break;
        case voxsim::EventKind::agent_arrival: return "arrival changed stock at seq " + std::to_string(e.seq);
      }
    }
    std::map<std::string, Count> total;
    for (const auto& [key, n] : stock) total[key.second] += n;
    for (const auto& [agent, items] : carried) {
      for (const auto& [item, n] : items) {
        if (n < 0) return "agent " + agent + " carries negative " + item;
        total[item] += n;
      }
    }
    std::set<std::string> items;
    for (const auto& [k, v] : total) items.insert(k);
    for (const auto& [k, v] : expected) items.insert(k);
    for (const auto& item : items) {
      if (total[item] != expected[item]) {
        return "item " + item + " total " + std::to_string(total[item]) + " != " + std::to_string(expected[item]) +
               " after seq " + std::to_string(e.seq);
      }
    }
  }
  return std::nullopt;
}

std::map<RouteKey, Count> completed_routes(const std::vector<EventRecord>& log) {
  // Source of each order is where its load happened.
  std::map<voxsim::OrderId, std::string> source;
  std::map<RouteKey, Count> out;
  for (const auto& e : log) {
    if (e.kind == voxsim::EventKind::load_complete) source[e.order] = e.receptor;
    if (e.kind == voxsim::EventKind::unload_complete) {
      for (const auto& d : e.items) out[{d.item_id, source.at(e.order), e.receptor}] += d.delta;
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, Count>> final_stock(const std::vector<EventRecord>& log,
                                                                const SimulationModel& model) {
  std::map<std::string, std::map<std::string, Count>> out;
  for (const auto& l : model.item_locations) out[l.receptor_id][l.item_id] += l.count;
  for (const auto& e : log) {
    for (const auto& d : e.items) out[e.receptor][d.item_id] += d.delta;
  }
  for (auto it = out.begin(); it != out.end();) {
    std::erase_if(it->second, [](const auto& kv) { return kv.second == 0; });
    it = it->second.empty() ? out.erase(it) : std::next(it);
  }
  return out;
}

}  // namespace oracle
