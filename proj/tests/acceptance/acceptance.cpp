// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "random_model.hpp"
#include "scenarios.hpp"
#include "voxsim/engine.hpp"
#include "voxsim/format.hpp"
#include "voxsim/ingest.hpp"
#include "voxsim/report.hpp"
#include "voxsim/routing.hpp"
#include "voxsim/sweep.hpp"

using namespace voxsim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
struct Checker {
  Outcome out;
  int failures = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) out.detail += (out.detail.empty() ? "" : "; ") + what;
    out.pass = false;
  }
  Outcome done(const std::string& summary) {
    if (out.pass) out.detail = summary;
    else if (failures > 3) out.detail += "; +" + std::to_string(failures - 3) + " more";
    return out;
  }
};

std::string expected_log(const std::string& name) {
  return read_text_file(oracle::scenario_dir(name) / "expected_events.log");
}

std::string first_diff(const std::string& a, const std::string& b) {
  std::istringstream sa(a), sb(b);
  std::string la, lb;
  for (int line = 1;; ++line) {
    const bool ga = static_cast<bool>(std::getline(sa, la));
    const bool gb = static_cast<bool>(std::getline(sb, lb));
    if (!ga && !gb) return "identical";
    if (!ga || !gb || la != lb) return "line " + std::to_string(line) + ": got '" + la + "' want '" + lb + "'";
  }
}

std::map<std::pair<std::string, std::string>, Count> generated_by_destination(const RunResult& r) {
  std::map<std::pair<std::string, std::string>, Count> out;
  for (const auto& g : r.generation_log) out[{g.order.item_id, g.order.destination}] += g.order.count;
  return out;
}

ModelFiles m2_mode(char mode) {
  ModelFiles f = oracle::scenario_files("m2");
  if (mode == 'a') {
    f.transport_orders.reset();
    f.assembly_orders.reset();
  } else if (mode == 'b') {
    f.transport_orders.reset();
  }
  return f;
}

Outcome micro_oracles() {
  Checker c;
  {
    const RunResult r = run(oracle::scenario_model("m1"));
    const std::string log = format_event_log(r.event_log);
    c.expect(log == expected_log("m1"), "M1 log " + first_diff(log, expected_log("m1")));
    // 4 s to reach R1, 5 s load, 6 s to R2, 5 s unload.
    c.expect(r.report->makespan == 4.0 + 5.0 + 6.0 + 5.0, "M1 makespan " + format_number(r.report->makespan));
    c.expect(r.report->utilization.size() == 1 && r.report->utilization[0].utilization == 1.0, "M1 utilization != 1");
    c.expect(r.outcome == RunOutcome::completed, "M1 not completed");
  }
  {
    const RunResult r = run(oracle::scenario_model(m2_mode('b')));
    const std::string log = format_event_log(r.event_log);
    c.expect(log == expected_log("m2"), "M2 log " + first_diff(log, expected_log("m2")));
    const std::map<std::pair<std::string, std::string>, Count> want{{{"Sub-ComponentA", "ProcessB"}, 3},
                                                                    {{"partC", "ProcessB"}, 9}};
    c.expect(generated_by_destination(r) == want, "M2 generated orders differ");
    const auto stock = oracle::final_stock(r.event_log, oracle::scenario_model(m2_mode('b')));
    c.expect(stock.count("ProcessB") && stock.at("ProcessB") == std::map<std::string, Count>{{"ProductA", 3}},
             "M2 ProcessB final inventory");
    c.expect(r.report->final_inventory.at("ProcessB").items() == std::map<std::string, Count>{{"ProductA", 3}},
             "M2 reported ProcessB inventory");
    c.expect(r.outcome == RunOutcome::completed, "M2 not completed");
  }
  {
    const SimulationModel m = oracle::scenario_model("m3");
    const RunResult r = run(m);
    const std::string log = format_event_log(r.event_log);
    c.expect(log == expected_log("m3"), "M3 log " + first_diff(log, expected_log("m3")));
    const auto stock = oracle::final_stock(r.event_log, m);
    const std::map<std::string, std::map<std::string, Count>> want{{"C", {{"ItemX", 4}, {"ItemY", 2}, {"ItemZ", 1}}}};
    c.expect(stock == want, "M3 items not all at C");
    std::set<std::tuple<std::string, Count, std::string, std::string>> seen;
    std::map<std::pair<std::string, std::string>, Count> per_hop;
    for (const auto& g : r.generation_log) {
      c.expect(seen.insert({g.order.item_id, g.order.count, g.order.source, g.order.destination}).second,
               "M3 duplicate generated order for " + g.order.item_id);
      per_hop[{g.order.item_id, g.order.destination}] += g.order.count;
    }
    const std::map<std::pair<std::string, std::string>, Count> want_hops{
        {{"ItemX", "B"}, 4}, {{"ItemY", "B"}, 2}, {{"ItemX", "C"}, 4}, {{"ItemY", "C"}, 2}, {{"ItemZ", "C"}, 1}};
    c.expect(per_hop == want_hops, "M3 generated quantities differ");
    c.expect(r.outcome == RunOutcome::completed, "M3 not completed");
  }
  return c.done("M1 makespan 20 utilization 1; M2 generated {Sub-ComponentA x3, partC x9}, ProcessB=ProductA:3; "
                "M3 all items at C, 5 distinct generated orders; logs match fixtures");
}

Outcome mode_equivalence() {
  Checker c;
  std::vector<std::map<oracle::RouteKey, Count>> routes;
  for (char mode : {'a', 'b', 'c'}) {
    const RunResult r = run(oracle::scenario_model(m2_mode(mode)));
    c.expect(r.outcome == RunOutcome::completed, std::string("mode ") + mode + " not completed");
    routes.push_back(oracle::completed_routes(r.event_log));
  }
  c.expect(!routes[0].empty(), "no transports completed");
  c.expect(routes[0] == routes[1], "flows-only differs from assembly mode");
  c.expect(routes[1] == routes[2], "assembly mode differs from explicit-orders mode");
  std::string summary;
  for (const auto& [k, n] : routes[0]) {
    summary += (summary.empty() ? "" : ", ") + std::get<0>(k) + " " + std::get<1>(k) + "->" + std::get<2>(k) + " x" +
               std::to_string(n);
  }
  return c.done("3 modes give {" + summary + "}");
}

Outcome determinism() {
  Checker c;
  const SimulationModel m = oracle::scenario_model("railcar");
  std::string first;
  double slowest = 0.0;
  for (int i = 0; i < 5; ++i) {
    RunConfig cfg;
    cfg.seed = 1000 + i;
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run(m, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, secs);
    c.expect(secs < 60.0, "run " + std::to_string(i) + " took " + format_number(secs) + " s");
    const std::string log = format_event_log(r.event_log);
    if (i == 0) first = log;
    c.expect(log == first, "run " + std::to_string(i) + " log differs: " + first_diff(log, first));
  }
  return c.done("5 rail-car runs byte-identical (" + std::to_string(first.size()) + " bytes), slowest " +
                format_number(std::round(slowest * 1000) / 1000) + " s");
}

Outcome conservation() {
  Checker c;
  std::mt19937_64 rng(20240501);
  std::size_t events = 0;
  for (int i = 0; i < 100; ++i) {
    const SimulationModel m = oracle::random_transport_model(rng);
    try {
      const RunResult r = run(m);
      events += r.event_log.size();
      c.expect(r.outcome == RunOutcome::completed, "instance " + std::to_string(i) + " " + std::string(to_string(r.outcome)));
      if (auto v = oracle::conservation_violation(r.event_log, m)) c.expect(false, "instance " + std::to_string(i) + ": " + *v);
    } catch (const Error& e) {
      c.expect(false, "instance " + std::to_string(i) + " threw " + e.what());
    }
  }
  return c.done("100 random instances, " + std::to_string(events) + " events, 0 violations");
}

Outcome routing_oracle() {
  Checker c;
  std::mt19937_64 rng(77);
  int reachable = 0;
  int queries = 0;
  while (queries < 1000) {
    const SimulationModel m = oracle::random_obstacle_grid(rng);
    const NavGrid grid(m.parameters, m.receptors);
    std::vector<Cell> free;
    for (int y = 0; y < grid.depth(); ++y) {
      for (int x = 0; x < grid.width(); ++x) {
        if (!grid.blocked({x, y})) free.push_back({x, y});
      }
    }
    for (int k = 0; k < 10 && queries < 1000; ++k, ++queries) {
      const Cell from = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
      const std::size_t target = std::uniform_int_distribution<std::size_t>(0, m.receptors.size() - 1)(rng);
      const auto want = oracle::path_length(m, from, target);
      std::optional<std::vector<Cell>> got;
      try {
        got = shortest_path(grid, from, m.receptors[target].coord);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unreachable) c.expect(false, std::string("unexpected error ") + e.what());
      }
      const std::string q = "query " + std::to_string(queries);
      if (!want) {
        c.expect(!got, q + " found a path where none exists");
        continue;
      }
      ++reachable;
      if (!got) {
        c.expect(false, q + " reported unreachable, oracle length " + std::to_string(*want));
        continue;
      }
      c.expect(static_cast<int>(got->size()) == *want,
               q + " length " + std::to_string(got->size()) + " != " + std::to_string(*want));
      c.expect(oracle::path_is_valid(m, from, target, *got), q + " path is not a valid walk");
      const int field = grid.distance_field(target)[grid.flat(from)];
      c.expect(field == *want, q + " distance field " + std::to_string(field) + " != " + std::to_string(*want));
    }
  }
  return c.done("1000 queries (" + std::to_string(reachable) + " reachable) match Dijkstra lengths");
}

std::vector<std::string> fixture_names() { return {"m1", "m2", "m3", "railcar"}; }

Outcome round_trip() {
  Checker c;
  for (const auto& name : fixture_names()) {
    const SimulationModel m = oracle::scenario_model(name);
    const ModelFiles text = serialize_model(m);
    const auto again = parse_model(text);
    c.expect(again.ok(), name + " serialized form does not parse");
    if (!again.ok()) continue;
    c.expect(*again.model == m, name + " model changed across round trip");
    c.expect(serialize_model(*again.model) == text, name + " canonical text not stable");
    // Each parser alone, on the canonical text.
    c.expect(parse_layout(text.layout).receptors == m.receptors, name + " layout parser");
    if (text.transport_orders) {
      c.expect(parse_transportation_orders(*text.transport_orders) == m.transport_orders, name + " transport parser");
    }
    if (text.assembly_orders) {
      c.expect(parse_assembly_orders(*text.assembly_orders) == m.assembly_orders, name + " assembly parser");
    }
    if (text.item_locations) {
      c.expect(parse_item_locations(*text.item_locations) == m.item_locations, name + " item location parser");
    }
  }
  return c.done("m1, m2, m3, railcar: parse -> serialize -> parse is the identity");
}

std::string mutate(std::mt19937_64& rng, std::string s) {
  static const std::vector<std::string> tokens{",", "\"", "{", "}", "[", "]", ":", "-1", "0", "1e309", "3.5", "\n",
                                               "\r\n", "null", "true", "\xff", std::string(1, '\0'), "\"\"", "{}",
                                               "[]", "\"parts\"", "\"where\"", "x", "99999999999999999999"};
  auto at = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng); };
  if (std::bernoulli_distribution(0.05)(rng)) {
    std::string junk(at(200), ' ');
    for (auto& ch : junk) ch = static_cast<char>(at(255));
    return junk;
  }
  const int edits = std::uniform_int_distribution<int>(1, 8)(rng);
  for (int e = 0; e < edits; ++e) {
    switch (at(4)) {
      case 0:
        if (!s.empty()) s[at(s.size() - 1)] = static_cast<char>(at(255));
        break;
      case 1: s.insert(at(s.size()), tokens[at(tokens.size() - 1)]); break;
      case 2:
        if (!s.empty()) {
          const std::size_t pos = at(s.size() - 1);
          s.erase(pos, at(16));
        }
        break;
      case 3:
        if (!s.empty()) {
          const std::size_t pos = at(s.size() - 1);
          s.insert(pos, s.substr(pos, at(32)));
        }
        break;
      default: s.resize(at(s.size())); break;
    }
  }
  return s;
}

Outcome fuzz() {
  Checker c;
  std::mt19937_64 rng(4242);
  std::vector<ModelFiles> seeds;
  for (const auto& name : fixture_names()) seeds.push_back(oracle::scenario_files(name));
  const std::vector<std::string> parsers{"layout", "transportation_orders", "assembly_orders", "item_locations"};
  std::map<std::string, int> rejected;
  for (const auto& which : parsers) {
    for (int i = 0; i < 10000; ++i) {
      ModelFiles f = seeds[std::uniform_int_distribution<std::size_t>(0, seeds.size() - 1)(rng)];
      std::string* target = nullptr;
      if (which == "layout") target = &f.layout;
      if (which == "transportation_orders") target = &(f.transport_orders ? *f.transport_orders : f.transport_orders.emplace(""));
      if (which == "assembly_orders") target = &(f.assembly_orders ? *f.assembly_orders : f.assembly_orders.emplace(""));
      if (which == "item_locations") target = &(f.item_locations ? *f.item_locations : f.item_locations.emplace(""));
      *target = mutate(rng, *target);
      try {
        const LoadResult r = parse_model(f);
        if (!r.ok()) {
          c.expect(has_errors(r.diagnostics), which + " input " + std::to_string(i) + " rejected without a diagnostic");
          ++rejected[which];
        }
      } catch (const std::exception& e) {
        c.expect(false, which + " input " + std::to_string(i) + " escaped with " + e.what());
      } catch (...) {
        c.expect(false, which + " input " + std::to_string(i) + " escaped with a non-standard exception");
      }
    }
  }
  std::string summary;
  for (const auto& p : parsers) summary += (summary.empty() ? "" : ", ") + p + " " + std::to_string(rejected[p]);
  return c.done("4 x 10000 mutated inputs, no escapes; rejected with diagnostics: " + summary);
}

Outcome railcar() {
  Checker c;
  const SimulationModel m = oracle::scenario_model("railcar");
  std::map<std::string, int> per_group;
  for (const auto& r : m.receptors) {
    for (const auto& g : r.groups) ++per_group[g];
  }
  c.expect(per_group["UnloadingArea"] == 2, "unloading areas");
  c.expect(per_group["ReceivingArea"] == 2, "receiving areas");
  c.expect(per_group["FloorStorage"] > 0 && per_group["RackStorage"] > 0 && per_group["ASRS"] > 0, "storage types");
  c.expect(per_group["KittingStation"] == 4, "kitting stations");
  for (int k = 1; k <= 4; ++k) c.expect(per_group["Line" + std::to_string(k)] == 7, "line " + std::to_string(k));

  const RunConfig cfg;
  const RunResult r = run(m, cfg);
  c.expect(r.outcome == RunOutcome::completed, "outcome " + std::string(to_string(r.outcome)));
  c.expect(r.report->incomplete_orders.empty(), std::to_string(r.report->incomplete_orders.size()) + " orders open");
  c.expect(r.event_log.size() < cfg.max_events && r.report->makespan < cfg.max_sim_time, "safety cap reached");
  const auto recount = oracle::heat_map(r.event_log, m.parameters.width, m.parameters.depth);
  c.expect(recount == r.report->heat_map.values, "heat map differs from recount");
  if (auto v = oracle::conservation_violation(r.event_log, m)) c.expect(false, *v);

  SweepConfig sc;
  sc.axes.push_back(SweepAxis{"Forklift_TypeB", {1, 2, 3, 4}});
  sc.spawn_receptor = "RA1";
  sc.workers = 4;
  const auto rows = sweep(m, sc);
  // Pinned after the first verified run.
  const std::vector<double> pinned{2644.5, 1638, 1636, 1632};
  std::string spans;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    spans += (i ? ", " : "") + format_number(rows[i].makespan);
    c.expect(rows[i].status == "completed", "sweep row " + std::to_string(i) + " " + rows[i].status);
    if (i > 0) c.expect(rows[i].makespan <= rows[i - 1].makespan, "makespan rises at " + std::to_string(i + 1));
  }
  c.expect(rows.size() == pinned.size(), "sweep row count");
  for (std::size_t i = 0; i < std::min(rows.size(), pinned.size()); ++i) {
    c.expect(rows[i].makespan == pinned[i], "sweep makespan " + format_number(rows[i].makespan) + " != pinned " +
                                                format_number(pinned[i]));
  }
  return c.done("completed " + std::to_string(r.report->completed_orders) + " orders, makespan " +
                format_number(r.report->makespan) + ", heat map recount matches; Forklift_TypeB 1..4 makespans " +
                spans);
}

Outcome collision() {
  Checker c;
  auto check = [&](const SimulationModel& m, const std::string& label) {
    const RunResult r = run(m);
    const auto want = oracle::collision_pairs(r.event_log, m);
    c.expect(want == r.report->collision_risk.values, label + " differs from brute force");
    std::int64_t s = 0;
    for (auto v : want) s += v;
    return s;
  };
  std::int64_t total = 0;
  for (const auto& name : {"m1", "m2", "m3"}) total += check(oracle::scenario_model(name), name);
  std::mt19937_64 rng(31337);
  oracle::RandomModelLimits lim;
  lim.max_width = 16;
  lim.max_depth = 16;
  lim.max_orders = 60;
  for (int i = 0; i < 20; ++i) total += check(oracle::random_transport_model(rng, lim), "random " + std::to_string(i));
  return c.done("M1-M3 and 20 random instances match; " + std::to_string(total) + " overlapping pairs in total");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"micro_scenario_oracles", micro_oracles}, {"mode_equivalence", mode_equivalence},
      {"determinism", determinism},               {"conservation", conservation},
      {"routing_oracle", routing_oracle},         {"parser_round_trip", round_trip},
      {"parser_fuzz", fuzz},                      {"railcar_scenario", railcar},
      {"collision_risk", collision},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
