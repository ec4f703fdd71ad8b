#include "doctest.h"
#include "scenarios.hpp"
#include "voxsim/sweep.hpp"

using namespace voxsim;

TEST_CASE("count ranges and lists") {
  CHECK(parse_count_range("1..4") == std::vector<int>{1, 2, 3, 4});
  CHECK(parse_count_range("2,5,3") == std::vector<int>{2, 5, 3});
  CHECK(parse_count_range("0") == std::vector<int>{0});
  CHECK(parse_count_range("3..1").empty());
  CHECK_THROWS_AS(parse_count_range("a..b"), Error);
  CHECK_THROWS_AS(parse_count_range("1,,2"), Error);
  CHECK_THROWS_AS(parse_count_range("-1"), Error);
}

TEST_CASE("agent counts shrink in model order and grow with fresh IDs") {
  const SimulationModel m = oracle::scenario_model("m3");
  const auto one = with_agent_count(m, "AGV", 1, std::nullopt);
  REQUIRE(one.agents.size() == 1);
  CHECK(one.agents[0].id == "AGV1");
  const auto four = with_agent_count(m, "AGV", 4, std::string("B"));
  REQUIRE(four.agents.size() == 4);
  CHECK(four.agents[2].id == "AGV#1");
  CHECK(four.agents[3].id == "AGV#2");
  // First free neighbour of B at (4,0) in +x, +y, -x, -y order.
  CHECK(four.agents[2].coord == VoxelCoord{5, 0, 0});
  const auto copied = with_agent_count(m, "AGV", 3, std::nullopt);
  CHECK(copied.agents[2].coord == m.agents[0].coord);
  CHECK_THROWS_AS(with_agent_count(m, "Crane", 1, std::nullopt), Error);
  CHECK_THROWS_AS(with_agent_count(m, "AGV", 3, std::string("Nowhere")), Error);
}

TEST_CASE("sweep rows come back in axis order whatever the worker count") {
  const SimulationModel m = oracle::scenario_model("m3");
  SweepConfig cfg;
  cfg.axes.push_back(SweepAxis{"AGV", {0, 1, 2, 3}});
  cfg.workers = 1;
  const auto serial = sweep(m, cfg);
  cfg.workers = 3;
  const auto parallel = sweep(m, cfg);
  REQUIRE(serial.size() == 4);
  CHECK(sweep_csv(cfg, serial) == sweep_csv(cfg, parallel));
  // No agents at all fails validation.
  CHECK(serial[0].status == "error:ModelInvalid");
  CHECK(serial[2].status == "completed");
  CHECK(serial[2].makespan == 14.5);
  CHECK(serial[1].makespan >= serial[2].makespan);
}

TEST_CASE("two axes form a cartesian product, first axis slowest") {
  SimulationModel m = oracle::scenario_model("m1");
  m.parameters.agent_types["AGV"] = AgentType{"AGV", 1.0, 1.0, 1.0, 0.0, 1, {}};
  SweepConfig cfg;
  cfg.axes = {SweepAxis{"Forklift", {1, 2}}, SweepAxis{"AGV", {0, 1, 2}}};
  const auto rows = sweep(m, cfg);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].counts == std::vector<int>{1, 0});
  CHECK(rows[2].counts == std::vector<int>{1, 2});
  CHECK(rows[3].counts == std::vector<int>{2, 0});
  for (const auto& r : rows) CHECK(r.makespan == 20.0);
  const std::string csv = sweep_csv(cfg, rows);
  CHECK(csv.substr(0, csv.find('\n')) == "Forklift,AGV,status,makespan_s,throughput_per_hour,mean_utilization,max_utilization");
  CHECK(csv.find("\n1,0,completed,20,180,1,1\n") != std::string::npos);
}

TEST_CASE("a cell that cannot run reports its error code") {
  const SimulationModel m = oracle::scenario_model("m1");
  SweepConfig cfg;
  cfg.axes = {SweepAxis{"Forklift", {2}}};
  cfg.spawn_receptor = "Nowhere";
  const auto rows = sweep(m, cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "error:UnknownLocation");
}
