#include "doctest.h"
#include "voxsim/order_book.hpp"

using namespace voxsim;

namespace {

struct World {
  SimulationModel model;
  std::vector<Inventory> inventories;
  std::map<std::string, Count> in_transit;

  World() {
    model.parameters.width = 10;
    model.parameters.depth = 4;
    model.parameters.agent_types["Forklift"] = AgentType{"Forklift", 1.0, 1.0, 1.0, 0.0, 1, {}};
    model.receptors = {{"ProcessB", {8, 1, 0}, {"AssemblyST"}},
                       {"R3", {1, 1, 0}, {"WarehouseArea1"}},
                       {"Rack1", {4, 1, 0}, {}}};
    model.agents = {{"F1", "Forklift", {0, 0, 0}, {}}};
    inventories.resize(model.receptors.size());
  }
  std::size_t at(const std::string& id) const { return *ModelIndex(model).receptor_index(id); }
  GenerationResult generate(const OrderBook& book) const {
    const ModelIndex index(model);
    return generate_self_orders(GenerationView{index, inventories, in_transit}, book);
  }
};

AssemblyWorkOrder product_a() {
  AssemblyWorkOrder a;
  a.inputs = {{"Sub-ComponentA", 1}, {"partC", 3}};
  a.output = {"ProductA", 3};
  a.place = "ProcessB";
  return a;
}

// Adds the generated orders to the book the way the engine does.
void apply(OrderBook& book, const GenerationResult& r, Seconds t = 0.0) {
  for (const auto& g : r.orders) book.log_generation(t, book.add_transport(g.order, g.source, g.destination), g.rule);
}

std::vector<std::tuple<std::string, Count, std::string, std::string>> summary(const GenerationResult& r) {
  std::vector<std::tuple<std::string, Count, std::string, std::string>> out;
  for (const auto& g : r.orders) out.emplace_back(g.order.item_id, g.order.count, g.order.source, g.order.destination);
  return out;
}

}  // namespace

TEST_CASE("claim moves a pending order to active") {
  OrderBook book;
  const OrderId id = book.add_transport({"A", 2, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1);
  CHECK(book.status(id) == OrderStatus::pending);
  CHECK(book.pending_transports().count(id));
  book.claim(id);
  CHECK(book.status(id) == OrderStatus::active);
  CHECK(book.active().count(id));
  CHECK(book.pending_transports().empty());
}

TEST_CASE("claiming an active order is an illegal transition") {
  OrderBook book;
  const OrderId id = book.add_transport({"A", 1, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1);
  book.claim(id);
  try {
    book.claim(id);
    FAIL("expected IllegalTransition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllegalTransition);
  }
  book.complete(id, 1.0);
  CHECK_THROWS_AS(book.complete(id, 2.0), Error);
  CHECK_THROWS_AS(book.claim(id), Error);
}

TEST_CASE("completing a pending order or an unbound claim is illegal") {
  OrderBook book;
  const OrderId bound = book.add_transport({"A", 1, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1);
  CHECK_THROWS_AS(book.complete(bound, 0.0), Error);
  const OrderId loose = book.add_transport({"A", 1, "G", "R2", "F", {}, {}, OrderOrigin::user});
  CHECK_THROWS_AS(book.claim(loose), Error);
  CHECK_THROWS_AS(book.status(999), Error);
}

TEST_CASE("equal completion times keep ascending order IDs") {
  OrderBook book;
  const OrderId a = book.add_transport({"A", 1, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1);
  const OrderId b = book.add_transport({"B", 1, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1);
  book.claim(a);
  book.claim(b);
  book.complete(b, 40.0);
  book.complete(a, 40.0);
  REQUIRE(book.completed().size() == 2);
  CHECK(book.completed()[0] == Completion{a, 40.0});
  CHECK(book.completed()[1] == Completion{b, 40.0});
  const OrderId c = book.add_transport({"C", 1, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1);
  book.claim(c);
  CHECK_THROWS_AS(book.complete(c, 39.0), Error);
}

TEST_CASE("inbound and outbound follow the order life cycle") {
  OrderBook book;
  const OrderId id = book.add_transport({"A", 3, "R1", "R2", "F", {}, {}, OrderOrigin::self_generated}, 0, 1);
  CHECK(book.inbound(1, "A") == 3);
  CHECK(book.inbound_self_generated(1, "A") == 3);
  CHECK(book.inbound_total(1) == 3);
  CHECK(book.outbound(0, "A") == 3);
  CHECK(book.claimed_outbound(0, "A") == 0);
  book.claim(id);
  CHECK(book.claimed_outbound(0, "A") == 3);
  book.mark_loaded(id);
  CHECK(book.outbound(0, "A") == 0);
  CHECK(book.claimed_outbound(0, "A") == 0);
  CHECK(book.inbound(1, "A") == 3);
  book.complete(id, 5.0);
  CHECK(book.inbound(1, "A") == 0);
  CHECK(book.inbound_total(1) == 0);
  CHECK_FALSE(book.has_open_orders());
}

TEST_CASE("every order sits in exactly one state set") {
  OrderBook book;
  std::vector<OrderId> ids;
  for (int i = 0; i < 6; ++i) ids.push_back(book.add_transport({"A", 1, "R1", "R2", "F", {}, {}, OrderOrigin::user}, 0, 1));
  ids.push_back(book.add_assembly(product_a(), 0));
  book.claim(ids[1]);
  book.claim(ids[2]);
  book.complete(ids[2], 1.0);
  book.claim(ids[6]);
  for (OrderId id : ids) {
    const int in_pending = book.pending_transports().count(id) + book.pending_assemblies().count(id);
    const int in_active = static_cast<int>(book.active().count(id));
    int in_completed = 0;
    for (const auto& c : book.completed()) in_completed += c.id == id;
    CHECK(in_pending + in_active + in_completed == 1);
  }
}

TEST_CASE("material flow rule moves uncovered stock to the flow destination") {
  World w;
  w.model.material_flows = {{"WarehouseArea1", "AssemblyST", {"Forklift"}}};
  w.inventories[w.at("R3")].add({"ItemA", 5});
  OrderBook book;
  const auto r = w.generate(book);
  CHECK(summary(r) == std::vector<std::tuple<std::string, Count, std::string, std::string>>{
                          {"ItemA", 5, "R3", "ProcessB"}});
  REQUIRE(r.orders.size() == 1);
  CHECK(r.orders[0].order.origin == OrderOrigin::self_generated);
  CHECK(r.orders[0].order.agent_type == "Forklift");
  CHECK(r.orders[0].rule == GenerationRule::material_flow);
}

TEST_CASE("assembly rule orders exactly the deficit") {
  World w;
  w.inventories[w.at("Rack1")].add({"partC", 20});
  w.inventories[w.at("Rack1")].add({"Sub-ComponentA", 3});
  OrderBook book;
  book.add_assembly(product_a(), w.at("ProcessB"));
  const auto r = w.generate(book);
  // need = per-unit x output count; present 0; inbound 0.
  CHECK(summary(r) == std::vector<std::tuple<std::string, Count, std::string, std::string>>{
                          {"Sub-ComponentA", 3, "Rack1", "ProcessB"}, {"partC", 9, "Rack1", "ProcessB"}});
  for (const auto& g : r.orders) CHECK(g.rule == GenerationRule::assembly);
}

TEST_CASE("assembly rule counts present stock and inbound orders") {
  World w;
  w.inventories[w.at("Rack1")].add({"partC", 20});
  w.inventories[w.at("ProcessB")].add({"partC", 2});
  OrderBook book;
  AssemblyWorkOrder a = product_a();
  a.inputs = {{"partC", 3}};
  book.add_assembly(a, w.at("ProcessB"));
  book.add_transport({"partC", 4, "Rack1", "ProcessB", "Forklift", {}, {}, OrderOrigin::user}, w.at("Rack1"),
                     w.at("ProcessB"));
  const auto r = w.generate(book);
  // 9 needed, 2 present, 4 inbound.
  CHECK(summary(r) == std::vector<std::tuple<std::string, Count, std::string, std::string>>{
                          {"partC", 3, "Rack1", "ProcessB"}});
}

TEST_CASE("a deficit spread over sources takes the largest spare stock first") {
  World w;
  w.inventories[w.at("Rack1")].add({"partC", 4});
  w.inventories[w.at("R3")].add({"partC", 7});
  OrderBook book;
  AssemblyWorkOrder a = product_a();
  a.inputs = {{"partC", 3}};
  book.add_assembly(a, w.at("ProcessB"));
  const auto r = w.generate(book);
  CHECK(summary(r) == std::vector<std::tuple<std::string, Count, std::string, std::string>>{
                          {"partC", 7, "R3", "ProcessB"}, {"partC", 2, "Rack1", "ProcessB"}});
}

TEST_CASE("generation is idempotent once its output is in the book") {
  World w;
  w.model.material_flows = {{"WarehouseArea1", "AssemblyST", {"Forklift"}}};
  w.inventories[w.at("R3")].add({"ItemA", 5});
  w.inventories[w.at("Rack1")].add({"partC", 20});
  w.inventories[w.at("Rack1")].add({"Sub-ComponentA", 3});
  OrderBook book;
  book.add_assembly(product_a(), w.at("ProcessB"));
  const auto first = w.generate(book);
  CHECK(first.orders.size() == 3);
  apply(book, first);
  CHECK(w.generate(book).orders.empty());
  CHECK(book.generation_log().size() == 3);
  for (const auto& g : book.generation_log()) CHECK(g.order.origin == OrderOrigin::self_generated);
}

TEST_CASE("generation is a pure function of world and book") {
  World w;
  w.model.material_flows = {{"WarehouseArea1", "AssemblyST", {"Forklift"}}};
  w.inventories[w.at("R3")].add({"ItemA", 5});
  w.inventories[w.at("Rack1")].add({"partC", 20});
  OrderBook book;
  book.add_assembly(product_a(), w.at("ProcessB"));
  CHECK(summary(w.generate(book)) == summary(w.generate(book)));
}

TEST_CASE("an input that exists nowhere is unsourceable") {
  World w;
  OrderBook book;
  book.add_assembly(product_a(), w.at("ProcessB"));
  const auto r = w.generate(book);
  CHECK(r.orders.empty());
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].code == ErrorCode::UnsourceableItem);
}

TEST_CASE("items in transit are not unsourceable") {
  World w;
  w.in_transit["partC"] = 9;
  w.in_transit["Sub-ComponentA"] = 3;
  OrderBook book;
  book.add_assembly(product_a(), w.at("ProcessB"));
  CHECK(w.generate(book).diagnostics.empty());
}

TEST_CASE("generation log csv lists one row per generated order") {
  World w;
  w.inventories[w.at("Rack1")].add({"partC", 20});
  w.inventories[w.at("Rack1")].add({"Sub-ComponentA", 3});
  OrderBook book;
  book.add_assembly(product_a(), w.at("ProcessB"));
  apply(book, w.generate(book), 2.5);
  CHECK(generation_log_csv(book) ==
        "time,item,count,source,destination,rule\n"
        "2.5,Sub-ComponentA,3,Rack1,ProcessB,assembly\n"
        "2.5,partC,9,Rack1,ProcessB,assembly\n");
}
