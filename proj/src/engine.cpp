#include "voxsim/engine.hpp"

#include <algorithm>
#include <limits>

#include "voxsim/format.hpp"
#include "voxsim/ingest.hpp"
#include "voxsim/report.hpp"

namespace voxsim {

std::string_view to_string(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::completed: return "completed";
    case RunOutcome::stalled: return "stalled";
    case RunOutcome::safety_cap: return "safety_cap";
  }
  return "completed";
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diags) {
  std::size_t errors = 0;
  for (const auto& d : diags) errors += d.severity == Severity::error;
  return std::to_string(errors) + " validation error(s)";
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorCode::ModelInvalid, "model", summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::map<std::string, Count> WorldState::in_transit() const {
  std::map<std::string, Count> out;
  for (const auto& a : agents) {
    for (const auto& c : a.carried) out[c.stack.item_id] += c.stack.count;
  }
  return out;
}

std::map<std::string, Count> WorldState::item_totals() const {
  std::map<std::string, Count> out = in_transit();
  for (const auto& inv : inventories) {
    for (const auto& [item, n] : inv.items()) out[item] += n;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

namespace {

std::shared_ptr<const SimulationModel> checked(SimulationModel model) {
  auto diags = validate_model(model);
  if (has_errors(diags)) throw ValidationError(std::move(diags));
  return std::make_shared<const SimulationModel>(std::move(model));
}

Snapshot::AgentView view_of(const AgentState& a) {
  Snapshot::AgentView v{a.id, a.cell, a.status, {}};
  for (const auto& c : a.carried) v.carried.push_back(c.stack);
  return v;
}

}  // namespace

Simulation::Simulation(SimulationModel model, RunConfig config)
    : model_(checked(std::move(model))),
      index_(*model_),
      config_(std::move(config)),
      state_{0.0, {}, {}, {}, NavGrid(model_->parameters, model_->receptors), {}, {}, {}, 0, 0} {
  const auto& m = *model_;
  state_.inventories.resize(m.receptors.size());
  for (const auto& loc : m.item_locations) {
    state_.inventories[*index_.receptor_index(loc.receptor_id)].add(ItemStack{loc.item_id, loc.count});
  }
  for (const auto& a : m.agents) {
    AgentState s;
    s.id = a.id;
    s.cell = footprint(a.coord);
    state_.agents.push_back(std::move(s));
  }
  expected_totals_ = initial_item_totals(m);

  // Singleton source and destination bind immediately; groups wait for dispatch.
  for (const auto& t : m.transport_orders) {
    const auto src = index_.resolve_location(t.source);
    const auto dst = index_.resolve_location(t.destination);
    if (src.size() == 1 && dst.size() == 1) {
      state_.book.add_transport(t, src.front(), dst.front());
    } else {
      state_.book.add_transport(t);
    }
  }
  std::map<std::size_t, std::size_t> placed;
  for (const auto& a : m.assembly_orders) {
    const auto places = index_.resolve_location(a.place);
    std::size_t best = places.front();
    for (std::size_t p : places) {
      if (placed[p] < placed[best]) best = p;
    }
    ++placed[best];
    state_.book.add_assembly(a, best);
  }

  current_.index = 0;
  current_.time = 0.0;
  run_generation();
  dispatch();
  current_.snapshot = snapshot();
  current_.terminal = is_terminal();
  for (std::size_t a : touched_agents_) current_.agent_states.push_back(view_of(state_.agents[a]));
  touched_agents_.clear();
  initial_frame_ = current_;
  if (config_.record_frames) frames_.push_back(current_);
}

Snapshot Simulation::snapshot() const {
  Snapshot s;
  s.time = state_.clock;
  for (std::size_t r = 0; r < state_.inventories.size(); ++r) {
    if (!state_.inventories[r].empty()) s.inventories[model_->receptors[r].id] = state_.inventories[r];
  }
  for (const auto& a : state_.agents) s.agents.push_back(view_of(a));
  return s;
}

Seconds Simulation::advance_clock() {
  if (state_.events.empty()) throw Error(ErrorCode::EmptyEventList, "engine", "advance_clock on an empty event list");
  state_.clock = state_.events.begin()->time;
  return state_.clock;
}

void Simulation::event_function() {
  while (!state_.events.empty() && state_.events.begin()->time == state_.clock) {
    const Event e = *state_.events.begin();
    state_.events.erase(state_.events.begin());
    process_event(e);
    ++state_.processed_events;
    if (config_.check_conservation) check_conservation();
  }
  run_generation();
  dispatch();
}

bool Simulation::is_terminal() const {
  if (config_.time_horizon && state_.clock >= *config_.time_horizon) return true;
  if (config_.terminal_predicate) return config_.terminal_predicate(state_);
  return !state_.book.has_open_orders() && state_.events.empty();
}

FrameDelta Simulation::step() {
  current_ = FrameDelta{};
  current_.index = ++cycles_;
  current_.time = advance_clock();
  event_function();
  for (std::size_t a : touched_agents_) current_.agent_states.push_back(view_of(state_.agents[a]));
  touched_agents_.clear();
  current_.terminal = is_terminal();
  if (config_.snapshot_interval > 0 && current_.index % config_.snapshot_interval == 0) current_.snapshot = snapshot();
  if (config_.record_frames) frames_.push_back(current_);
  return current_;
}

RunOutcome Simulation::run_to_end(const std::function<void(const FrameDelta&)>& on_frame) {
  while (!is_terminal()) {
    if (state_.events.empty()) {
      for (auto& d : open_order_diagnostics()) add_diagnostic(std::move(d));
      return RunOutcome::stalled;
    }
    if (state_.processed_events >= config_.max_events || state_.events.begin()->time > config_.max_sim_time) {
      add_diagnostic(Diagnostic{Severity::error, ErrorCode::SafetyCapReached, "engine",
                                "stopped after " + std::to_string(state_.processed_events) + " events at t=" +
                                    format_number(state_.clock) + " with orders still open"});
      return RunOutcome::safety_cap;
    }
    auto frame = step();
    if (on_frame) on_frame(frame);
  }
  // A custom predicate may stop the run with work outstanding; say so.
  for (auto& d : open_order_diagnostics()) {
    d.severity = Severity::warning;
    add_diagnostic(std::move(d));
  }
  return RunOutcome::completed;
}

void Simulation::add_diagnostic(Diagnostic d) {
  if (std::find(state_.diagnostics.begin(), state_.diagnostics.end(), d) == state_.diagnostics.end()) {
    state_.diagnostics.push_back(std::move(d));
  }
}

// ---- event processing ---------------------------------------------------

void Simulation::push_event(Event e) {
  e.seq = state_.next_seq++;
  state_.events.insert(std::move(e));
}

void Simulation::note_agent(std::size_t agent) { touched_agents_.insert(agent); }

void Simulation::note_inventory(std::size_t receptor, const std::string& item, Count delta) {
  current_.inventory_changes.push_back(InventoryChange{model_->receptors[receptor].id, item, delta});
}

void Simulation::log_event(const Event& e, std::vector<ItemDelta> items) {
  EventRecord rec;
  rec.time = e.time;
  rec.seq = e.seq;
  rec.kind = e.kind;
  if (e.agent) rec.agent = state_.agents[*e.agent].id;
  rec.order = e.order;
  rec.receptor = model_->receptors[e.receptor].id;
  rec.start = e.start;
  rec.items = std::move(items);
  rec.path = e.path;
  current_.events.push_back(rec);
  state_.event_log.push_back(std::move(rec));
}

void Simulation::process_event(const Event& e) {
  auto& book = state_.book;
  auto& inv = state_.inventories[e.receptor];
  switch (e.kind) {
    case EventKind::agent_arrival: {
      auto& agent = state_.agents[*e.agent];
      if (!e.path.empty()) agent.cell = e.path.back();
      log_event(e, {});
      note_agent(*e.agent);
      const TripStop& stop = agent.trip->stops[agent.trip->next];
      const AgentType& type = index_.type_of(*e.agent);
      const Receptor& rec = model_->receptors[e.receptor];
      Event next{0.0, 0, EventKind::load_complete, e.agent, stop.order, e.receptor, state_.clock, {}};
      switch (stop.kind) {
        case TripStop::Kind::load:
          agent.status = AgentStatus::loading;
          next.time = state_.clock + handling_time(HandlingKind::load, type, rec);
          break;
        case TripStop::Kind::unload:
          agent.status = AgentStatus::unloading;
          next.kind = EventKind::unload_complete;
          next.time = state_.clock + handling_time(HandlingKind::unload, type, rec);
          break;
        case TripStop::Kind::assemble: {
          const auto& a = book.assembly(stop.order).order;
          agent.status = AgentStatus::assembling;
          next.kind = EventKind::assembly_complete;
          next.time = state_.clock + a.processing_time.value_or(model_->parameters.default_processing_time);
          break;
        }
      }
      push_event(std::move(next));
      break;
    }
    case EventKind::load_complete: {
      const auto& t = book.transport(e.order);
      auto& agent = state_.agents[*e.agent];
      inv.remove(t.order.item_id, t.order.count);
      agent.carried.push_back(CarriedStack{ItemStack{t.order.item_id, t.order.count}, e.order, *t.destination});
      book.mark_loaded(e.order);
      note_inventory(e.receptor, t.order.item_id, -t.order.count);
      note_agent(*e.agent);
      log_event(e, {ItemDelta{t.order.item_id, -t.order.count}});
      advance_trip(*e.agent);
      break;
    }
    case EventKind::unload_complete: {
      const auto& t = book.transport(e.order);
      if (!e.agent) {
        // Source and destination coincide: nothing moves.
        book.complete(e.order, state_.clock);
        current_.completed_orders.push_back(e.order);
        log_event(e, {});
        break;
      }
      auto& agent = state_.agents[*e.agent];
      auto it = std::find_if(agent.carried.begin(), agent.carried.end(),
                             [&](const CarriedStack& c) { return c.order == e.order; });
      inv.add(it->stack);
      agent.carried.erase(it);
      book.complete(e.order, state_.clock);
      current_.completed_orders.push_back(e.order);
      note_inventory(e.receptor, t.order.item_id, t.order.count);
      note_agent(*e.agent);
      log_event(e, {ItemDelta{t.order.item_id, t.order.count}});
      advance_trip(*e.agent);
      break;
    }
    case EventKind::assembly_complete: {
      const auto& a = book.assembly(e.order);
      std::vector<ItemDelta> deltas;
      for (const auto& in : a.order.inputs) {
        const Count n = a.order.total_need(in);
        inv.remove(in.item_id, n);
        auto key = std::make_pair(a.place, in.item_id);
        if ((assembly_reserved_[key] -= n) == 0) assembly_reserved_.erase(key);
        expected_totals_[in.item_id] -= n;
        if (expected_totals_[in.item_id] == 0) expected_totals_.erase(in.item_id);
        note_inventory(e.receptor, in.item_id, -n);
        deltas.push_back(ItemDelta{in.item_id, -n});
      }
      inv.add(a.order.output);
      expected_totals_[a.order.output.item_id] += a.order.output.count;
      note_inventory(e.receptor, a.order.output.item_id, a.order.output.count);
      deltas.push_back(ItemDelta{a.order.output.item_id, a.order.output.count});
      book.complete(e.order, state_.clock);
      current_.completed_orders.push_back(e.order);
      log_event(e, std::move(deltas));
      if (e.agent) {
        note_agent(*e.agent);
        advance_trip(*e.agent);
      }
      break;
    }
  }
}

void Simulation::check_conservation() const {
  const auto actual = state_.item_totals();
  if (actual == expected_totals_) return;
  std::string detail;
  std::set<std::string> items;
  for (const auto& [k, v] : actual) items.insert(k);
  for (const auto& [k, v] : expected_totals_) items.insert(k);
  for (const auto& item : items) {
    const Count a = actual.count(item) ? actual.at(item) : 0;
    const Count x = expected_totals_.count(item) ? expected_totals_.at(item) : 0;
    if (a != x) detail += " " + item + ": expected " + std::to_string(x) + ", found " + std::to_string(a) + ";";
  }
  throw Error(ErrorCode::ConservationViolated, "t=" + format_number(state_.clock), "item totals drifted:" + detail);
}

// ---- trips --------------------------------------------------------------

void Simulation::start_trip(std::size_t agent, Trip trip) {
  auto& a = state_.agents[agent];
  a.trip = std::move(trip);
  a.busy_since = state_.clock;
  begin_leg(agent);
}

void Simulation::begin_leg(std::size_t agent) {
  auto& a = state_.agents[agent];
  const TripStop& stop = a.trip->stops[a.trip->next];
  const Receptor& rec = model_->receptors[stop.receptor];
  const AgentType& type = index_.type_of(agent);
  auto path = shortest_path(state_.grid, a.cell, rec.coord);
  const Seconds arrive = state_.clock + travel_time(path, type);
  record_traversal(state_.grid, path, state_.clock, type.speed, a.id);
  a.status = AgentStatus::moving;
  note_agent(agent);
  current_.moves.push_back(AgentMove{a.id, a.cell, path.empty() ? a.cell : path.back(), path, state_.clock, arrive});
  push_event(Event{arrive, 0, EventKind::agent_arrival, agent, stop.order, stop.receptor, state_.clock,
                   std::move(path)});
}

void Simulation::advance_trip(std::size_t agent) {
  auto& a = state_.agents[agent];
  if (++a.trip->next < a.trip->stops.size()) {
    begin_leg(agent);
    return;
  }
  a.trip.reset();
  a.status = AgentStatus::idle;
  a.busy_time += state_.clock - a.busy_since;
  note_agent(agent);
}

void Simulation::complete_noop(OrderId id) {
  const auto& t = state_.book.transport(id);
  state_.book.claim(id);
  push_event(Event{state_.clock, 0, EventKind::unload_complete, std::nullopt, id, *t.source, state_.clock, {}});
}

// ---- generation and dispatch -------------------------------------------

void Simulation::run_generation() {
  const auto transit = state_.in_transit();
  GenerationView view{index_, state_.inventories, transit};
  auto result = generate_self_orders(view, state_.book);
  for (auto& g : result.orders) {
    const OrderId id = state_.book.add_transport(std::move(g.order), g.source, g.destination);
    state_.book.log_generation(state_.clock, id, g.rule);
    current_.generated_orders.push_back(id);
  }
  for (auto& d : result.diagnostics) {
    d.severity = Severity::warning;
    add_diagnostic(std::move(d));
  }
}

Count Simulation::free_stock(std::size_t receptor, const std::string& item) const {
  auto it = assembly_reserved_.find({receptor, item});
  const Count reserved = it == assembly_reserved_.end() ? 0 : it->second;
  return state_.inventories[receptor].count_of(item) - reserved;
}

std::optional<std::size_t> Simulation::nearest_idle_agent(std::string_view agent_type, std::size_t receptor) const {
  const auto& field = state_.grid.distance_field(receptor);
  std::optional<std::size_t> best;
  int best_d = 0;
  bool any_idle = false;
  for (std::size_t a : index_.agents_matching(agent_type)) {
    const auto& s = state_.agents[a];
    if (s.status != AgentStatus::idle || s.trip) continue;
    any_idle = true;
    const int d = field[state_.grid.flat(s.cell)];
    if (d == NavGrid::kUnreachable) continue;
    if (!best || d < best_d) {
      best = a;
      best_d = d;
    }
  }
  if (!best && any_idle) {
    // Check that somebody can ever get there; otherwise the run would stall silently.
    bool reachable = false;
    for (std::size_t a : index_.agents_matching(agent_type)) {
      if (field[state_.grid.flat(state_.agents[a].cell)] != NavGrid::kUnreachable) reachable = true;
    }
    if (!reachable) {
      throw Error(ErrorCode::Unreachable, "receptor " + model_->receptors[receptor].id,
                  "no agent matching '" + std::string(agent_type) + "' can reach it");
    }
  }
  return best;
}

std::optional<std::size_t> Simulation::choose_source(const TransportRecord& rec) const {
  const auto& item = rec.order.item_id;
  std::optional<std::size_t> best;
  Count best_avail = 0;
  for (std::size_t r : index_.resolve_location(rec.order.source)) {
    const Count avail = free_stock(r, item) - state_.book.outbound(r, item);
    if (avail < rec.order.count) continue;
    if (!best || avail > best_avail) {
      best = r;
      best_avail = avail;
    }
  }
  return best;
}

std::optional<std::size_t> Simulation::choose_destination(const TransportRecord& rec, std::size_t source) const {
  std::optional<std::size_t> best;
  Count best_load = 0;
  for (std::size_t r : index_.resolve_location(rec.order.destination)) {
    if (r == source) continue;
    const Count load = state_.inventories[r].total() + state_.book.inbound_total(r);
    if (!best || load < best_load) {
      best = r;
      best_load = load;
    }
  }
  // Every member is the source itself: the move is a no-op.
  if (!best) best = source;
  return best;
}

bool Simulation::try_start_assembly(OrderId id) {
  const auto& rec = state_.book.assembly(id);
  for (const auto& in : rec.order.inputs) {
    if (free_stock(rec.place, in.item_id) < rec.order.total_need(in)) return false;
  }
  std::optional<std::size_t> agent;
  if (rec.order.agent_type) {
    agent = nearest_idle_agent(*rec.order.agent_type, rec.place);
    if (!agent) return false;
  }
  for (const auto& in : rec.order.inputs) assembly_reserved_[{rec.place, in.item_id}] += rec.order.total_need(in);
  state_.book.claim(id);
  if (agent) {
    start_trip(*agent, Trip{{TripStop{TripStop::Kind::assemble, rec.place, id}}, 0});
  } else {
    const Seconds pt = rec.order.processing_time.value_or(model_->parameters.default_processing_time);
    push_event(Event{state_.clock + pt, 0, EventKind::assembly_complete, std::nullopt, id, rec.place, state_.clock, {}});
  }
  return true;
}

namespace {

struct Binding {
  OrderId id;
  std::size_t source;
  std::size_t destination;
};

}  // namespace

bool Simulation::try_dispatch_transport(OrderId id) {
  const auto& rec = state_.book.transport(id);
  if (rec.order.batch_id) return try_dispatch_batch(id);

  std::size_t src = 0;
  std::size_t dst = 0;
  if (rec.source) {
    src = *rec.source;
    dst = *rec.destination;
    const auto& item = rec.order.item_id;
    if (free_stock(src, item) - state_.book.claimed_outbound(src, item) < rec.order.count) return false;
  } else {
    auto s = choose_source(rec);
    if (!s) return false;
    src = *s;
    dst = *choose_destination(rec, src);
  }

  if (src == dst) {
    if (!rec.source) state_.book.bind(id, src, dst);
    complete_noop(id);
    return true;
  }
  auto agent = nearest_idle_agent(rec.order.agent_type, src);
  if (!agent) return false;
  if (!rec.source) state_.book.bind(id, src, dst);
  state_.book.claim(id);
  start_trip(*agent, Trip{{TripStop{TripStop::Kind::load, src, id}, TripStop{TripStop::Kind::unload, dst, id}}, 0});
  return true;
}

bool Simulation::try_dispatch_batch(OrderId id) {
  auto& book = state_.book;
  const auto& lead = book.transport(id);
  const std::string batch = *lead.order.batch_id;
  const std::string type = lead.order.agent_type;

  // Tentative readiness, counting stock already promised to earlier members.
  std::map<std::pair<std::size_t, std::string>, Count> promised;
  std::vector<Binding> members;
  std::optional<std::size_t> agent;
  std::size_t capacity = 0;
  for (OrderId m : book.pending_transports()) {
    if (m < id) continue;
    const auto& rec = book.transport(m);
    if (rec.order.batch_id != lead.order.batch_id || rec.order.agent_type != type) continue;
    const auto& item = rec.order.item_id;
    std::size_t src = 0;
    std::size_t dst = 0;
    if (rec.source) {
      src = *rec.source;
      dst = *rec.destination;
      const Count free = free_stock(src, item) - book.claimed_outbound(src, item) - promised[{src, item}];
      if (free < rec.order.count) {
        if (m == id) return false;
        continue;
      }
    } else {
      auto s = choose_source(rec);
      if (!s || free_stock(*s, item) - book.outbound(*s, item) - promised[{*s, item}] < rec.order.count) {
        if (m == id) return false;
        continue;
      }
      src = *s;
      dst = *choose_destination(rec, src);
    }
    if (src == dst) {
      if (m != id) continue;
      if (!rec.source) book.bind(id, src, dst);
      complete_noop(id);
      return true;
    }
    if (!agent) {
      agent = nearest_idle_agent(type, src);
      if (!agent) return false;
      capacity = static_cast<std::size_t>(std::max(1, index_.type_of(*agent).capacity));
    }
    promised[{src, item}] += rec.order.count;
    members.push_back(Binding{m, src, dst});
    if (members.size() == capacity) break;
  }

  Trip trip;
  for (const auto& b : members) {
    if (!book.transport(b.id).source) book.bind(b.id, b.source, b.destination);
    book.claim(b.id);
    trip.stops.push_back(TripStop{TripStop::Kind::load, b.source, b.id});
  }
  for (const auto& b : members) trip.stops.push_back(TripStop{TripStop::Kind::unload, b.destination, b.id});
  start_trip(*agent, std::move(trip));
  return true;
}

void Simulation::dispatch() {
  const std::vector<OrderId> assemblies(state_.book.pending_assemblies().begin(),
                                        state_.book.pending_assemblies().end());
  for (OrderId id : assemblies) try_start_assembly(id);
  const std::vector<OrderId> transports(state_.book.pending_transports().begin(),
                                        state_.book.pending_transports().end());
  for (OrderId id : transports) {
    // Batch dispatch may already have taken this one.
    if (state_.book.transport(id).status != OrderStatus::pending) continue;
    try_dispatch_transport(id);
  }
}

std::vector<Diagnostic> Simulation::open_order_diagnostics() const {
  std::vector<Diagnostic> out;
  const auto transit = state_.in_transit();
  auto exists = [&](const std::string& item) {
    for (const auto& inv : state_.inventories) {
      if (inv.count_of(item) > 0) return true;
    }
    if (transit.count(item)) return true;
    for (const auto& [id, a] : state_.book.assemblies()) {
      if (a.status != OrderStatus::completed && a.order.output.item_id == item) return true;
    }
    return false;
  };
  for (OrderId id : state_.book.pending_transports()) {
    const auto& t = state_.book.transport(id);
    const std::string where = "order " + std::to_string(id);
    if (index_.agents_matching(t.order.agent_type).empty()) {
      out.push_back(Diagnostic{Severity::error, ErrorCode::UnassignableOrders, where,
                               "no agent matches agent type '" + t.order.agent_type + "'"});
    } else if (!exists(t.order.item_id)) {
      out.push_back(Diagnostic{Severity::error, ErrorCode::UnsourceableItem, where,
                               "item '" + t.order.item_id + "' exists nowhere"});
    } else {
      out.push_back(Diagnostic{Severity::error, ErrorCode::Stalled, where,
                               "waiting for " + std::to_string(t.order.count) + " of '" + t.order.item_id + "' at " +
                                   t.order.source});
    }
  }
  for (OrderId id : state_.book.pending_assemblies()) {
    const auto& a = state_.book.assembly(id);
    const std::string where = "order " + std::to_string(id);
    if (a.order.agent_type && index_.agents_matching(*a.order.agent_type).empty()) {
      out.push_back(Diagnostic{Severity::error, ErrorCode::UnassignableOrders, where,
                               "no agent matches agent type '" + *a.order.agent_type + "'"});
      continue;
    }
    std::string missing;
    for (const auto& in : a.order.inputs) {
      const Count have = free_stock(a.place, in.item_id);
      const Count need = a.order.total_need(in);
      if (have < need) missing += " " + in.item_id + " " + std::to_string(have) + "/" + std::to_string(need);
    }
    out.push_back(Diagnostic{Severity::error, ErrorCode::Stalled, where,
                             "assembly of '" + a.order.output.item_id + "' at " + model_->receptors[a.place].id +
                                 " never received its inputs:" + missing});
  }
  for (OrderId id : state_.book.active()) {
    out.push_back(Diagnostic{Severity::error, ErrorCode::Stalled, "order " + std::to_string(id),
                             "still active when the run stopped"});
  }
  return out;
}

Snapshot replay_frames(const std::vector<FrameDelta>& frames) {
  Snapshot s;
  if (frames.empty() || !frames.front().snapshot) return s;
  s = *frames.front().snapshot;
  std::map<std::string, std::size_t> agent_pos;
  for (std::size_t i = 0; i < s.agents.size(); ++i) agent_pos[s.agents[i].id] = i;
  for (std::size_t f = 1; f < frames.size(); ++f) {
    const auto& d = frames[f];
    s.time = d.time;
    for (const auto& c : d.inventory_changes) {
      auto& inv = s.inventories[c.receptor];
      if (c.delta > 0) {
        inv.add(ItemStack{c.item_id, c.delta});
      } else {
        inv.remove(c.item_id, -c.delta);
      }
      if (inv.empty()) s.inventories.erase(c.receptor);
    }
    for (const auto& a : d.agent_states) s.agents[agent_pos.at(a.id)] = a;
  }
  return s;
}

RunResult run(const SimulationModel& model, const RunConfig& config) {
  Simulation sim(model, config);
  RunResult r;
  r.outcome = sim.run_to_end();
  r.report = std::make_shared<const SimulationReport>(compute_report(sim, r.outcome));
  r.event_log = sim.state().event_log;
  r.generation_log = sim.state().book.generation_log();
  r.generation_log_csv = generation_log_csv(sim.state().book);
  r.diagnostics = sim.state().diagnostics;
  r.frames = sim.frames();
  r.final_state = sim.snapshot();
  return r;
}

}  // namespace voxsim
