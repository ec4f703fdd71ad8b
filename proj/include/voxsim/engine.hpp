#pragma once

// Extended discrete-event loop: initialization, timing function, event
// function (process events -> self-order generation -> dispatch) and the
// termination evaluator.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "voxsim/core_model.hpp"
#include "voxsim/order_book.hpp"
#include "voxsim/routing.hpp"

namespace voxsim {

enum class EventKind { agent_arrival, load_complete, unload_complete, assembly_complete };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view text);

struct Event {
  Seconds time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::agent_arrival;
  std::optional<std::size_t> agent;
  OrderId order = 0;
  std::size_t receptor = 0;
  // When the activity ending with this event began (departure for arrivals).
  Seconds start = 0.0;
  std::vector<Cell> path;

  friend bool operator<(const Event& a, const Event& b) {
    return a.time != b.time ? a.time < b.time : a.seq < b.seq;
  }
};

struct ItemDelta {
  std::string item_id;
  Count delta = 0;

  friend bool operator==(const ItemDelta&, const ItemDelta&) = default;
};

// One processed event as it appears in the exported log. `items` are the
// inventory changes the event caused at `receptor`.
struct EventRecord {
  Seconds time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::agent_arrival;
  std::string agent;  // empty for receptor-autonomous events
  OrderId order = 0;
  std::string receptor;
  Seconds start = 0.0;
  std::vector<ItemDelta> items;
  std::vector<Cell> path;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// time=.. seq=.. kind=.. agent=.. order=.. receptor=.. start=.. items=.. path=..
std::string format_event(const EventRecord& record);
EventRecord parse_event(std::string_view line);
std::string format_event_log(const std::vector<EventRecord>& log);
std::vector<EventRecord> parse_event_log(std::string_view text);

struct CarriedStack {
  ItemStack stack;
  OrderId order = 0;
  std::size_t destination = 0;
};

struct TripStop {
  enum class Kind { load, unload, assemble };
  Kind kind = Kind::load;
  std::size_t receptor = 0;
  OrderId order = 0;
};

struct Trip {
  std::vector<TripStop> stops;
  std::size_t next = 0;
};

struct AgentState {
  std::string id;
  Cell cell;
  AgentStatus status = AgentStatus::idle;
  std::vector<CarriedStack> carried;
  Seconds busy_time = 0.0;
  Seconds busy_since = 0.0;
  std::optional<Trip> trip;
};

struct WorldState {
  Seconds clock = 0.0;
  std::vector<Inventory> inventories;  // by receptor index
  std::vector<AgentState> agents;      // by agent index
  OrderBook book;
  NavGrid grid;
  std::set<Event> events;
  std::vector<EventRecord> event_log;
  std::vector<Diagnostic> diagnostics;
  std::uint64_t next_seq = 0;
  std::uint64_t processed_events = 0;

  // Items carried by agents, per item.
  std::map<std::string, Count> in_transit() const;
  // Receptor stock plus carried items, per item.
  std::map<std::string, Count> item_totals() const;
};

struct Snapshot {
  struct AgentView {
    std::string id;
    Cell cell;
    AgentStatus status = AgentStatus::idle;
    std::vector<ItemStack> carried;

    friend bool operator==(const AgentView&, const AgentView&) = default;
  };
  Seconds time = 0.0;
  std::map<std::string, Inventory> inventories;  // by receptor ID; empty receptors omitted
  std::vector<AgentView> agents;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct AgentMove {
  std::string agent;
  Cell from;
  Cell to;
  std::vector<Cell> path;
  Seconds depart = 0.0;
  Seconds arrive = 0.0;
};

struct InventoryChange {
  std::string receptor;
  std::string item_id;
  Count delta = 0;
};

// What changed during one timing+event cycle. Frame 0 is initialization and
// carries a full snapshot.
struct FrameDelta {
  std::uint64_t index = 0;
  Seconds time = 0.0;
  std::vector<EventRecord> events;
  std::vector<AgentMove> moves;
  std::vector<InventoryChange> inventory_changes;
  std::vector<Snapshot::AgentView> agent_states;  // agents touched this frame, state at frame end
  std::vector<OrderId> completed_orders;
  std::vector<OrderId> generated_orders;
  std::optional<Snapshot> snapshot;
  bool terminal = false;
};

// Applies frame deltas in order to the snapshot carried by the first frame.
Snapshot replay_frames(const std::vector<FrameDelta>& frames);

struct RunConfig {
  std::uint64_t max_events = 10'000'000;
  Seconds max_sim_time = 1e9;
  // Terminal once the clock reaches this time.
  std::optional<Seconds> time_horizon;
  // Replaces the default "no open orders and no events" predicate.
  std::function<bool(const WorldState&)> terminal_predicate;
  // Overrides Parameters::random_seed. Nothing is stochastic yet.
  std::optional<std::int64_t> seed;
  // Re-count every item after each event and throw ConservationViolated on drift.
  bool check_conservation = false;
  bool record_frames = false;
  // Every n-th frame carries a full snapshot (0 = only frame 0).
  std::uint64_t snapshot_interval = 0;
};

enum class RunOutcome { completed, stalled, safety_cap };

std::string_view to_string(RunOutcome outcome);

// Thrown when a model with validation errors is handed to the engine.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class Simulation {
 public:
  // Initialization: validate, seed inventories, place agents, clock = 0,
  // empty event list, one self-order generation pass, one dispatch pass.
  explicit Simulation(SimulationModel model, RunConfig config = {});

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Timing function: moves the clock to the earliest event. Throws EmptyEventList.
  Seconds advance_clock();
  // Processes every event at the current clock, then generates orders, then dispatches.
  void event_function();
  bool is_terminal() const;

  // One advance_clock + event_function cycle.
  FrameDelta step();

  // Loops until terminal, stalled or a safety cap trips. `on_frame` sees
  // every frame after the initial one.
  RunOutcome run_to_end(const std::function<void(const FrameDelta&)>& on_frame = {});

  const WorldState& state() const { return state_; }
  const SimulationModel& model() const { return *model_; }
  const ModelIndex& index() const { return index_; }
  const RunConfig& config() const { return config_; }
  const std::vector<FrameDelta>& frames() const { return frames_; }
  const FrameDelta& initial_frame() const { return initial_frame_; }
  Snapshot snapshot() const;

  // Orders still pending or active, with a reason for each.
  std::vector<Diagnostic> open_order_diagnostics() const;

 private:
  void process_event(const Event& e);
  void run_generation();
  void dispatch();
  bool try_start_assembly(OrderId id);
  bool try_dispatch_transport(OrderId id);
  bool try_dispatch_batch(OrderId id);

  std::optional<std::size_t> choose_source(const TransportRecord& rec) const;
  std::optional<std::size_t> choose_destination(const TransportRecord& rec, std::size_t source) const;
  Count free_stock(std::size_t receptor, const std::string& item) const;
  std::optional<std::size_t> nearest_idle_agent(std::string_view agent_type, std::size_t receptor) const;

  void push_event(Event e);
  void start_trip(std::size_t agent, Trip trip);
  void begin_leg(std::size_t agent);
  void advance_trip(std::size_t agent);
  void complete_noop(OrderId id);

  void note_agent(std::size_t agent);
  void note_inventory(std::size_t receptor, const std::string& item, Count delta);
  void log_event(const Event& e, std::vector<ItemDelta> items);
  void check_conservation() const;
  void add_diagnostic(Diagnostic d);

  std::shared_ptr<const SimulationModel> model_;
  ModelIndex index_;
  RunConfig config_;
  WorldState state_;
  std::map<std::pair<std::size_t, std::string>, Count> assembly_reserved_;
  std::map<std::string, Count> expected_totals_;
  std::vector<FrameDelta> frames_;
  FrameDelta initial_frame_;
  FrameDelta current_;
  std::set<std::size_t> touched_agents_;
  std::uint64_t cycles_ = 0;
};

struct SimulationReport;

struct RunResult {
  RunOutcome outcome = RunOutcome::completed;
  std::vector<EventRecord> event_log;
  std::vector<GenerationEntry> generation_log;
  std::string generation_log_csv;
  std::vector<Diagnostic> diagnostics;
  std::shared_ptr<const SimulationReport> report;  // always set
  std::vector<FrameDelta> frames;
  Snapshot final_state;
};

// Initialize, loop, then build the report.
RunResult run(const SimulationModel& model, const RunConfig& config = {});

}  // namespace voxsim
