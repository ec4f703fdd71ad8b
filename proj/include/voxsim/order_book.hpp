#pragma once

// Pending / active / completed work orders and the self-order generation
// rules that synthesize missing transportation orders.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "voxsim/core_model.hpp"

namespace voxsim {

using OrderId = std::uint64_t;

enum class OrderStatus { pending, active, completed };
enum class GenerationRule { assembly, material_flow };

std::string_view to_string(OrderStatus status);
std::string_view to_string(GenerationRule rule);

struct TransportRecord {
  OrderId id = 0;
  TransportationWorkOrder order;
  OrderStatus status = OrderStatus::pending;
  // Concrete receptors (indices into the model) once known.
  std::optional<std::size_t> source;
  std::optional<std::size_t> destination;
  bool loaded = false;
};

struct AssemblyRecord {
  OrderId id = 0;
  AssemblyWorkOrder order;
  OrderStatus status = OrderStatus::pending;
  std::size_t place = 0;
};

struct Completion {
  OrderId id = 0;
  Seconds time = 0.0;

  friend bool operator==(const Completion&, const Completion&) = default;
};

struct GenerationEntry {
  Seconds time = 0.0;
  OrderId id = 0;
  TransportationWorkOrder order;
  GenerationRule rule = GenerationRule::assembly;
};

class OrderBook {
 public:
  OrderId add_transport(TransportationWorkOrder order, std::optional<std::size_t> source = std::nullopt,
                        std::optional<std::size_t> destination = std::nullopt);
  OrderId add_assembly(AssemblyWorkOrder order, std::size_t place);

  // Pins a pending order to concrete receptors.
  void bind(OrderId id, std::size_t source, std::size_t destination);

  // pending -> active. Throws IllegalTransition otherwise.
  void claim(OrderId id);
  // The claimed items have left their source receptor.
  void mark_loaded(OrderId id);
  // active -> completed at `time`; times must not decrease.
  void complete(OrderId id, Seconds time);

  void log_generation(Seconds time, OrderId id, GenerationRule rule);

  const TransportRecord& transport(OrderId id) const;
  const AssemblyRecord& assembly(OrderId id) const;
  bool is_transport(OrderId id) const { return transports_.count(id) > 0; }
  OrderStatus status(OrderId id) const;

  const std::map<OrderId, TransportRecord>& transports() const { return transports_; }
  const std::map<OrderId, AssemblyRecord>& assemblies() const { return assemblies_; }
  const std::set<OrderId>& pending_transports() const { return pending_transports_; }
  const std::set<OrderId>& pending_assemblies() const { return pending_assemblies_; }
  const std::set<OrderId>& active() const { return active_; }
  const std::vector<Completion>& completed() const { return completed_; }
  const std::vector<GenerationEntry>& generation_log() const { return generation_log_; }

  bool has_open_orders() const {
    return !pending_transports_.empty() || !pending_assemblies_.empty() || !active_.empty();
  }

  // Items bound for `receptor` by pending or active transports not yet unloaded.
  Count inbound(std::size_t receptor, const std::string& item) const;
  Count inbound_self_generated(std::size_t receptor, const std::string& item) const;
  Count inbound_total(std::size_t receptor) const;
  // Items bound to leave `receptor` by pending or active transports not yet loaded.
  Count outbound(std::size_t receptor, const std::string& item) const;
  // The subset of outbound() already claimed by an agent.
  Count claimed_outbound(std::size_t receptor, const std::string& item) const;

 private:
  using Key = std::pair<std::size_t, std::string>;

  TransportRecord& transport_mut(OrderId id);
  void add_flow(std::map<Key, Count>& m, std::size_t r, const std::string& item, Count delta);

  OrderId next_id_ = 1;
  std::map<OrderId, TransportRecord> transports_;
  std::map<OrderId, AssemblyRecord> assemblies_;
  std::set<OrderId> pending_transports_;
  std::set<OrderId> pending_assemblies_;
  std::set<OrderId> active_;
  std::vector<Completion> completed_;
  std::vector<GenerationEntry> generation_log_;

  std::map<Key, Count> inbound_;
  std::map<Key, Count> inbound_generated_;
  std::map<std::size_t, Count> inbound_total_;
  std::map<Key, Count> outbound_;
  std::map<Key, Count> claimed_;
};

// Read-only view of the world the generation rules need.
struct GenerationView {
  const ModelIndex& index;
  const std::vector<Inventory>& inventories;     // by receptor index
  const std::map<std::string, Count>& in_transit;  // carried by agents
};

struct GeneratedOrder {
  TransportationWorkOrder order;
  std::size_t source = 0;
  std::size_t destination = 0;
  GenerationRule rule = GenerationRule::assembly;
};

struct GenerationResult {
  std::vector<GeneratedOrder> orders;
  std::vector<Diagnostic> diagnostics;
};

// Assembly rule, then material-flow rule. Pure: the same view and book always
// give the same result, and applying the result then calling again yields no
// further orders.
GenerationResult generate_self_orders(const GenerationView& view, const OrderBook& book);

// Items a receptor must keep for pending or started assemblies placed there.
std::map<std::pair<std::size_t, std::string>, Count> assembly_needs(const OrderBook& book);

// CSV: time,item,count,source,destination,rule
std::string generation_log_csv(const OrderBook& book);

}  // namespace voxsim
