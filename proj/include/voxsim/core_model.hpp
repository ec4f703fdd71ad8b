#pragma once

// Domain types of the voxel world: items live in receptors, agents move them.
// Everything in this header is plain data; the engine keeps its own mutable
// copies of inventories and agent state.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "voxsim/error.hpp"

namespace voxsim {

using Count = std::int64_t;
using Seconds = double;

struct VoxelCoord {
  int x = 0;
  int y = 0;
  int z = 0;

  friend bool operator==(const VoxelCoord&, const VoxelCoord&) = default;
  friend auto operator<=>(const VoxelCoord&, const VoxelCoord&) = default;
};

// Planar grid cell; movement never leaves z = 0.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline Cell footprint(const VoxelCoord& c) { return Cell{c.x, c.y}; }

struct ItemStack {
  std::string item_id;
  Count count = 1;

  friend bool operator==(const ItemStack&, const ItemStack&) = default;
};

// Multiset of items keyed by item ID. Entries with zero count are erased, so
// two inventories holding the same items always compare equal.
class Inventory {
 public:
  void add(const ItemStack& stack);
  // Throws Error{InsufficientItems} and leaves the inventory unchanged on underflow.
  void remove(const std::string& item_id, Count count);

  Count count_of(const std::string& item_id) const;
  Count total() const;
  bool empty() const { return items_.empty(); }
  const std::map<std::string, Count>& items() const { return items_; }

  friend bool operator==(const Inventory&, const Inventory&) = default;

 private:
  std::map<std::string, Count> items_;
};

// Free-function spellings used across the code base.
Inventory add_items(Inventory inventory, const ItemStack& stack);
Inventory remove_items(Inventory inventory, const std::string& item_id, Count count);

// One node of a bill of materials. `count` is the production quantity for a
// root node and the per-parent-unit quantity for a nested one.
struct BomNode {
  struct Part {
    std::string item_id;
    Count count = 1;
    // Index into `children` when the part is itself assembled.
    std::optional<std::size_t> child;

    friend bool operator==(const Part&, const Part&) = default;
  };

  std::string item_id;
  std::vector<Part> parts;
  std::vector<BomNode> children;
  std::string where;
  Count count = 1;
  std::optional<std::string> agent_type;
  std::optional<Seconds> processing_time;
  std::vector<ItemStack> co_products;
  std::map<std::string, std::string> custom_fields;

  friend bool operator==(const BomNode&, const BomNode&) = default;
};

struct Receptor {
  std::string id;
  VoxelCoord coord;
  std::vector<std::string> groups;

  friend bool operator==(const Receptor&, const Receptor&) = default;
};

struct AgentType {
  std::string id;
  double speed = 1.0;  // voxels per second
  Seconds base_load_time = 0.0;
  Seconds base_unload_time = 0.0;
  Seconds elevation_penalty_per_level = 0.0;
  int capacity = 1;  // item stacks carried at once
  std::vector<std::string> groups;

  friend bool operator==(const AgentType&, const AgentType&) = default;
};

enum class AgentStatus { idle, moving, loading, unloading, assembling };

std::string_view to_string(AgentStatus status);

struct Agent {
  std::string id;
  std::string type;
  VoxelCoord coord;
  std::vector<std::string> groups;

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct Parameters {
  int width = 1;
  int depth = 1;
  int height = 1;
  double voxel_edge_length = 1.0;  // meters per voxel
  Seconds default_processing_time = 0.0;
  std::int64_t random_seed = 0;
  std::map<std::string, AgentType> agent_types;

  bool contains(const VoxelCoord& c) const {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < width && c.y < depth && c.z < height;
  }

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

struct MaterialFlow {
  std::string source;
  std::string destination;
  std::vector<std::string> agent_types;

  friend bool operator==(const MaterialFlow&, const MaterialFlow&) = default;
};

enum class OrderOrigin { user, self_generated };

struct TransportationWorkOrder {
  std::string item_id;
  Count count = 1;
  std::string source;
  std::string destination;
  // Empty means any agent may serve the order (only produced by self-generation).
  std::string agent_type;
  std::optional<std::string> batch_id;
  std::map<std::string, std::string> custom_fields;
  OrderOrigin origin = OrderOrigin::user;

  friend bool operator==(const TransportationWorkOrder&, const TransportationWorkOrder&) = default;
};

struct AssemblyWorkOrder {
  std::vector<ItemStack> inputs;  // per unit of output
  ItemStack output;
  std::vector<ItemStack> co_products;  // accepted by the parser, rejected by validation
  std::string place;
  std::optional<std::string> agent_type;
  std::optional<Seconds> processing_time;
  std::map<std::string, std::string> custom_fields;
  // Flattened tree linkage: index of the parent order within the same list.
  std::optional<std::size_t> parent;

  Count total_need(const ItemStack& input) const { return input.count * output.count; }

  friend bool operator==(const AssemblyWorkOrder&, const AssemblyWorkOrder&) = default;
};

struct ItemLocation {
  std::string receptor_id;
  std::string item_id;
  Count count = 1;

  friend bool operator==(const ItemLocation&, const ItemLocation&) = default;
};

struct SimulationModel {
  Parameters parameters;
  std::vector<Receptor> receptors;
  std::vector<Agent> agents;
  std::vector<MaterialFlow> material_flows;
  std::vector<TransportationWorkOrder> transport_orders;
  std::vector<AssemblyWorkOrder> assembly_orders;
  std::vector<ItemLocation> item_locations;

  friend bool operator==(const SimulationModel&, const SimulationModel&) = default;
};

// Lookup tables over one model. Receptor and agent indices refer to the
// model's vectors; resolution results are sorted by ascending ID.
class ModelIndex {
 public:
  explicit ModelIndex(const SimulationModel& model);

  const SimulationModel& model() const { return *model_; }

  std::optional<std::size_t> receptor_index(std::string_view id) const;
  std::optional<std::size_t> agent_index(std::string_view id) const;

  // Exact receptor ID first, then group membership. Throws UnknownLocation.
  std::vector<std::size_t> resolve_location(std::string_view loc) const;
  bool resolves_location(std::string_view loc) const;

  // Exact agent type ID first, then type-level group tags. Throws UnknownAgentType.
  std::vector<std::string> resolve_agent_type(std::string_view ref) const;

  // True when `ref` is empty (any agent), names the agent's type, one of the
  // type's group tags, or one of the agent's own group tags.
  bool agent_matches(std::size_t agent, std::string_view ref) const;
  // Sorted by agent ID.
  const std::vector<std::size_t>& agents_matching(std::string_view ref) const;

  const AgentType& type_of(std::size_t agent) const;

 private:
  const SimulationModel* model_;
  std::unordered_map<std::string, std::size_t> receptor_by_id_;
  std::unordered_map<std::string, std::size_t> agent_by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> receptors_by_group_;
  mutable std::unordered_map<std::string, std::vector<std::size_t>> agents_by_ref_;
};

std::vector<std::string> resolve_location(std::string_view loc, const SimulationModel& model);
std::vector<std::string> resolve_agent_type(std::string_view ref, const SimulationModel& model);

// Sum over item locations, i.e. the initial world stock per item.
std::map<std::string, Count> initial_item_totals(const SimulationModel& model);

}  // namespace voxsim
