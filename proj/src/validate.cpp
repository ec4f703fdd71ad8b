#include <set>

#include "voxsim/ingest.hpp"

namespace voxsim {

namespace {

class Collector {
 public:
  void error(ErrorCode code, std::string where, std::string message) {
    diags_.push_back(Diagnostic{Severity::error, code, std::move(where), std::move(message)});
  }
  void warning(ErrorCode code, std::string where, std::string message) {
    diags_.push_back(Diagnostic{Severity::warning, code, std::move(where), std::move(message)});
  }
  std::vector<Diagnostic> take() { return std::move(diags_); }

 private:
  std::vector<Diagnostic> diags_;
};

bool bad_identifier(const std::string& id) {
  if (id.empty()) return true;
  if (id.front() == ' ' || id.back() == ' ' || id.front() == '\t' || id.back() == '\t') return true;
  return id.find_first_of(",\"\r\n") != std::string::npos;
}

std::string coord_text(const VoxelCoord& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

std::string transport_where(std::size_t i) { return "transport_orders row " + std::to_string(i + 2); }

std::string assembly_where(const SimulationModel& m, std::size_t i) {
  return "assembly_orders[" + std::to_string(i) + "] " + m.assembly_orders[i].output.item_id;
}

}  // namespace

std::vector<Diagnostic> validate_model(const SimulationModel& model) {
  Collector out;
  const Parameters& params = model.parameters;
  const ModelIndex index(model);

  // parameters
  if (params.width < 1 || params.depth < 1 || params.height < 1) {
    out.error(ErrorCode::InvalidValue, "parameters", "grid dimensions must be >= 1");
  }
  if (!(params.voxel_edge_length > 0.0)) {
    out.error(ErrorCode::InvalidValue, "parameters.voxel_edge_length", "must be > 0");
  }
  if (!(params.default_processing_time >= 0.0)) {
    out.error(ErrorCode::InvalidValue, "parameters.default_processing_time", "must be >= 0");
  }
  if (params.agent_types.empty()) {
    out.error(ErrorCode::MissingParameters, "parameters.agent_types", "no agent types declared");
  }
  for (const auto& [key, t] : params.agent_types) {
    const std::string where = "agent type " + key;
    if (key != t.id) out.error(ErrorCode::InvalidValue, where, "table key differs from the type ID '" + t.id + "'");
    if (bad_identifier(t.id)) out.error(ErrorCode::InvalidValue, where, "identifier is empty or holds ',', '\"' or line breaks");
    if (!(t.speed > 0.0)) out.error(ErrorCode::InvalidValue, where, "speed must be > 0");
    if (!(t.base_load_time >= 0.0) || !(t.base_unload_time >= 0.0) || !(t.elevation_penalty_per_level >= 0.0)) {
      out.error(ErrorCode::InvalidValue, where, "handling times must be >= 0");
    }
    if (t.capacity < 1) out.error(ErrorCode::InvalidValue, where, "capacity must be >= 1");
  }

  // receptors
  if (model.receptors.empty()) out.error(ErrorCode::ReceptorRequired, "receptors", "at least one receptor is required");
  std::set<std::string> receptor_ids;
  std::set<VoxelCoord> occupied;
  std::set<Cell> footprints;
  for (const auto& r : model.receptors) {
    const std::string where = "receptor " + r.id;
    if (bad_identifier(r.id)) out.error(ErrorCode::InvalidValue, where, "identifier is empty or holds ',', '\"' or line breaks");
    if (!receptor_ids.insert(r.id).second) out.error(ErrorCode::DuplicateId, where, "receptor ID used twice");
    if (!params.contains(r.coord)) {
      out.error(ErrorCode::OutOfGrid, where, coord_text(r.coord) + " lies outside the grid");
    }
    if (!occupied.insert(r.coord).second) {
      out.error(ErrorCode::CoordConflict, where, "another receptor already occupies " + coord_text(r.coord));
    }
    footprints.insert(footprint(r.coord));
    for (const auto& g : r.groups) {
      if (bad_identifier(g)) out.error(ErrorCode::InvalidValue, where, "group ID '" + g + "' is not a plain identifier");
    }
  }

  // agents
  if (model.agents.empty()) out.error(ErrorCode::AgentRequired, "agents", "at least one agent is required");
  std::set<std::string> agent_ids;
  for (const auto& a : model.agents) {
    const std::string where = "agent " + a.id;
    if (bad_identifier(a.id)) out.error(ErrorCode::InvalidValue, where, "identifier is empty or holds ',', '\"' or line breaks");
    if (!agent_ids.insert(a.id).second) out.error(ErrorCode::DuplicateId, where, "agent ID used twice");
    if (!params.agent_types.count(a.type)) {
      out.error(ErrorCode::UnknownAgentType, where, "agent type '" + a.type + "' is not declared");
    }
    if (!params.contains(a.coord)) {
      out.error(ErrorCode::OutOfGrid, where, coord_text(a.coord) + " lies outside the grid");
    } else if (footprints.count(footprint(a.coord))) {
      out.error(ErrorCode::AgentOnBlockedCell, where, "starts on a cell blocked by a receptor at " + coord_text(a.coord));
    }
  }

  auto agent_ref_valid = [&](const std::string& ref) {
    if (params.agent_types.count(ref)) return true;
    for (const auto& [id, t] : params.agent_types) {
      for (const auto& g : t.groups) {
        if (g == ref) return true;
      }
    }
    for (const auto& a : model.agents) {
      for (const auto& g : a.groups) {
        if (g == ref) return true;
      }
    }
    return false;
  };
  auto check_agent_ref = [&](const std::string& ref, const std::string& where) {
    if (!agent_ref_valid(ref)) {
      out.error(ErrorCode::UnknownAgentType, where, "'" + ref + "' matches no agent type or agent group");
    } else if (index.agents_matching(ref).empty()) {
      out.warning(ErrorCode::UnassignableOrders, where, "no agent in the layout serves '" + ref + "'");
    }
  };
  auto check_location = [&](const std::string& loc, const std::string& where, std::string_view role) {
    if (!index.resolves_location(loc)) {
      out.error(ErrorCode::UnknownLocation, where, std::string(role) + " '" + loc + "' matches no receptor or group");
    }
  };

  // material flows
  for (std::size_t i = 0; i < model.material_flows.size(); ++i) {
    const auto& f = model.material_flows[i];
    const std::string where = "material_flows[" + std::to_string(i) + "]";
    check_location(f.source, where, "source");
    check_location(f.destination, where, "destination");
    if (f.agent_types.empty()) out.error(ErrorCode::MissingField, where, "a flow needs at least one agent type");
    for (const auto& t : f.agent_types) check_agent_ref(t, where);
  }

  // what can ever exist: stocked items and assembly outputs
  std::set<std::string> obtainable;
  for (const auto& l : model.item_locations) obtainable.insert(l.item_id);
  for (const auto& a : model.assembly_orders) obtainable.insert(a.output.item_id);

  // item locations
  for (std::size_t i = 0; i < model.item_locations.size(); ++i) {
    const auto& l = model.item_locations[i];
    const std::string where = "item_locations row " + std::to_string(i + 2);
    if (!index.receptor_index(l.receptor_id)) {
      out.error(ErrorCode::UnknownLocation, where, "receptor '" + l.receptor_id + "' does not exist");
    }
    if (bad_identifier(l.item_id)) out.error(ErrorCode::InvalidValue, where, "item ID is not a plain identifier");
    if (l.count < 1) out.error(ErrorCode::NonPositiveCount, where, "count must be >= 1");
  }

  // transportation orders
  for (std::size_t i = 0; i < model.transport_orders.size(); ++i) {
    const auto& o = model.transport_orders[i];
    const std::string where = transport_where(i);
    if (o.count < 1) out.error(ErrorCode::NonPositiveCount, where, "count must be >= 1");
    if (bad_identifier(o.item_id)) out.error(ErrorCode::InvalidValue, where, "item ID is not a plain identifier");
    check_location(o.source, where, "source");
    check_location(o.destination, where, "destination");
    if (o.agent_type.empty()) {
      out.error(ErrorCode::EmptyField, where, "agent type is empty");
    } else {
      check_agent_ref(o.agent_type, where);
    }
    if (!obtainable.count(o.item_id)) {
      out.warning(ErrorCode::UnsourceableItem, where, "item '" + o.item_id + "' is never stocked or produced");
    }
  }

  // assembly orders
  for (std::size_t i = 0; i < model.assembly_orders.size(); ++i) {
    const auto& a = model.assembly_orders[i];
    const std::string where = assembly_where(model, i);
    check_location(a.place, where, "place");
    if (a.inputs.empty()) out.error(ErrorCode::EmptyParts, where, "an assembly needs at least one input");
    if (a.output.count < 1) out.error(ErrorCode::NonPositiveCount, where, "output count must be >= 1");
    if (!a.co_products.empty()) {
      out.error(ErrorCode::MultiOutputUnsupported, where,
                "orders with more than one output are not supported; split the co-products into separate orders");
    }
    if (a.processing_time && !(*a.processing_time >= 0.0)) {
      out.error(ErrorCode::InvalidValue, where, "processing time must be >= 0");
    }
    if (a.agent_type) check_agent_ref(*a.agent_type, where);
    for (const auto& in : a.inputs) {
      if (in.count < 1) out.error(ErrorCode::NonPositiveCount, where, "input '" + in.item_id + "' count must be >= 1");
      if (!obtainable.count(in.item_id)) {
        out.warning(ErrorCode::UnobtainableInput, where,
                    "assembly input never obtainable: '" + in.item_id + "' is neither stocked nor produced");
      }
    }
    if (!a.agent_type && index.resolves_location(a.place)) {
      const auto places = index.resolve_location(a.place);
      bool covered = false;
      for (const auto& f : model.material_flows) {
        if (!index.resolves_location(f.destination)) continue;
        for (auto d : index.resolve_location(f.destination)) {
          if (std::find(places.begin(), places.end(), d) != places.end()) covered = true;
        }
      }
      if (!covered) {
        out.warning(ErrorCode::NoSupplyAgentType, where,
                    "no agent type or covering material flow; part deliveries may use any agent");
      }
    }
  }

  return out.take();
}

}  // namespace voxsim
