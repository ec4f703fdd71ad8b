#include <limits>
#include <set>

#include "json.hpp"
#include "voxsim/ingest.hpp"

namespace voxsim {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxBomDepth = 64;
constexpr long long kMaxGridCells = 1LL << 22;
constexpr int kMaxGridHeight = 4096;

Json parse_document(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string(what), e.what());
  }
}

std::string join_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

Count json_count(const Json& v, const std::string& where) {
  if (v.is_number_integer() && !v.is_number_unsigned()) {
    const auto n = v.get<std::int64_t>();
    if (n < 1) throw Error(ErrorCode::NonPositiveCount, where, "count must be at least 1, got " + v.dump());
    return n;
  }
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n > static_cast<std::uint64_t>(std::numeric_limits<Count>::max())) {
      throw Error(ErrorCode::InvalidValue, where, "count out of range");
    }
    if (n < 1) throw Error(ErrorCode::NonPositiveCount, where, "count must be at least 1, got 0");
    return static_cast<Count>(n);
  }
  if (v.is_number()) throw Error(ErrorCode::NonIntegerCount, where, v.dump() + " is not an integer count");
  throw Error(ErrorCode::NonIntegerCount, where, "expected an integer count");
}

std::string json_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw Error(ErrorCode::InvalidValue, where, "expected a string");
  auto s = v.get<std::string>();
  if (s.empty()) throw Error(ErrorCode::EmptyField, where, "empty identifier");
  return s;
}

double json_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::InvalidValue, where, "expected a number");
  return v.get<double>();
}

int json_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidValue, where, "expected an integer");
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
      throw Error(ErrorCode::InvalidValue, where, "integer out of range");
    }
    return static_cast<int>(n);
  }
  const auto n = v.get<std::int64_t>();
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::InvalidValue, where, "integer out of range");
  }
  return static_cast<int>(n);
}

std::vector<std::string> json_string_list(const Json& obj, std::string_view key, const std::string& where,
                                          bool required) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw Error(ErrorCode::MissingField, where, "missing '" + std::string(key) + "'");
    return out;
  }
  const auto path = join_path(where, key);
  if (!it->is_array()) throw Error(ErrorCode::InvalidValue, path, "expected an array of strings");
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(json_string((*it)[i], index_path(path, i)));
  return out;
}

const Json& require_key(const Json& obj, std::string_view key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MissingField, where, "missing '" + std::string(key) + "'");
  return *it;
}

// --- assembly trees ---------------------------------------------------------

BomNode parse_node(const std::string& item_id, const Json& v, const std::string& path,
                   std::vector<std::string>& ancestors) {
  if (ancestors.size() >= kMaxBomDepth) {
    throw Error(ErrorCode::BomTooDeep, path, "nesting deeper than " + std::to_string(kMaxBomDepth));
  }
  if (!v.is_object()) throw Error(ErrorCode::InvalidValue, path, "expected an assembly node object");
  if (std::find(ancestors.begin(), ancestors.end(), item_id) != ancestors.end()) {
    throw Error(ErrorCode::CyclicBom, path, "'" + item_id + "' appears on its own ancestor path");
  }
  ancestors.push_back(item_id);

  BomNode node;
  node.item_id = item_id;

  auto w = v.find("where");
  if (w == v.end()) throw Error(ErrorCode::MissingWhere, path, "assembly node has no 'where'");
  node.where = json_string(*w, join_path(path, "where"));

  node.count = json_count(require_key(v, "count", path), join_path(path, "count"));

  const auto parts_path = join_path(path, "parts");
  const Json& parts = require_key(v, "parts", path);
  if (!parts.is_object()) throw Error(ErrorCode::InvalidValue, parts_path, "expected an object");
  if (parts.empty()) throw Error(ErrorCode::EmptyParts, parts_path, "an assembly needs at least one input");
  for (auto it = parts.begin(); it != parts.end(); ++it) {
    const std::string& part_id = it.key();
    const auto part_path = join_path(parts_path, part_id);
    if (part_id.empty()) throw Error(ErrorCode::EmptyField, part_path, "empty part ID");
    if (std::find(ancestors.begin(), ancestors.end(), part_id) != ancestors.end()) {
      throw Error(ErrorCode::CyclicBom, part_path, "'" + part_id + "' appears on its own ancestor path");
    }
    BomNode::Part part;
    part.item_id = part_id;
    if (it->is_object()) {
      BomNode child = parse_node(part_id, *it, part_path, ancestors);
      part.count = child.count;
      part.child = node.children.size();
      node.children.push_back(std::move(child));
    } else {
      part.count = json_count(*it, part_path);
    }
    node.parts.push_back(std::move(part));
  }

  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string& key = it.key();
    const auto kpath = join_path(path, key);
    if (key == "where" || key == "count" || key == "parts") continue;
    if (key == "agent_type") {
      node.agent_type = json_string(*it, kpath);
    } else if (key == "processing_time") {
      const double t = json_number(*it, kpath);
      if (!(t >= 0.0)) throw Error(ErrorCode::InvalidValue, kpath, "processing time must be >= 0");
      node.processing_time = t;
    } else if (key == "co_products") {
      if (!it->is_object()) throw Error(ErrorCode::InvalidValue, kpath, "expected an object");
      for (auto cp = it->begin(); cp != it->end(); ++cp) {
        if (cp.key().empty()) throw Error(ErrorCode::EmptyField, kpath, "empty co-product ID");
        node.co_products.push_back(ItemStack{cp.key(), json_count(*cp, join_path(kpath, cp.key()))});
      }
    } else {
      node.custom_fields[key] = it->is_string() ? it->get<std::string>() : it->dump();
    }
  }

  ancestors.pop_back();
  return node;
}

Count checked_mul(Count a, Count b, const std::string& where) {
  if (a != 0 && b > std::numeric_limits<Count>::max() / a) {
    throw Error(ErrorCode::InvalidValue, where, "required count overflows");
  }
  return a * b;
}

void flatten_node(const BomNode& node, Count output_count, std::optional<std::size_t> parent,
                  std::vector<AssemblyWorkOrder>& out) {
  AssemblyWorkOrder order;
  for (const auto& p : node.parts) order.inputs.push_back(ItemStack{p.item_id, p.count});
  order.output = ItemStack{node.item_id, output_count};
  order.co_products = node.co_products;
  order.place = node.where;
  order.agent_type = node.agent_type;
  order.processing_time = node.processing_time;
  order.custom_fields = node.custom_fields;
  order.parent = parent;
  const std::size_t self = out.size();
  out.push_back(std::move(order));
  for (const auto& p : node.parts) {
    if (!p.child) continue;
    const BomNode& child = node.children[*p.child];
    flatten_node(child, checked_mul(p.count, output_count, child.item_id), self, out);
  }
}

Json node_to_json(const BomNode& node) {
  Json parts = Json::object();
  for (const auto& p : node.parts) {
    if (p.child) {
      parts[p.item_id] = node_to_json(node.children[*p.child]);
    } else {
      parts[p.item_id] = p.count;
    }
  }
  Json j = Json::object();
  j["parts"] = std::move(parts);
  j["where"] = node.where;
  j["count"] = node.count;
  if (node.agent_type) j["agent_type"] = *node.agent_type;
  if (node.processing_time) j["processing_time"] = *node.processing_time;
  if (!node.co_products.empty()) {
    Json cp = Json::object();
    for (const auto& s : node.co_products) cp[s.item_id] = s.count;
    j["co_products"] = std::move(cp);
  }
  for (const auto& [k, v] : node.custom_fields) j[k] = v;
  return j;
}

// --- layout -----------------------------------------------------------------

VoxelCoord json_coord(const Json& obj, const std::string& where) {
  VoxelCoord c;
  c.x = json_int(require_key(obj, "x", where), join_path(where, "x"));
  c.y = json_int(require_key(obj, "y", where), join_path(where, "y"));
  auto z = obj.find("z");
  c.z = z == obj.end() ? 0 : json_int(*z, join_path(where, "z"));
  return c;
}

std::string coord_text(const VoxelCoord& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

Parameters parse_parameters(const Json& root) {
  auto it = root.find("parameters");
  if (it == root.end() || !it->is_object()) {
    throw Error(ErrorCode::MissingParameters, "parameters", "layout has no parameters object");
  }
  const Json& p = *it;
  const std::string base = "parameters";
  auto need = [&](std::string_view key) -> const Json& {
    auto k = p.find(key);
    if (k == p.end()) {
      throw Error(ErrorCode::MissingParameters, join_path(base, key), "required parameter is missing");
    }
    return *k;
  };

  Parameters params;
  params.width = json_int(need("width"), join_path(base, "width"));
  params.depth = json_int(need("depth"), join_path(base, "depth"));
  params.height = json_int(need("height"), join_path(base, "height"));
  if (params.width < 1 || params.depth < 1 || params.height < 1) {
    throw Error(ErrorCode::InvalidValue, base, "grid dimensions must be >= 1");
  }
  if (static_cast<long long>(params.width) * params.depth > kMaxGridCells || params.height > kMaxGridHeight) {
    throw Error(ErrorCode::GridTooLarge, base, "grid exceeds the supported size");
  }
  if (auto k = p.find("voxel_edge_length"); k != p.end()) {
    params.voxel_edge_length = json_number(*k, join_path(base, "voxel_edge_length"));
  }
  if (!(params.voxel_edge_length > 0.0)) {
    throw Error(ErrorCode::InvalidValue, join_path(base, "voxel_edge_length"), "must be > 0");
  }
  if (auto k = p.find("default_processing_time"); k != p.end()) {
    params.default_processing_time = json_number(*k, join_path(base, "default_processing_time"));
  }
  if (!(params.default_processing_time >= 0.0)) {
    throw Error(ErrorCode::InvalidValue, join_path(base, "default_processing_time"), "must be >= 0");
  }
  if (auto k = p.find("random_seed"); k != p.end()) {
    const auto path = join_path(base, "random_seed");
    if (!k->is_number_integer()) throw Error(ErrorCode::InvalidValue, path, "expected an integer");
    params.random_seed = k->is_number_unsigned() ? static_cast<std::int64_t>(k->get<std::uint64_t>())
                                                 : k->get<std::int64_t>();
  }

  const auto types_path = join_path(base, "agent_types");
  const Json& types = need("agent_types");
  if (!types.is_array() || types.empty()) {
    throw Error(ErrorCode::MissingParameters, types_path, "at least one agent type is required");
  }
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto path = index_path(types_path, i);
    const Json& t = types[i];
    if (!t.is_object()) throw Error(ErrorCode::InvalidValue, path, "expected an object");
    AgentType at;
    at.id = json_string(require_key(t, "id", path), join_path(path, "id"));
    at.speed = json_number(require_key(t, "speed", path), join_path(path, "speed"));
    if (auto k = t.find("load_time"); k != t.end()) at.base_load_time = json_number(*k, join_path(path, "load_time"));
    if (auto k = t.find("unload_time"); k != t.end()) {
      at.base_unload_time = json_number(*k, join_path(path, "unload_time"));
    }
    if (auto k = t.find("elevation_penalty"); k != t.end()) {
      at.elevation_penalty_per_level = json_number(*k, join_path(path, "elevation_penalty"));
    }
    if (auto k = t.find("capacity"); k != t.end()) at.capacity = json_int(*k, join_path(path, "capacity"));
    at.groups = json_string_list(t, "groups", path, false);
    if (!(at.speed > 0.0) || at.speed > 1e12) throw Error(ErrorCode::InvalidValue, path, "speed must be > 0");
    if (!(at.base_load_time >= 0.0) || !(at.base_unload_time >= 0.0) ||
        !(at.elevation_penalty_per_level >= 0.0)) {
      throw Error(ErrorCode::InvalidValue, path, "handling times must be >= 0");
    }
    if (at.capacity < 1) throw Error(ErrorCode::InvalidValue, path, "capacity must be >= 1");
    if (params.agent_types.count(at.id)) {
      throw Error(ErrorCode::DuplicateId, path, "agent type '" + at.id + "' declared twice");
    }
    params.agent_types.emplace(at.id, std::move(at));
  }
  return params;
}

}  // namespace

std::vector<BomNode> parse_bom_forest(std::string_view json_text) {
  const Json root = parse_document(json_text, "assembly orders");
  if (!root.is_object()) throw Error(ErrorCode::MalformedDocument, "", "top level must map product IDs to nodes");
  std::vector<BomNode> forest;
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (it.key().empty()) throw Error(ErrorCode::EmptyField, "", "empty product ID");
    std::vector<std::string> ancestors;
    forest.push_back(parse_node(it.key(), *it, it.key(), ancestors));
  }
  return forest;
}

std::vector<AssemblyWorkOrder> flatten_bom(const std::vector<BomNode>& forest) {
  std::vector<AssemblyWorkOrder> out;
  for (const auto& root : forest) flatten_node(root, root.count, std::nullopt, out);
  return out;
}

std::vector<BomNode> rebuild_bom(const std::vector<AssemblyWorkOrder>& orders) {
  std::vector<BomNode> nodes(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto& o = orders[i];
    BomNode& n = nodes[i];
    n.item_id = o.output.item_id;
    n.where = o.place;
    n.count = o.output.count;
    n.agent_type = o.agent_type;
    n.processing_time = o.processing_time;
    n.co_products = o.co_products;
    n.custom_fields = o.custom_fields;
    for (const auto& in : o.inputs) n.parts.push_back(BomNode::Part{in.item_id, in.count, std::nullopt});
  }
  // Children always follow their parent in a flattened list, so walking
  // backwards completes every subtree before it is attached.
  std::vector<bool> attached(orders.size(), false);
  for (std::size_t i = orders.size(); i-- > 0;) {
    BomNode& self = nodes[i];
    const std::size_t k = self.children.size();
    if (k > 1) {
      std::reverse(self.children.begin(), self.children.end());
      for (auto& part : self.parts) {
        if (part.child) part.child = k - 1 - *part.child;
      }
    }
    const auto& o = orders[i];
    if (!o.parent || *o.parent >= i) continue;
    BomNode& parent = nodes[*o.parent];
    for (auto& part : parent.parts) {
      if (part.item_id != o.output.item_id || part.child) continue;
      self.count = part.count;
      part.child = parent.children.size();
      parent.children.push_back(std::move(self));
      attached[i] = true;
      break;
    }
  }
  std::vector<BomNode> forest;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (!attached[i]) forest.push_back(std::move(nodes[i]));
  }
  return forest;
}

std::vector<AssemblyWorkOrder> parse_assembly_orders(std::string_view json_text) {
  return flatten_bom(parse_bom_forest(json_text));
}

std::string serialize_assembly_orders(const std::vector<AssemblyWorkOrder>& orders) {
  Json root = Json::object();
  for (const auto& node : rebuild_bom(orders)) root[node.item_id] = node_to_json(node);
  return root.dump(2) + "\n";
}

Layout parse_layout(std::string_view json_text) {
  const Json root = parse_document(json_text, "layout");
  if (!root.is_object()) throw Error(ErrorCode::MalformedDocument, "", "layout must be an object");

  Layout layout;
  layout.parameters = parse_parameters(root);
  const Parameters& params = layout.parameters;

  std::set<std::string> ids;
  std::set<VoxelCoord> occupied;

  auto rec_it = root.find("receptors");
  if (rec_it != root.end() && !rec_it->is_array()) {
    throw Error(ErrorCode::InvalidValue, "receptors", "expected an array");
  }
  if (rec_it == root.end() || rec_it->empty()) {
    throw Error(ErrorCode::ReceptorRequired, "receptors", "a layout needs at least one receptor");
  }
  for (std::size_t i = 0; i < rec_it->size(); ++i) {
    const auto path = index_path("receptors", i);
    const Json& r = (*rec_it)[i];
    if (!r.is_object()) throw Error(ErrorCode::InvalidValue, path, "expected an object");
    Receptor rec;
    rec.id = json_string(require_key(r, "id", path), join_path(path, "id"));
    rec.coord = json_coord(r, path);
    rec.groups = json_string_list(r, "groups", path, false);
    if (!ids.insert(rec.id).second) throw Error(ErrorCode::DuplicateId, path, "receptor ID '" + rec.id + "' reused");
    if (!params.contains(rec.coord)) {
      throw Error(ErrorCode::OutOfGrid, path, "receptor '" + rec.id + "' at " + coord_text(rec.coord) + " is outside the grid");
    }
    if (!occupied.insert(rec.coord).second) {
      throw Error(ErrorCode::CoordConflict, path, "receptor '" + rec.id + "' shares voxel " + coord_text(rec.coord));
    }
    layout.receptors.push_back(std::move(rec));
  }

  std::set<std::string> agent_ids;
  auto ag_it = root.find("agents");
  if (ag_it != root.end() && !ag_it->is_array()) throw Error(ErrorCode::InvalidValue, "agents", "expected an array");
  if (ag_it == root.end() || ag_it->empty()) {
    throw Error(ErrorCode::AgentRequired, "agents", "a layout needs at least one agent");
  }
  for (std::size_t i = 0; i < ag_it->size(); ++i) {
    const auto path = index_path("agents", i);
    const Json& a = (*ag_it)[i];
    if (!a.is_object()) throw Error(ErrorCode::InvalidValue, path, "expected an object");
    Agent agent;
    agent.id = json_string(require_key(a, "id", path), join_path(path, "id"));
    agent.type = json_string(require_key(a, "type", path), join_path(path, "type"));
    agent.coord = json_coord(a, path);
    agent.groups = json_string_list(a, "groups", path, false);
    if (!agent_ids.insert(agent.id).second) {
      throw Error(ErrorCode::DuplicateId, path, "agent ID '" + agent.id + "' reused");
    }
    if (!params.contains(agent.coord)) {
      throw Error(ErrorCode::OutOfGrid, path, "agent '" + agent.id + "' at " + coord_text(agent.coord) + " is outside the grid");
    }
    layout.agents.push_back(std::move(agent));
  }

  if (auto f = root.find("material_flows"); f != root.end()) {
    if (!f->is_array()) throw Error(ErrorCode::InvalidValue, "material_flows", "expected an array");
    for (std::size_t i = 0; i < f->size(); ++i) {
      const auto path = index_path("material_flows", i);
      const Json& m = (*f)[i];
      if (!m.is_object()) throw Error(ErrorCode::InvalidValue, path, "expected an object");
      MaterialFlow flow;
      flow.source = json_string(require_key(m, "source", path), join_path(path, "source"));
      flow.destination = json_string(require_key(m, "destination", path), join_path(path, "destination"));
      flow.agent_types = json_string_list(m, "agent_types", path, true);
      if (flow.agent_types.empty()) {
        throw Error(ErrorCode::MissingField, join_path(path, "agent_types"), "a flow needs at least one agent type");
      }
      layout.material_flows.push_back(std::move(flow));
    }
  }
  return layout;
}

std::string serialize_layout(const SimulationModel& model) {
  const Parameters& p = model.parameters;
  Json params = Json::object();
  params["width"] = p.width;
  params["depth"] = p.depth;
  params["height"] = p.height;
  params["voxel_edge_length"] = p.voxel_edge_length;
  params["default_processing_time"] = p.default_processing_time;
  params["random_seed"] = p.random_seed;
  Json types = Json::array();
  for (const auto& [id, t] : p.agent_types) {
    Json jt = Json::object();
    jt["id"] = t.id;
    jt["speed"] = t.speed;
    jt["load_time"] = t.base_load_time;
    jt["unload_time"] = t.base_unload_time;
    jt["elevation_penalty"] = t.elevation_penalty_per_level;
    jt["capacity"] = t.capacity;
    jt["groups"] = t.groups;
    types.push_back(std::move(jt));
  }
  params["agent_types"] = std::move(types);

  Json receptors = Json::array();
  for (const auto& r : model.receptors) {
    receptors.push_back(Json{{"id", r.id}, {"x", r.coord.x}, {"y", r.coord.y}, {"z", r.coord.z}, {"groups", r.groups}});
  }
  Json agents = Json::array();
  for (const auto& a : model.agents) {
    agents.push_back(Json{{"id", a.id}, {"type", a.type}, {"x", a.coord.x}, {"y", a.coord.y}, {"z", a.coord.z},
                          {"groups", a.groups}});
  }
  Json flows = Json::array();
  for (const auto& f : model.material_flows) {
    flows.push_back(Json{{"source", f.source}, {"destination", f.destination}, {"agent_types", f.agent_types}});
  }

  Json root = Json::object();
  root["parameters"] = std::move(params);
  root["receptors"] = std::move(receptors);
  root["agents"] = std::move(agents);
  root["material_flows"] = std::move(flows);
  return root.dump(2) + "\n";
}

}  // namespace voxsim
