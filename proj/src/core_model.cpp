#include "voxsim/core_model.hpp"

#include <algorithm>

namespace voxsim {

void Inventory::add(const ItemStack& stack) {
  if (stack.count < 0) {
    throw Error(ErrorCode::InvalidValue, stack.item_id, "negative stack count");
  }
  if (stack.count == 0) return;
  items_[stack.item_id] += stack.count;
}

void Inventory::remove(const std::string& item_id, Count count) {
  if (count < 0) throw Error(ErrorCode::InvalidValue, item_id, "negative removal count");
  if (count == 0) return;
  auto it = items_.find(item_id);
  const Count held = it == items_.end() ? 0 : it->second;
  if (held < count) {
    throw Error(ErrorCode::InsufficientItems, item_id,
                "need " + std::to_string(count) + ", holding " + std::to_string(held));
  }
  it->second -= count;
  if (it->second == 0) items_.erase(it);
}

Count Inventory::count_of(const std::string& item_id) const {
  auto it = items_.find(item_id);
  return it == items_.end() ? 0 : it->second;
}

Count Inventory::total() const {
  Count sum = 0;
  for (const auto& [id, n] : items_) sum += n;
  return sum;
}

Inventory add_items(Inventory inventory, const ItemStack& stack) {
  inventory.add(stack);
  return inventory;
}

Inventory remove_items(Inventory inventory, const std::string& item_id, Count count) {
  inventory.remove(item_id, count);
  return inventory;
}

std::string_view to_string(AgentStatus status) {
  switch (status) {
    case AgentStatus::idle: return "idle";
    case AgentStatus::moving: return "moving";
    case AgentStatus::loading: return "loading";
    case AgentStatus::unloading: return "unloading";
    case AgentStatus::assembling: return "assembling";
  }
  return "idle";
}

ModelIndex::ModelIndex(const SimulationModel& model) : model_(&model) {
  for (std::size_t i = 0; i < model.receptors.size(); ++i) {
    const auto& r = model.receptors[i];
    receptor_by_id_.emplace(r.id, i);
    for (const auto& g : r.groups) receptors_by_group_[g].push_back(i);
  }
  for (std::size_t i = 0; i < model.agents.size(); ++i) agent_by_id_.emplace(model.agents[i].id, i);

  const auto by_id = [&model](std::size_t a, std::size_t b) {
    return model.receptors[a].id < model.receptors[b].id;
  };
  for (auto& [group, members] : receptors_by_group_) {
    std::sort(members.begin(), members.end(), by_id);
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
}

std::optional<std::size_t> ModelIndex::receptor_index(std::string_view id) const {
  auto it = receptor_by_id_.find(std::string(id));
  if (it == receptor_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ModelIndex::agent_index(std::string_view id) const {
  auto it = agent_by_id_.find(std::string(id));
  if (it == agent_by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> ModelIndex::resolve_location(std::string_view loc) const {
  if (auto exact = receptor_index(loc)) return {*exact};
  auto it = receptors_by_group_.find(std::string(loc));
  if (loc.empty() || it == receptors_by_group_.end()) {
    throw Error(ErrorCode::UnknownLocation, std::string(loc),
                "matches no receptor ID and no receptor group");
  }
  return it->second;
}

bool ModelIndex::resolves_location(std::string_view loc) const {
  return receptor_index(loc).has_value() || receptors_by_group_.count(std::string(loc)) > 0;
}

std::vector<std::string> ModelIndex::resolve_agent_type(std::string_view ref) const {
  const auto& types = model_->parameters.agent_types;
  if (!ref.empty()) {
    if (types.count(std::string(ref))) return {std::string(ref)};
    std::vector<std::string> out;
    for (const auto& [id, type] : types) {  // std::map: already ascending
      if (std::find(type.groups.begin(), type.groups.end(), ref) != type.groups.end()) {
        out.push_back(id);
      }
    }
    if (!out.empty()) return out;
  }
  throw Error(ErrorCode::UnknownAgentType, std::string(ref),
              "matches no agent type ID and no agent type group");
}

bool ModelIndex::agent_matches(std::size_t agent, std::string_view ref) const {
  if (ref.empty()) return true;
  const Agent& a = model_->agents[agent];
  if (a.type == ref) return true;
  if (std::find(a.groups.begin(), a.groups.end(), ref) != a.groups.end()) return true;
  auto it = model_->parameters.agent_types.find(a.type);
  if (it == model_->parameters.agent_types.end()) return false;
  const auto& tg = it->second.groups;
  return std::find(tg.begin(), tg.end(), ref) != tg.end();
}

const std::vector<std::size_t>& ModelIndex::agents_matching(std::string_view ref) const {
  const std::string key(ref);
  auto it = agents_by_ref_.find(key);
  if (it != agents_by_ref_.end()) return it->second;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < model_->agents.size(); ++i) {
    if (agent_matches(i, ref)) out.push_back(i);
  }
  std::sort(out.begin(), out.end(), [this](std::size_t a, std::size_t b) {
    return model_->agents[a].id < model_->agents[b].id;
  });
  return agents_by_ref_.emplace(key, std::move(out)).first->second;
}

const AgentType& ModelIndex::type_of(std::size_t agent) const {
  const auto& a = model_->agents[agent];
  auto it = model_->parameters.agent_types.find(a.type);
  if (it == model_->parameters.agent_types.end()) {
    throw Error(ErrorCode::UnknownAgentType, a.id, "agent type '" + a.type + "' is not declared");
  }
  return it->second;
}

std::vector<std::string> resolve_location(std::string_view loc, const SimulationModel& model) {
  ModelIndex index(model);
  std::vector<std::string> out;
  for (auto i : index.resolve_location(loc)) out.push_back(model.receptors[i].id);
  return out;
}

std::vector<std::string> resolve_agent_type(std::string_view ref, const SimulationModel& model) {
  return ModelIndex(model).resolve_agent_type(ref);
}

std::map<std::string, Count> initial_item_totals(const SimulationModel& model) {
  std::map<std::string, Count> totals;
  for (const auto& loc : model.item_locations) totals[loc.item_id] += loc.count;
  return totals;
}

}  // namespace voxsim
