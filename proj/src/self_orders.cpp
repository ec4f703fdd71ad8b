#include <algorithm>

#include "voxsim/order_book.hpp"

namespace voxsim {

using NeedKey = std::pair<std::size_t, std::string>;

std::map<NeedKey, Count> assembly_needs(const OrderBook& book) {
  std::map<NeedKey, Count> needs;
  for (const auto& [id, rec] : book.assemblies()) {
    // A started assembly still holds its inputs until it completes.
    if (rec.status == OrderStatus::completed) continue;
    for (const auto& in : rec.order.inputs) needs[{rec.place, in.item_id}] += rec.order.total_need(in);
  }
  return needs;
}

namespace {

Count lookup(const std::map<NeedKey, Count>& m, std::size_t r, const std::string& item) {
  auto it = m.find({r, item});
  return it == m.end() ? 0 : it->second;
}

struct ResolvedFlow {
  const MaterialFlow* flow;
  std::vector<std::size_t> sources;
  std::vector<std::size_t> destinations;
};

class Generator {
 public:
  Generator(const GenerationView& view, const OrderBook& book)
      : view_(view), book_(book), model_(view.index.model()), needs_(assembly_needs(book)) {
    for (const auto& f : model_.material_flows) {
      flows_.push_back(ResolvedFlow{&f, view.index.resolve_location(f.source),
                                    view.index.resolve_location(f.destination)});
    }
  }

  GenerationResult run() {
    assembly_rule();
    material_flow_rule();
    return std::move(result_);
  }

 private:
  const std::string& id_of(std::size_t r) const { return model_.receptors[r].id; }

  Count held(std::size_t r, const std::string& item) const { return view_.inventories[r].count_of(item); }

  // Stock at `r` nobody has spoken for yet: not leaving on another order and
  // not kept back for an assembly placed at `r`.
  Count spare(std::size_t r, const std::string& item) const {
    return held(r, item) - book_.outbound(r, item) - lookup(taken_, r, item) - lookup(needs_, r, item);
  }

  void emit(const std::string& item, Count count, std::size_t src, std::size_t dst, std::string agent_type,
            GenerationRule rule) {
    TransportationWorkOrder o;
    o.item_id = item;
    o.count = count;
    o.source = id_of(src);
    o.destination = id_of(dst);
    o.agent_type = std::move(agent_type);
    o.origin = OrderOrigin::self_generated;
    taken_[{src, item}] += count;
    incoming_[dst] += count;
    result_.orders.push_back(GeneratedOrder{std::move(o), src, dst, rule});
  }

  auto by_id() const {
    return [this](std::size_t a, std::size_t b) { return id_of(a) < id_of(b); };
  }

  std::string supply_agent_type(std::size_t src, std::size_t place, const std::string& item) const {
    for (const auto& rf : flows_) {
      const bool from = std::binary_search(rf.sources.begin(), rf.sources.end(), src, by_id());
      const bool to = std::binary_search(rf.destinations.begin(), rf.destinations.end(), place, by_id());
      if (from && to) return rf.flow->agent_types.front();
    }
    for (const auto& [id, rec] : book_.assemblies()) {
      if (rec.status != OrderStatus::pending || rec.place != place || !rec.order.agent_type) continue;
      for (const auto& in : rec.order.inputs) {
        if (in.item_id == item) return *rec.order.agent_type;
      }
    }
    return {};
  }

  bool exists_anywhere(const std::string& item) const {
    for (const auto& inv : view_.inventories) {
      if (inv.count_of(item) > 0) return true;
    }
    if (auto it = view_.in_transit.find(item); it != view_.in_transit.end() && it->second > 0) return true;
    for (const auto& [id, rec] : book_.assemblies()) {
      if (rec.status != OrderStatus::completed && rec.order.output.item_id == item) return true;
    }
    return false;
  }

  void assembly_rule() {
    std::vector<std::pair<NeedKey, Count>> keyed(needs_.begin(), needs_.end());
    std::sort(keyed.begin(), keyed.end(), [this](const auto& a, const auto& b) {
      const auto& ia = id_of(a.first.first);
      const auto& ib = id_of(b.first.first);
      return ia != ib ? ia < ib : a.first.second < b.first.second;
    });

    for (const auto& [key, need] : keyed) {
      const auto& [place, item] = key;
      const Count present = std::max<Count>(0, held(place, item) - book_.outbound(place, item));
      Count deficit = need - present - book_.inbound(place, item);
      if (deficit <= 0) continue;

      std::vector<std::pair<Count, std::size_t>> sources;
      for (std::size_t r = 0; r < view_.inventories.size(); ++r) {
        if (r == place) continue;
        const Count s = spare(r, item);
        if (s > 0) sources.emplace_back(s, r);
      }
      std::sort(sources.begin(), sources.end(), [this](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : id_of(a.second) < id_of(b.second);
      });
      for (const auto& [available, src] : sources) {
        if (deficit <= 0) break;
        const Count take = std::min(available, deficit);
        emit(item, take, src, place, supply_agent_type(src, place, item), GenerationRule::assembly);
        deficit -= take;
      }
      if (deficit > 0 && sources.empty() && !exists_anywhere(item)) {
        result_.diagnostics.push_back(Diagnostic{
            Severity::error, ErrorCode::UnsourceableItem, "receptor " + id_of(place),
            "assembly needs " + std::to_string(deficit) + " more of '" + item +
                "', which exists nowhere and is produced by no open assembly order"});
      }
    }
  }

  void material_flow_rule() {
    for (const auto& rf : flows_) {
      for (std::size_t src : rf.sources) {
        for (const auto& [item, count] : view_.inventories[src].items()) {
          const Count uncovered = spare(src, item);
          if (uncovered <= 0) continue;
          std::optional<std::size_t> dst;
          Count best = 0;
          for (std::size_t d : rf.destinations) {  // ascending ID, so ties keep the first
            if (d == src) continue;
            const Count load = view_.inventories[d].total() + book_.inbound_total(d) + incoming(d);
            if (!dst || load < best) {
              dst = d;
              best = load;
            }
          }
          if (!dst) continue;
          emit(item, uncovered, src, *dst, rf.flow->agent_types.front(), GenerationRule::material_flow);
        }
      }
    }
  }

  Count incoming(std::size_t r) const {
    auto it = incoming_.find(r);
    return it == incoming_.end() ? 0 : it->second;
  }

  const GenerationView& view_;
  const OrderBook& book_;
  const SimulationModel& model_;
  std::map<NeedKey, Count> needs_;
  std::vector<ResolvedFlow> flows_;
  std::map<NeedKey, Count> taken_;
  std::map<std::size_t, Count> incoming_;
  GenerationResult result_;
};

}  // namespace

GenerationResult generate_self_orders(const GenerationView& view, const OrderBook& book) {
  return Generator(view, book).run();
}

}  // namespace voxsim
