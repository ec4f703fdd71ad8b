#include "voxsim/order_book.hpp"

#include <algorithm>

#include "voxsim/format.hpp"

namespace voxsim {

std::string_view to_string(OrderStatus status) {
  switch (status) {
    case OrderStatus::pending: return "pending";
    case OrderStatus::active: return "active";
    case OrderStatus::completed: return "completed";
  }
  return "pending";
}

std::string_view to_string(GenerationRule rule) {
  return rule == GenerationRule::assembly ? "assembly" : "material_flow";
}

namespace {

std::string order_where(OrderId id) { return "order " + std::to_string(id); }

}  // namespace

void OrderBook::add_flow(std::map<Key, Count>& m, std::size_t r, const std::string& item, Count delta) {
  auto& v = m[{r, item}];
  v += delta;
  if (v == 0) m.erase({r, item});
}

OrderId OrderBook::add_transport(TransportationWorkOrder order, std::optional<std::size_t> source,
                                 std::optional<std::size_t> destination) {
  const OrderId id = next_id_++;
  TransportRecord rec;
  rec.id = id;
  rec.order = std::move(order);
  transports_.emplace(id, std::move(rec));
  pending_transports_.insert(id);
  if (source && destination) bind(id, *source, *destination);
  return id;
}

OrderId OrderBook::add_assembly(AssemblyWorkOrder order, std::size_t place) {
  const OrderId id = next_id_++;
  AssemblyRecord rec;
  rec.id = id;
  rec.order = std::move(order);
  rec.place = place;
  assemblies_.emplace(id, std::move(rec));
  pending_assemblies_.insert(id);
  return id;
}

TransportRecord& OrderBook::transport_mut(OrderId id) {
  auto it = transports_.find(id);
  if (it == transports_.end()) throw Error(ErrorCode::UnknownOrder, order_where(id), "no such transportation order");
  return it->second;
}

const TransportRecord& OrderBook::transport(OrderId id) const {
  auto it = transports_.find(id);
  if (it == transports_.end()) throw Error(ErrorCode::UnknownOrder, order_where(id), "no such transportation order");
  return it->second;
}

const AssemblyRecord& OrderBook::assembly(OrderId id) const {
  auto it = assemblies_.find(id);
  if (it == assemblies_.end()) throw Error(ErrorCode::UnknownOrder, order_where(id), "no such assembly order");
  return it->second;
}

OrderStatus OrderBook::status(OrderId id) const {
  if (auto t = transports_.find(id); t != transports_.end()) return t->second.status;
  return assembly(id).status;
}

void OrderBook::bind(OrderId id, std::size_t source, std::size_t destination) {
  TransportRecord& rec = transport_mut(id);
  if (rec.status != OrderStatus::pending || rec.source) {
    throw Error(ErrorCode::IllegalTransition, order_where(id), "only unbound pending orders can be bound");
  }
  rec.source = source;
  rec.destination = destination;
  const auto& item = rec.order.item_id;
  const Count n = rec.order.count;
  add_flow(inbound_, destination, item, n);
  if (rec.order.origin == OrderOrigin::self_generated) add_flow(inbound_generated_, destination, item, n);
  inbound_total_[destination] += n;
  add_flow(outbound_, source, item, n);
}

void OrderBook::claim(OrderId id) {
  if (auto t = transports_.find(id); t != transports_.end()) {
    TransportRecord& rec = t->second;
    if (rec.status != OrderStatus::pending) {
      throw Error(ErrorCode::IllegalTransition, order_where(id),
                  "cannot claim an order that is " + std::string(to_string(rec.status)));
    }
    if (!rec.source) throw Error(ErrorCode::IllegalTransition, order_where(id), "claimed before binding receptors");
    rec.status = OrderStatus::active;
    pending_transports_.erase(id);
    active_.insert(id);
    add_flow(claimed_, *rec.source, rec.order.item_id, rec.order.count);
    return;
  }
  auto a = assemblies_.find(id);
  if (a == assemblies_.end()) throw Error(ErrorCode::UnknownOrder, order_where(id), "no such order");
  if (a->second.status != OrderStatus::pending) {
    throw Error(ErrorCode::IllegalTransition, order_where(id),
                "cannot claim an order that is " + std::string(to_string(a->second.status)));
  }
  a->second.status = OrderStatus::active;
  pending_assemblies_.erase(id);
  active_.insert(id);
}

void OrderBook::mark_loaded(OrderId id) {
  TransportRecord& rec = transport_mut(id);
  if (rec.status != OrderStatus::active || rec.loaded) {
    throw Error(ErrorCode::IllegalTransition, order_where(id), "only active, unloaded orders can be loaded");
  }
  rec.loaded = true;
  const auto& item = rec.order.item_id;
  add_flow(outbound_, *rec.source, item, -rec.order.count);
  add_flow(claimed_, *rec.source, item, -rec.order.count);
}

void OrderBook::complete(OrderId id, Seconds time) {
  if (!completed_.empty() && time < completed_.back().time) {
    throw Error(ErrorCode::IllegalTransition, order_where(id), "completion time runs backwards");
  }
  if (auto t = transports_.find(id); t != transports_.end()) {
    TransportRecord& rec = t->second;
    if (rec.status != OrderStatus::active) {
      throw Error(ErrorCode::IllegalTransition, order_where(id),
                  "cannot complete an order that is " + std::string(to_string(rec.status)));
    }
    // A no-op move (source == destination) completes without a load.
    if (!rec.loaded) mark_loaded(id);
    const auto& item = rec.order.item_id;
    add_flow(inbound_, *rec.destination, item, -rec.order.count);
    if (rec.order.origin == OrderOrigin::self_generated) {
      add_flow(inbound_generated_, *rec.destination, item, -rec.order.count);
    }
    if ((inbound_total_[*rec.destination] -= rec.order.count) == 0) inbound_total_.erase(*rec.destination);
    rec.status = OrderStatus::completed;
  } else {
    auto a = assemblies_.find(id);
    if (a == assemblies_.end()) throw Error(ErrorCode::UnknownOrder, order_where(id), "no such order");
    if (a->second.status != OrderStatus::active) {
      throw Error(ErrorCode::IllegalTransition, order_where(id),
                  "cannot complete an order that is " + std::string(to_string(a->second.status)));
    }
    a->second.status = OrderStatus::completed;
  }
  active_.erase(id);
  // Keep (time, id) order among equal timestamps.
  auto pos = completed_.end();
  while (pos != completed_.begin() && std::prev(pos)->time == time && std::prev(pos)->id > id) --pos;
  completed_.insert(pos, Completion{id, time});
}

void OrderBook::log_generation(Seconds time, OrderId id, GenerationRule rule) {
  generation_log_.push_back(GenerationEntry{time, id, transport(id).order, rule});
}

Count OrderBook::inbound(std::size_t receptor, const std::string& item) const {
  auto it = inbound_.find({receptor, item});
  return it == inbound_.end() ? 0 : it->second;
}

Count OrderBook::inbound_self_generated(std::size_t receptor, const std::string& item) const {
  auto it = inbound_generated_.find({receptor, item});
  return it == inbound_generated_.end() ? 0 : it->second;
}

Count OrderBook::inbound_total(std::size_t receptor) const {
  auto it = inbound_total_.find(receptor);
  return it == inbound_total_.end() ? 0 : it->second;
}

Count OrderBook::outbound(std::size_t receptor, const std::string& item) const {
  auto it = outbound_.find({receptor, item});
  return it == outbound_.end() ? 0 : it->second;
}

Count OrderBook::claimed_outbound(std::size_t receptor, const std::string& item) const {
  auto it = claimed_.find({receptor, item});
  return it == claimed_.end() ? 0 : it->second;
}

std::string generation_log_csv(const OrderBook& book) {
  std::string out = "time,item,count,source,destination,rule\n";
  for (const auto& g : book.generation_log()) {
    out += format_number(g.time) + "," + g.order.item_id + "," + std::to_string(g.order.count) + "," +
           g.order.source + "," + g.order.destination + "," + std::string(to_string(g.rule)) + "\n";
  }
  return out;
}

}  // namespace voxsim
