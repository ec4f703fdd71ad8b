#include <array>
#include <map>

#include "csv.hpp"
#include "voxsim/ingest.hpp"

namespace voxsim {

namespace {

constexpr std::string_view kItem = "ItemIDs";
constexpr std::string_view kPcs = "pcs";
constexpr std::string_view kDest = "DestLocID";
constexpr std::string_view kSource = "SourceLocID";
constexpr std::string_view kAgentType = "AgentType";
constexpr std::string_view kBatch = "BatchID";

std::size_t require_column(const csv::Table& t, std::string_view name) {
  auto c = t.column(name);
  if (c == std::string::npos) {
    throw Error(ErrorCode::MissingColumn, csv::row_where(1),
                "header lacks mandatory column '" + std::string(name) + "'");
  }
  return c;
}

const std::string& non_empty(const csv::Row& row, std::size_t col, std::string_view name) {
  const auto& f = row.fields[col];
  if (f.empty()) {
    throw Error(ErrorCode::EmptyField, csv::row_where(row.line),
                "column '" + std::string(name) + "' is empty");
  }
  return f;
}

Count positive_count(const csv::Row& row, std::size_t col, std::string_view name) {
  const auto where = csv::row_where(row.line);
  Count n = csv::parse_count(non_empty(row, col, name), where);
  if (n < 1) {
    throw Error(ErrorCode::NonPositiveCount, where, "count must be at least 1, got " + row.fields[col]);
  }
  return n;
}

}  // namespace

std::vector<TransportationWorkOrder> parse_transportation_orders(std::string_view csv_text) {
  const auto table = csv::read(csv_text);
  const auto c_item = require_column(table, kItem);
  const auto c_pcs = require_column(table, kPcs);
  const auto c_dest = require_column(table, kDest);
  const auto c_src = require_column(table, kSource);
  const auto c_type = require_column(table, kAgentType);
  const auto c_batch = table.column(kBatch);

  std::vector<TransportationWorkOrder> orders;
  orders.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    TransportationWorkOrder o;
    o.item_id = non_empty(row, c_item, kItem);
    o.count = positive_count(row, c_pcs, kPcs);
    o.destination = non_empty(row, c_dest, kDest);
    o.source = non_empty(row, c_src, kSource);
    o.agent_type = non_empty(row, c_type, kAgentType);
    if (c_batch != std::string::npos && !row.fields[c_batch].empty()) o.batch_id = row.fields[c_batch];
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == c_item || c == c_pcs || c == c_dest || c == c_src || c == c_type || c == c_batch) continue;
      // An empty custom cell means "not set" for this row.
      if (!row.fields[c].empty()) o.custom_fields[table.header[c]] = row.fields[c];
    }
    o.origin = OrderOrigin::user;
    orders.push_back(std::move(o));
  }
  return orders;
}

std::vector<ItemLocation> parse_item_locations(std::string_view csv_text) {
  const auto table = csv::read(csv_text);
  const auto c_rec = require_column(table, "ReceptorID");
  const auto c_item = require_column(table, "ItemID");
  const auto c_count = require_column(table, "Count");

  std::vector<ItemLocation> out;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  for (const auto& row : table.rows) {
    ItemLocation loc;
    loc.receptor_id = non_empty(row, c_rec, "ReceptorID");
    loc.item_id = non_empty(row, c_item, "ItemID");
    loc.count = positive_count(row, c_count, "Count");
    auto key = std::make_pair(loc.receptor_id, loc.item_id);
    if (auto it = seen.find(key); it != seen.end()) {
      auto& merged = out[it->second].count;
      if (merged > std::numeric_limits<Count>::max() - loc.count) {
        throw Error(ErrorCode::InvalidValue, csv::row_where(row.line), "merged count overflows");
      }
      merged += loc.count;
      continue;
    }
    seen.emplace(std::move(key), out.size());
    out.push_back(std::move(loc));
  }
  return out;
}

std::string serialize_transportation_orders(const std::vector<TransportationWorkOrder>& orders) {
  bool any_batch = false;
  std::map<std::string, bool> custom;
  for (const auto& o : orders) {
    any_batch = any_batch || o.batch_id.has_value();
    for (const auto& [k, v] : o.custom_fields) custom[k] = true;
  }
  std::vector<std::string> header{std::string(kItem), std::string(kPcs), std::string(kDest),
                                  std::string(kSource), std::string(kAgentType)};
  if (any_batch) header.emplace_back(kBatch);
  for (const auto& [k, unused] : custom) header.push_back(k);

  std::string out = csv::join(header) + "\n";
  for (const auto& o : orders) {
    std::vector<std::string> f{o.item_id, std::to_string(o.count), o.destination, o.source, o.agent_type};
    if (any_batch) f.push_back(o.batch_id.value_or(""));
    for (const auto& [k, unused] : custom) {
      auto it = o.custom_fields.find(k);
      f.push_back(it == o.custom_fields.end() ? std::string() : it->second);
    }
    out += csv::join(f) + "\n";
  }
  return out;
}

std::string serialize_item_locations(const std::vector<ItemLocation>& locations) {
  std::string out = "ReceptorID,ItemID,Count\n";
  for (const auto& l : locations) {
    out += l.receptor_id + "," + l.item_id + "," + std::to_string(l.count) + "\n";
  }
  return out;
}

}  // namespace voxsim
