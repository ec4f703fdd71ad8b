#pragma once

// Readers and writers for the four input files:
//
//   transportation_orders.csv  ItemIDs,pcs,DestLocID,SourceLocID,AgentType[,BatchID][,custom...]
//   assembly_orders.json       { "<ProductID>": { "parts": {...}, "where": "...", "count": n } }
//   layout.json                parameters / receptors / agents / material_flows
//   item_locations.csv         ReceptorID,ItemID,Count
//
// Parsers throw voxsim::Error on the first problem they meet; `where` carries
// the row number (CSV) or the JSON path. validate_model() collects every
// semantic finding at once.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voxsim/core_model.hpp"

namespace voxsim {

struct Layout {
  std::vector<Receptor> receptors;
  std::vector<Agent> agents;
  Parameters parameters;
  std::vector<MaterialFlow> material_flows;
};

std::vector<TransportationWorkOrder> parse_transportation_orders(std::string_view csv_text);

// Reads the nested product trees without flattening them.
std::vector<BomNode> parse_bom_forest(std::string_view json_text);
// Depth-first, parent before children; a child's output count is its
// per-unit need times the parent's output count.
std::vector<AssemblyWorkOrder> flatten_bom(const std::vector<BomNode>& forest);
// Inverse of flatten_bom, driven by the `parent` links.
std::vector<BomNode> rebuild_bom(const std::vector<AssemblyWorkOrder>& orders);

std::vector<AssemblyWorkOrder> parse_assembly_orders(std::string_view json_text);

Layout parse_layout(std::string_view json_text);

// Duplicate (receptor, item) rows are merged; first-seen order is kept.
std::vector<ItemLocation> parse_item_locations(std::string_view csv_text);

std::vector<Diagnostic> validate_model(const SimulationModel& model);

struct ModelFiles {
  std::string layout;
  std::optional<std::string> transport_orders;
  std::optional<std::string> assembly_orders;
  std::optional<std::string> item_locations;

  friend bool operator==(const ModelFiles&, const ModelFiles&) = default;
};

std::string serialize_layout(const SimulationModel& model);
std::string serialize_transportation_orders(const std::vector<TransportationWorkOrder>& orders);
std::string serialize_assembly_orders(const std::vector<AssemblyWorkOrder>& orders);
std::string serialize_item_locations(const std::vector<ItemLocation>& locations);

// Canonical text for every part of the model. Order files are emitted only
// when the model has entries for them.
ModelFiles serialize_model(const SimulationModel& model);

struct LoadResult {
  std::optional<SimulationModel> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

// Parses every present file, then validates. Parse failures are reported as
// diagnostics prefixed with `label` of the failing file.
LoadResult parse_model(const ModelFiles& files);

struct ModelPaths {
  std::filesystem::path layout;
  std::optional<std::filesystem::path> transport_orders;
  std::optional<std::filesystem::path> assembly_orders;
  std::optional<std::filesystem::path> item_locations;
};

LoadResult load_model(const ModelPaths& paths);

void write_model(const SimulationModel& model, const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace voxsim
