#include <fstream>
#include <sstream>

#include "voxsim/ingest.hpp"

namespace voxsim {

ModelFiles serialize_model(const SimulationModel& model) {
  ModelFiles files;
  files.layout = serialize_layout(model);
  if (!model.transport_orders.empty()) files.transport_orders = serialize_transportation_orders(model.transport_orders);
  if (!model.assembly_orders.empty()) files.assembly_orders = serialize_assembly_orders(model.assembly_orders);
  if (!model.item_locations.empty()) files.item_locations = serialize_item_locations(model.item_locations);
  return files;
}

namespace {

template <typename F>
bool parse_part(std::string_view label, std::vector<Diagnostic>& diags, F&& body) {
  try {
    body();
    return true;
  } catch (const Error& e) {
    Diagnostic d = e.to_diagnostic();
    d.where = d.where.empty() ? std::string(label) : std::string(label) + ":" + d.where;
    diags.push_back(std::move(d));
  } catch (const std::exception& e) {
    diags.push_back(Diagnostic{Severity::error, ErrorCode::MalformedDocument, std::string(label), e.what()});
  }
  return false;
}

}  // namespace

LoadResult parse_model(const ModelFiles& files) {
  LoadResult result;
  SimulationModel model;
  bool ok = parse_part("layout.json", result.diagnostics, [&] {
    Layout layout = parse_layout(files.layout);
    model.parameters = std::move(layout.parameters);
    model.receptors = std::move(layout.receptors);
    model.agents = std::move(layout.agents);
    model.material_flows = std::move(layout.material_flows);
  });
  if (files.transport_orders) {
    ok &= parse_part("transportation_orders.csv", result.diagnostics,
                     [&] { model.transport_orders = parse_transportation_orders(*files.transport_orders); });
  }
  if (files.assembly_orders) {
    ok &= parse_part("assembly_orders.json", result.diagnostics,
                     [&] { model.assembly_orders = parse_assembly_orders(*files.assembly_orders); });
  }
  if (files.item_locations) {
    ok &= parse_part("item_locations.csv", result.diagnostics,
                     [&] { model.item_locations = parse_item_locations(*files.item_locations); });
  }
  if (!ok) return result;

  auto diags = validate_model(model);
  result.diagnostics.insert(result.diagnostics.end(), diags.begin(), diags.end());
  result.model = std::move(model);
  return result;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedDocument, path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::MalformedDocument, path.string(), "cannot write file");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

LoadResult load_model(const ModelPaths& paths) {
  ModelFiles files;
  LoadResult failed;
  auto read = [&](const std::filesystem::path& p, std::string& dst) {
    try {
      dst = read_text_file(p);
      return true;
    } catch (const Error& e) {
      failed.diagnostics.push_back(e.to_diagnostic());
      return false;
    }
  };
  bool ok = read(paths.layout, files.layout);
  auto optional = [&](const std::optional<std::filesystem::path>& p, std::optional<std::string>& dst) {
    if (!p) return;
    std::string text;
    if (read(*p, text)) {
      dst = std::move(text);
    } else {
      ok = false;
    }
  };
  optional(paths.transport_orders, files.transport_orders);
  optional(paths.assembly_orders, files.assembly_orders);
  optional(paths.item_locations, files.item_locations);
  if (!ok) return failed;
  return parse_model(files);
}

void write_model(const SimulationModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const ModelFiles files = serialize_model(model);
  write_text_file(dir / "layout.json", files.layout);
  if (files.transport_orders) write_text_file(dir / "transportation_orders.csv", *files.transport_orders);
  if (files.assembly_orders) write_text_file(dir / "assembly_orders.json", *files.assembly_orders);
  if (files.item_locations) write_text_file(dir / "item_locations.csv", *files.item_locations);
}

}  // namespace voxsim
