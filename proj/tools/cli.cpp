#include "cli.hpp"

#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "voxsim/engine.hpp"
#include "voxsim/ingest.hpp"
#include "voxsim/report.hpp"
#include "voxsim/service_http.hpp"
#include "voxsim/sweep.hpp"

namespace voxsim::cli {

namespace fs = std::filesystem;

namespace {

struct InputFlags {
  std::string layout;
  std::string transport_orders;
  std::string assembly_orders;
  std::string item_locations;
  bool flows_only = false;
};

void add_input_flags(CLI::App& cmd, InputFlags& f, bool layout_required) {
  auto* layout = cmd.add_option("--layout", f.layout, "layout.json");
  if (layout_required) layout->required();
  auto* t = cmd.add_option("--transport-orders", f.transport_orders, "transportation_orders.csv");
  auto* a = cmd.add_option("--assembly-orders", f.assembly_orders, "assembly_orders.json");
  cmd.add_option("--item-locations", f.item_locations, "item_locations.csv");
  auto* m = cmd.add_flag("--material-flows-only", f.flows_only,
                         "run from material flows and item locations alone");
  m->excludes(t)->excludes(a);
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void print_diagnostics(std::ostream& os, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) os << format_diagnostic(d) << "\n";
}

// Loads and validates; prints diagnostics. Empty result means exit 1.
std::optional<SimulationModel> load(const InputFlags& f, std::ostream& err) {
  ModelPaths paths{f.layout, opt_path(f.transport_orders), opt_path(f.assembly_orders), opt_path(f.item_locations)};
  LoadResult r = load_model(paths);
  if (r.model && f.flows_only && r.model->material_flows.empty()) {
    r.diagnostics.push_back(Diagnostic{Severity::error, ErrorCode::InvalidValue, f.layout,
                                       "--material-flows-only needs at least one material flow"});
  }
  print_diagnostics(err, r.diagnostics);
  if (!r.ok() || has_errors(r.diagnostics)) return std::nullopt;
  return std::move(r.model);
}

int cmd_validate(const InputFlags& f, std::ostream& out, std::ostream& err) {
  auto model = load(f, err);
  if (!model) return kValidationError;
  out << "ok: " << model->receptors.size() << " receptors, " << model->agents.size() << " agents, "
      << model->transport_orders.size() << " transportation orders, " << model->assembly_orders.size()
      << " assembly orders\n";
  return kOk;
}

struct RunFlags {
  std::string out_dir = "out";
  std::uint64_t max_events = 10'000'000;
  double max_sim_time = 1e9;
  double time_horizon = 0.0;
  bool check_conservation = false;
};

RunConfig make_config(const RunFlags& r) {
  RunConfig c;
  c.max_events = r.max_events;
  c.max_sim_time = r.max_sim_time;
  if (r.time_horizon > 0) c.time_horizon = r.time_horizon;
  c.check_conservation = r.check_conservation;
  return c;
}

int cmd_run(const InputFlags& f, const RunFlags& rf, std::ostream& out, std::ostream& err) {
  auto model = load(f, err);
  if (!model) return kValidationError;
  const RunResult result = run(*model, make_config(rf));
  const fs::path dir(rf.out_dir);
  fs::create_directories(dir);
  write_text_file(dir / "report.txt", format_report(*result.report));
  write_text_file(dir / "report.json", report_json(*result.report));
  write_text_file(dir / "events.log", format_event_log(result.event_log));
  write_text_file(dir / "heatmap.csv", heatmap_csv(result.report->heat_map));
  write_text_file(dir / "collision_risk.csv", heatmap_csv(result.report->collision_risk));
  write_text_file(dir / "generation_log.csv", result.generation_log_csv);
  print_diagnostics(err, result.diagnostics);
  out << "outcome=" << to_string(result.outcome) << " makespan_s=" << result.report->makespan
      << " events=" << result.event_log.size() << " out=" << dir.string() << "\n";
  return result.outcome == RunOutcome::completed ? kOk : kRuntimeError;
}

struct SweepFlags {
  std::vector<std::string> agent_types;
  std::vector<std::string> counts;
  std::string spawn;
  unsigned workers = 1;
};

int cmd_sweep(const InputFlags& f, const RunFlags& rf, const SweepFlags& sf, std::ostream& out,
              std::ostream& err) {
  if (sf.agent_types.size() != sf.counts.size()) {
    err << "sweep: each --agent-type needs one --counts\n";
    return kValidationError;
  }
  auto model = load(f, err);
  if (!model) return kValidationError;
  SweepConfig config;
  for (std::size_t i = 0; i < sf.agent_types.size(); ++i) {
    if (!model->parameters.agent_types.count(sf.agent_types[i])) {
      err << "sweep: unknown agent type '" << sf.agent_types[i] << "'\n";
      return kValidationError;
    }
    config.axes.push_back(SweepAxis{sf.agent_types[i], parse_count_range(sf.counts[i])});
  }
  if (!sf.spawn.empty()) config.spawn_receptor = sf.spawn;
  config.workers = sf.workers;
  config.run = make_config(rf);
  const auto rows = sweep(*model, config);
  const std::string csv = sweep_csv(config, rows);
  const fs::path dir(rf.out_dir);
  fs::create_directories(dir);
  write_text_file(dir / "sweep.csv", csv);
  out << csv;
  return kOk;
}

int cmd_serve(const InputFlags& f, const std::string& host, int port, std::ostream& out, std::ostream& err) {
  SessionManager sessions;
  if (!f.layout.empty()) {
    ModelFiles files;
    files.layout = read_text_file(f.layout);
    if (!f.transport_orders.empty()) files.transport_orders = read_text_file(f.transport_orders);
    if (!f.assembly_orders.empty()) files.assembly_orders = read_text_file(f.assembly_orders);
    if (!f.item_locations.empty()) files.item_locations = read_text_file(f.item_locations);
    const std::string id = sessions.create_session();
    print_diagnostics(err, sessions.put_model(id, files));
    out << "preloaded session " << id << "\n";
  }
  HttpService http(sessions);
  out << "listening on " << host << ":" << port << "\n" << std::flush;
  if (!http.listen(host, port)) {
    err << "serve: cannot listen on " << host << ":" << port << "\n";
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voxel-based discrete-event simulator for factory and warehouse logistics", "voxsim"};
  app.require_subcommand(1);

  InputFlags validate_in;
  auto* validate = app.add_subcommand("validate", "parse and check a model");
  add_input_flags(*validate, validate_in, true);

  InputFlags run_in;
  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "simulate a model and write the report");
  add_input_flags(*run_cmd, run_in, true);
  run_cmd->add_option("--out", run_flags.out_dir, "output directory");
  run_cmd->add_option("--max-events", run_flags.max_events, "safety cap on processed events");
  run_cmd->add_option("--max-sim-time", run_flags.max_sim_time, "safety cap on simulated seconds");
  run_cmd->add_option("--time-horizon", run_flags.time_horizon, "stop once the clock reaches this time");
  run_cmd->add_flag("--check-conservation", run_flags.check_conservation, "re-count items after every event");

  InputFlags sweep_in;
  RunFlags sweep_run;
  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "re-run with varying agent counts");
  add_input_flags(*sweep_cmd, sweep_in, true);
  sweep_cmd->add_option("--agent-type", sweep_flags.agent_types, "agent type to vary (repeatable)")->required();
  sweep_cmd->add_option("--counts", sweep_flags.counts, "counts for the matching --agent-type, e.g. 1..4 or 1,2,4")
      ->required();
  sweep_cmd->add_option("--spawn", sweep_flags.spawn, "receptor next to which added agents start");
  sweep_cmd->add_option("--workers", sweep_flags.workers, "parallel runs");
  sweep_cmd->add_option("--out", sweep_run.out_dir, "output directory");
  sweep_cmd->add_option("--max-events", sweep_run.max_events, "safety cap on processed events");

  InputFlags serve_in;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "serve the session API over HTTP");
  add_input_flags(*serve, serve_in, false);
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "TCP port");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kValidationError;
  }

  try {
    if (*validate) return cmd_validate(validate_in, out, err);
    if (*run_cmd) return cmd_run(run_in, run_flags, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_in, sweep_run, sweep_flags, out, err);
    if (*serve) return cmd_serve(serve_in, host, port, out, err);
  } catch (const ValidationError& e) {
    print_diagnostics(err, e.diagnostics());
    return kValidationError;
  } catch (const Error& e) {
    err << format_diagnostic(e.to_diagnostic()) << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace voxsim::cli
