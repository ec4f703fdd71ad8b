#include "voxsim/service.hpp"

#include <algorithm>
#include <charconv>
#include <condition_variable>
#include <set>

#include "json.hpp"
#include "voxsim/format.hpp"

namespace voxsim {

using nlohmann::ordered_json;

std::string_view to_string(RunState state) {
  switch (state) {
    case RunState::idle: return "idle";
    case RunState::running: return "running";
    case RunState::finished: return "finished";
    case RunState::failed: return "failed";
  }
  return "idle";
}

struct SessionManager::Session {
  std::mutex mutex;
  std::condition_variable changed;
  std::optional<SimulationModel> model;
  RunState state = RunState::idle;
  std::vector<FrameDelta> frames;
  std::optional<SimulationReport> report;
  std::vector<EventRecord> log;
  std::optional<Diagnostic> failure;
  std::thread worker;
};

SessionManager::~SessionManager() {
  for (auto& [id, s] : sessions_) {
    if (s->worker.joinable()) s->worker.join();
  }
}

std::string SessionManager::create_session() {
  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::make_shared<Session>());
  return id;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "session " + id, "no such session");
  return it->second;
}

namespace {

void require_not_running(const std::string& id, RunState state) {
  if (state == RunState::running) {
    throw Error(ErrorCode::RunInProgress, "session " + id, "a run is in progress; wait for it to finish");
  }
}

}  // namespace

std::vector<Diagnostic> SessionManager::put_model(const std::string& id, const ModelFiles& files) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  require_not_running(id, s->state);
  LoadResult loaded = parse_model(files);
  if (loaded.model) s->model = std::move(loaded.model);
  return loaded.diagnostics;
}

std::vector<Diagnostic> SessionManager::edit_layout(const std::string& id, const LayoutEdit& edit) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  require_not_running(id, s->state);
  if (!s->model) throw Error(ErrorCode::InvalidEdit, "session " + id, "no model loaded");

  SimulationModel next = *s->model;
  const bool receptor = edit.entity == LayoutEdit::Entity::receptor;
  const std::string where = std::string(receptor ? "receptor " : "agent ") + edit.id;
  auto find_receptor = [&] {
    return std::find_if(next.receptors.begin(), next.receptors.end(), [&](const auto& r) { return r.id == edit.id; });
  };
  auto find_agent = [&] {
    return std::find_if(next.agents.begin(), next.agents.end(), [&](const auto& a) { return a.id == edit.id; });
  };

  switch (edit.op) {
    case LayoutEdit::Op::place:
      if (receptor) {
        if (find_receptor() != next.receptors.end()) throw Error(ErrorCode::DuplicateId, where, "receptor ID in use");
        next.receptors.push_back(Receptor{edit.id, edit.coord, edit.groups});
      } else {
        if (find_agent() != next.agents.end()) throw Error(ErrorCode::DuplicateId, where, "agent ID in use");
        next.agents.push_back(Agent{edit.id, edit.agent_type, edit.coord, edit.groups});
      }
      break;
    case LayoutEdit::Op::move:
      if (receptor) {
        auto it = find_receptor();
        if (it == next.receptors.end()) throw Error(ErrorCode::InvalidEdit, where, "no such receptor");
        it->coord = edit.coord;
      } else {
        auto it = find_agent();
        if (it == next.agents.end()) throw Error(ErrorCode::InvalidEdit, where, "no such agent");
        it->coord = edit.coord;
      }
      break;
    case LayoutEdit::Op::remove:
      if (receptor) {
        auto it = find_receptor();
        if (it == next.receptors.end()) throw Error(ErrorCode::InvalidEdit, where, "no such receptor");
        next.receptors.erase(it);
      } else {
        auto it = find_agent();
        if (it == next.agents.end()) throw Error(ErrorCode::InvalidEdit, where, "no such agent");
        next.agents.erase(it);
      }
      break;
  }

  // Reject only what this edit broke; errors already in the draft stay the user's business.
  const auto before = validate_model(*s->model);
  auto after = validate_model(next);
  for (const auto& d : after) {
    if (d.severity != Severity::error) continue;
    if (std::find(before.begin(), before.end(), d) != before.end()) continue;
    throw Error(d.code, d.where, d.message);
  }
  s->model = std::move(next);
  // Results of an earlier run no longer describe this layout.
  s->report.reset();
  return after;
}

void SessionManager::start_run(const std::string& id, RunConfig config, bool wait) {
  auto s = find(id);
  {
    std::unique_lock lock(s->mutex);
    require_not_running(id, s->state);
    if (!s->model) throw Error(ErrorCode::ModelInvalid, "session " + id, "no model loaded");
    const auto diags = validate_model(*s->model);
    if (has_errors(diags)) throw ValidationError(diags);
    if (s->worker.joinable()) s->worker.join();
    s->state = RunState::running;
    s->frames.clear();
    s->report.reset();
    s->log.clear();
    s->failure.reset();
    config.record_frames = false;
    s->worker = std::thread([s, model = *s->model, config] {
      try {
        Simulation sim(model, config);
        {
          std::lock_guard l(s->mutex);
          s->frames.push_back(sim.initial_frame());
        }
        s->changed.notify_all();
        const RunOutcome outcome = sim.run_to_end([&](const FrameDelta& f) {
          {
            std::lock_guard l(s->mutex);
            s->frames.push_back(f);
          }
          s->changed.notify_all();
        });
        auto report = compute_report(sim, outcome);
        std::lock_guard l(s->mutex);
        s->report = std::move(report);
        s->log = sim.state().event_log;
        s->state = RunState::finished;
      } catch (const Error& e) {
        std::lock_guard l(s->mutex);
        s->failure = e.to_diagnostic();
        s->state = RunState::failed;
      } catch (const std::exception& e) {
        std::lock_guard l(s->mutex);
        s->failure = Diagnostic{Severity::error, ErrorCode::ModelInvalid, "engine", e.what()};
        s->state = RunState::failed;
      }
      s->changed.notify_all();
    });
  }
  if (wait) wait_run(id);
}

void SessionManager::wait_run(const std::string& id) {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->changed.wait(lock, [&] { return s->state != RunState::running; });
}

RunState SessionManager::run_state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->state;
}

FramePage SessionManager::get_frames(const std::string& id, std::size_t cursor, std::size_t limit) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  FramePage page;
  const std::size_t begin = std::min(cursor, s->frames.size());
  const std::size_t end = std::min(s->frames.size(), begin + limit);
  page.frames.assign(s->frames.begin() + static_cast<std::ptrdiff_t>(begin),
                     s->frames.begin() + static_cast<std::ptrdiff_t>(end));
  page.next_cursor = end;
  const bool ended = s->state == RunState::finished || s->state == RunState::failed;
  page.end_of_stream = ended && end == s->frames.size();
  return page;
}

SimulationReport SessionManager::get_report(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  require_not_running(id, s->state);
  if (s->state == RunState::failed && s->failure) {
    throw Error(s->failure->code, s->failure->where, s->failure->message);
  }
  if (!s->report) throw Error(ErrorCode::NoReport, "session " + id, "no finished run for the current model");
  return *s->report;
}

std::vector<EventRecord> SessionManager::event_log(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  require_not_running(id, s->state);
  if (!s->report) throw Error(ErrorCode::NoReport, "session " + id, "no finished run for the current model");
  return s->log;
}

ModelFiles SessionManager::export_model(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (!s->model) throw Error(ErrorCode::ModelInvalid, "session " + id, "no model loaded");
  return serialize_model(*s->model);
}

// ---- JSON views -----------------------------------------------------------

namespace {

ordered_json cell_json(Cell c) { return ordered_json::array({c.x, c.y}); }

ordered_json agent_view_json(const Snapshot::AgentView& a) {
  ordered_json j{{"id", a.id}, {"x", a.cell.x}, {"y", a.cell.y}, {"status", std::string(to_string(a.status))}};
  j["carried"] = ordered_json::array();
  for (const auto& c : a.carried) j["carried"].push_back({{"item", c.item_id}, {"count", c.count}});
  return j;
}

ordered_json diagnostic_json(const Diagnostic& d) {
  return {{"severity", std::string(to_string(d.severity))},
          {"code", std::string(to_string(d.code))},
          {"where", d.where},
          {"message", d.message}};
}

ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
  ordered_json out = ordered_json::array();
  for (const auto& d : diags) out.push_back(diagnostic_json(d));
  return out;
}

ordered_json frame_to_json(const FrameDelta& f) {
  ordered_json j;
  j["index"] = f.index;
  j["time"] = f.time;
  j["terminal"] = f.terminal;
  j["events"] = ordered_json::array();
  for (const auto& e : f.events) j["events"].push_back(format_event(e));
  j["moves"] = ordered_json::array();
  for (const auto& m : f.moves) {
    ordered_json path = ordered_json::array();
    for (const auto& c : m.path) path.push_back(cell_json(c));
    j["moves"].push_back({{"agent", m.agent},
                          {"from", cell_json(m.from)},
                          {"to", cell_json(m.to)},
                          {"path", std::move(path)},
                          {"depart", m.depart},
                          {"arrive", m.arrive}});
  }
  j["inventory_changes"] = ordered_json::array();
  for (const auto& c : f.inventory_changes) {
    j["inventory_changes"].push_back({{"receptor", c.receptor}, {"item", c.item_id}, {"delta", c.delta}});
  }
  j["agent_states"] = ordered_json::array();
  for (const auto& a : f.agent_states) j["agent_states"].push_back(agent_view_json(a));
  j["completed_orders"] = f.completed_orders;
  j["generated_orders"] = f.generated_orders;
  if (f.snapshot) {
    ordered_json snap{{"time", f.snapshot->time}};
    snap["inventories"] = ordered_json::object();
    for (const auto& [rid, inv] : f.snapshot->inventories) {
      for (const auto& [item, n] : inv.items()) snap["inventories"][rid][item] = n;
    }
    snap["agents"] = ordered_json::array();
    for (const auto& a : f.snapshot->agents) snap["agents"].push_back(agent_view_json(a));
    j["snapshot"] = std::move(snap);
  }
  return j;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::RunInProgress:
    case ErrorCode::NoReport: return 409;
    case ErrorCode::MalformedDocument:
    case ErrorCode::MissingField: return 400;
    default: return 422;
  }
}

ApiResponse json_response(int status, const ordered_json& j) { return ApiResponse{status, "application/json", j.dump()}; }

ApiResponse error_response(const Error& e) {
  ordered_json j{{"error", diagnostic_json(e.to_diagnostic())}};
  if (auto* v = dynamic_cast<const ValidationError*>(&e)) j["diagnostics"] = diagnostics_json(v->diagnostics());
  return json_response(status_for(e.code()), j);
}

ordered_json parse_body(const std::string& body) {
  if (body.empty()) return ordered_json::object();
  try {
    auto j = ordered_json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::MalformedDocument, "body", "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, "body", e.what());
  }
}

std::optional<std::string> opt_string(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) throw Error(ErrorCode::MalformedDocument, std::string("body.") + key, "expected a string");
  return j[key].get<std::string>();
}

int body_int(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw Error(ErrorCode::MissingField, std::string("body.") + key, "expected an integer");
  }
  return j[key].get<int>();
}

LayoutEdit parse_edit(const ordered_json& j) {
  LayoutEdit e;
  const auto op = opt_string(j, "op").value_or("");
  if (op == "place") {
    e.op = LayoutEdit::Op::place;
  } else if (op == "move") {
    e.op = LayoutEdit::Op::move;
  } else if (op == "delete") {
    e.op = LayoutEdit::Op::remove;
  } else {
    throw Error(ErrorCode::MissingField, "body.op", "expected place, move or delete");
  }
  const auto entity = opt_string(j, "entity").value_or("");
  if (entity == "receptor") {
    e.entity = LayoutEdit::Entity::receptor;
  } else if (entity == "agent") {
    e.entity = LayoutEdit::Entity::agent;
  } else {
    throw Error(ErrorCode::MissingField, "body.entity", "expected receptor or agent");
  }
  auto id = opt_string(j, "id");
  if (!id) throw Error(ErrorCode::MissingField, "body.id", "missing id");
  e.id = *id;
  if (e.op != LayoutEdit::Op::remove) {
    e.coord.x = body_int(j, "x");
    e.coord.y = body_int(j, "y");
    if (j.contains("z")) e.coord.z = body_int(j, "z");
  }
  if (e.op == LayoutEdit::Op::place && e.entity == LayoutEdit::Entity::agent) {
    auto type = opt_string(j, "type");
    if (!type) throw Error(ErrorCode::MissingField, "body.type", "placing an agent needs its type");
    e.agent_type = *type;
  }
  if (j.contains("groups")) {
    if (!j["groups"].is_array()) throw Error(ErrorCode::MalformedDocument, "body.groups", "expected an array");
    for (const auto& g : j["groups"]) {
      if (!g.is_string()) throw Error(ErrorCode::MalformedDocument, "body.groups", "expected strings");
      e.groups.push_back(g.get<std::string>());
    }
  }
  return e;
}

RunConfig parse_run_config(const ordered_json& j, bool& wait) {
  RunConfig c;
  wait = j.value("wait", false);
  if (j.contains("max_events")) c.max_events = j["max_events"].get<std::uint64_t>();
  if (j.contains("max_sim_time")) c.max_sim_time = j["max_sim_time"].get<double>();
  if (j.contains("time_horizon")) c.time_horizon = j["time_horizon"].get<double>();
  if (j.contains("check_conservation")) c.check_conservation = j["check_conservation"].get<bool>();
  if (j.contains("snapshot_interval")) c.snapshot_interval = j["snapshot_interval"].get<std::uint64_t>();
  return c;
}

std::size_t query_size(const std::map<std::string, std::string>& q, const std::string& key, std::size_t fallback) {
  auto it = q.find(key);
  if (it == q.end()) return fallback;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || p != it->second.data() + it->second.size()) {
    throw Error(ErrorCode::MalformedDocument, "query." + key, "expected a non-negative integer");
  }
  return v;
}

std::vector<std::string> segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    if (path[pos] == '/') {
      ++pos;
      continue;
    }
    const auto next = path.find('/', pos);
    out.push_back(path.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next;
  }
  return out;
}

ApiResponse not_found(const ApiRequest& r) {
  return json_response(404, {{"error", {{"code", "NotFound"}, {"message", r.method + " " + r.path}}}});
}

}  // namespace

std::string frame_json(const FrameDelta& frame) { return frame_to_json(frame).dump(); }

ApiResponse handle_request(SessionManager& sessions, const ApiRequest& req) {
  try {
    const auto seg = segments(req.path);
    if (seg.empty() || seg[0] != "sessions") return not_found(req);
    if (seg.size() == 1) {
      if (req.method != "POST") return not_found(req);
      return json_response(201, {{"session_id", sessions.create_session()}});
    }
    if (seg.size() != 3) return not_found(req);
    const std::string& id = seg[1];
    const std::string& what = seg[2];

    if (what == "model" && req.method == "PUT") {
      const auto body = parse_body(req.body);
      ModelFiles files;
      auto layout = opt_string(body, "layout");
      if (!layout) throw Error(ErrorCode::MissingField, "body.layout", "the layout document is required");
      files.layout = *layout;
      files.transport_orders = opt_string(body, "transport_orders");
      files.assembly_orders = opt_string(body, "assembly_orders");
      files.item_locations = opt_string(body, "item_locations");
      const auto diags = sessions.put_model(id, files);
      return json_response(has_errors(diags) ? 422 : 200,
                           {{"ok", !has_errors(diags)}, {"diagnostics", diagnostics_json(diags)}});
    }
    if (what == "model" && req.method == "GET") {
      const auto files = sessions.export_model(id);
      ordered_json j{{"layout", files.layout}};
      if (files.transport_orders) j["transport_orders"] = *files.transport_orders;
      if (files.assembly_orders) j["assembly_orders"] = *files.assembly_orders;
      if (files.item_locations) j["item_locations"] = *files.item_locations;
      return json_response(200, j);
    }
    if (what == "layout-edits" && req.method == "POST") {
      const auto diags = sessions.edit_layout(id, parse_edit(parse_body(req.body)));
      return json_response(200, {{"ok", true}, {"diagnostics", diagnostics_json(diags)}});
    }
    if (what == "runs" && req.method == "POST") {
      bool wait = false;
      RunConfig config;
      try {
        config = parse_run_config(parse_body(req.body), wait);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, "body", e.what());
      }
      sessions.start_run(id, config, wait);
      const RunState state = sessions.run_state(id);
      return json_response(wait ? 200 : 202, {{"state", std::string(to_string(state))}});
    }
    if (what == "frames" && req.method == "GET") {
      const auto page = sessions.get_frames(id, query_size(req.query, "cursor", 0), query_size(req.query, "limit", 1000));
      ordered_json frames = ordered_json::array();
      for (const auto& f : page.frames) frames.push_back(frame_to_json(f));
      return json_response(200, {{"frames", std::move(frames)},
                                 {"next_cursor", page.next_cursor},
                                 {"end_of_stream", page.end_of_stream}});
    }
    if (what == "report" && req.method == "GET") {
      return ApiResponse{200, "application/json", report_json(sessions.get_report(id))};
    }
    if (what == "events" && req.method == "GET") {
      return ApiResponse{200, "text/plain", format_event_log(sessions.event_log(id))};
    }
    return not_found(req);
  } catch (const Error& e) {
    return error_response(e);
  }
}

}  // namespace voxsim
