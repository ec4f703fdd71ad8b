#pragma once

// Session-scoped backend for interactive modeling and playback. Every
// session owns one model draft and at most one engine run. The HTTP binding
// in service_http.hpp is a thin shell over handle_request().

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "voxsim/engine.hpp"
#include "voxsim/ingest.hpp"
#include "voxsim/report.hpp"

namespace voxsim {

struct LayoutEdit {
  enum class Op { place, move, remove };
  enum class Entity { receptor, agent };
  Op op = Op::place;
  Entity entity = Entity::receptor;
  std::string id;
  VoxelCoord coord;                // place and move
  std::string agent_type;          // placing an agent
  std::vector<std::string> groups;  // place
};

struct FramePage {
  std::vector<FrameDelta> frames;
  std::size_t next_cursor = 0;
  bool end_of_stream = false;
};

enum class RunState { idle, running, finished, failed };

std::string_view to_string(RunState state);

class SessionManager {
 public:
  SessionManager() = default;
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  std::string create_session();

  // Replaces the draft. A draft that parses is kept even when validation
  // finds errors; runs refuse it until it is fixed.
  std::vector<Diagnostic> put_model(const std::string& session, const ModelFiles& files);

  // One placement mutation, re-validated at once. A rejected edit leaves the
  // draft untouched and throws Error carrying the first error diagnostic.
  std::vector<Diagnostic> edit_layout(const std::string& session, const LayoutEdit& edit);

  // Starts the engine on a background thread; with `wait` returns after it ends.
  void start_run(const std::string& session, RunConfig config, bool wait = false);
  void wait_run(const std::string& session);
  RunState run_state(const std::string& session);

  // Frames [cursor, cursor + limit). end_of_stream once the run has ended and
  // the page reaches the last frame.
  FramePage get_frames(const std::string& session, std::size_t cursor, std::size_t limit = 1000);

  SimulationReport get_report(const std::string& session);
  std::vector<EventRecord> event_log(const std::string& session);
  ModelFiles export_model(const std::string& session);

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id);

  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

struct ApiRequest {
  std::string method;  // GET, POST, PUT
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Routes:
//   POST /sessions
//   PUT  /sessions/{id}/model          {"layout": "...", "transport_orders": "...", ...}
//   GET  /sessions/{id}/model
//   POST /sessions/{id}/layout-edits   {"op": "place|move|delete", "entity": "receptor|agent", ...}
//   POST /sessions/{id}/runs           {"wait": bool, "max_events": n, "max_sim_time": s, "time_horizon": s}
//   GET  /sessions/{id}/frames?cursor=n[&limit=m]
//   GET  /sessions/{id}/report
//   GET  /sessions/{id}/events
ApiResponse handle_request(SessionManager& sessions, const ApiRequest& request);

std::string frame_json(const FrameDelta& frame);

}  // namespace voxsim
