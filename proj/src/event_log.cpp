#include <charconv>

#include "voxsim/engine.hpp"
#include "voxsim/format.hpp"

namespace voxsim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::agent_arrival: return "agent_arrival";
    case EventKind::load_complete: return "load_complete";
    case EventKind::unload_complete: return "unload_complete";
    case EventKind::assembly_complete: return "assembly_complete";
  }
  return "agent_arrival";
}

std::optional<EventKind> event_kind_from_string(std::string_view text) {
  for (auto k : {EventKind::agent_arrival, EventKind::load_complete, EventKind::unload_complete,
                 EventKind::assembly_complete}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

namespace {

// IDs may contain spaces and the log's own separators; escape those.
std::string escape(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '%' || c == ' ' || c == '=' || c == ':' || c == ';' || c == ',' || u < 0x21 || u == 0x7f) {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 15];
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      unsigned v = 0;
      auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec != std::errc() || p != s.data() + i + 3) {
        throw Error(ErrorCode::MalformedDocument, "events.log", "bad escape in '" + std::string(s) + "'");
      }
      out += static_cast<char>(v);
      i += 2;
    } else if (s[i] == '%') {
      throw Error(ErrorCode::MalformedDocument, "events.log", "truncated escape in '" + std::string(s) + "'");
    } else {
      out += s[i];
    }
  }
  return out;
}

double parse_double(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedDocument, "events.log", "not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedDocument, "events.log", "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::string format_event(const EventRecord& r) {
  std::string out = "time=" + format_number(r.time) + " seq=" + std::to_string(r.seq) +
                    " kind=" + std::string(to_string(r.kind)) + " agent=" + (r.agent.empty() ? "-" : escape(r.agent)) +
                    " order=" + std::to_string(r.order) + " receptor=" + escape(r.receptor) +
                    " start=" + format_number(r.start) + " items=";
  if (r.items.empty()) out += "-";
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    if (i) out += ',';
    out += escape(r.items[i].item_id) + ":" + std::to_string(r.items[i].delta);
  }
  out += " path=";
  if (r.path.empty()) out += "-";
  for (std::size_t i = 0; i < r.path.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(r.path[i].x) + "," + std::to_string(r.path[i].y);
  }
  return out;
}

EventRecord parse_event(std::string_view line) {
  static constexpr std::string_view kKeys[] = {"time", "seq", "kind", "agent", "order",
                                               "receptor", "start", "items", "path"};
  const auto fields = split(line, ' ');
  if (fields.size() != std::size(kKeys)) {
    throw Error(ErrorCode::MalformedDocument, "events.log", "expected 9 fields, got " + std::to_string(fields.size()));
  }
  std::string_view v[std::size(kKeys)];
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto eq = fields[i].find('=');
    if (eq == std::string_view::npos || fields[i].substr(0, eq) != kKeys[i]) {
      throw Error(ErrorCode::MalformedDocument, "events.log", "expected field '" + std::string(kKeys[i]) + "'");
    }
    v[i] = fields[i].substr(eq + 1);
  }

  EventRecord r;
  r.time = parse_double(v[0]);
  r.seq = parse_int<std::uint64_t>(v[1]);
  auto kind = event_kind_from_string(v[2]);
  if (!kind) throw Error(ErrorCode::MalformedDocument, "events.log", "unknown kind '" + std::string(v[2]) + "'");
  r.kind = *kind;
  if (v[3] != "-") r.agent = unescape(v[3]);
  r.order = parse_int<OrderId>(v[4]);
  r.receptor = unescape(v[5]);
  r.start = parse_double(v[6]);
  if (v[7] != "-") {
    for (auto item : split(v[7], ',')) {
      const auto colon = item.rfind(':');
      if (colon == std::string_view::npos) throw Error(ErrorCode::MalformedDocument, "events.log", "bad item delta");
      r.items.push_back(ItemDelta{unescape(item.substr(0, colon)), parse_int<Count>(item.substr(colon + 1))});
    }
  }
  if (v[8] != "-") {
    for (auto cell : split(v[8], ';')) {
      const auto comma = cell.find(',');
      if (comma == std::string_view::npos) throw Error(ErrorCode::MalformedDocument, "events.log", "bad path cell");
      r.path.push_back(Cell{parse_int<int>(cell.substr(0, comma)), parse_int<int>(cell.substr(comma + 1))});
    }
  }
  return r;
}

std::string format_event_log(const std::vector<EventRecord>& log) {
  std::string out;
  for (const auto& r : log) {
    out += format_event(r);
    out += '\n';
  }
  return out;
}

std::vector<EventRecord> parse_event_log(std::string_view text) {
  std::vector<EventRecord> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    out.push_back(parse_event(line));
  }
  return out;
}

}  // namespace voxsim
