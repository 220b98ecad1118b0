#include <charconv>
#include <sstream>

#include "iostd/sim.hpp"

namespace iostd {

std::string_view to_string(EndReason r) {
  switch (r) {
    case EndReason::Quiescent: return "quiescent";
    case EndReason::StepBudget: return "step-budget";
    case EndReason::Abort: return "abort";
    case EndReason::Stopped: return "stopped";
  }
  return "?";
}

namespace {

constexpr std::string_view kMagic = "# iostd-trace 1";
constexpr std::string_view kSep = " | ";

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  std::string::size_type p;
  while ((p = s.find(" | ")) != std::string::npos) s.replace(p, 3, " / ");
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> r;
  while (true) {
    auto p = line.find(kSep);
    if (p == std::string_view::npos) {
      r.emplace_back(line);
      return r;
    }
    r.emplace_back(line.substr(0, p));
    line.remove_prefix(p + kSep.size());
  }
}

std::int64_t to_int(const std::string& s, const std::string& line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::Parse, "bad number '" + s + "' in trace line: " + line);
  return v;
}

ErrorCode parse_code(const std::string& s, const std::string& line) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Usage); ++i)
    if (to_string(static_cast<ErrorCode>(i)) == s) return static_cast<ErrorCode>(i);
  throw Error(ErrorCode::Parse, "unknown error code in trace line: " + line);
}

}  // namespace

std::string Trace::text() const {
  std::ostringstream o;
  o << kMagic << "\n";
  for (const auto& [k, v] : header) o << "# " << k << " " << one_line(v) << "\n";
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::Init:
        o << "init" << kSep << e.object.name << kSep << to_string(*e.state);
        break;
      case EventKind::Inject:
        o << e.step << kSep << "inject" << kSep << to_string(e.msg);
        break;
      case EventKind::Deliver:
        o << e.step << kSep << "deliver" << kSep << to_string(e.msg) << kSep << e.choice << "/" << e.of;
        if (e.chaotic) o << " chaos";
        break;
      case EventKind::Emit:
        o << e.step << kSep << "emit" << kSep << to_string(e.msg);
        break;
      case EventKind::State:
        o << e.step << kSep << "state" << kSep << e.object.name << kSep << to_string(*e.state);
        break;
      case EventKind::Abort:
        o << e.step << kSep << "abort" << kSep << to_string(e.msg) << kSep << to_string(e.code) << kSep
          << one_line(e.detail);
        break;
    }
    o << "\n";
  }
  o << "# end " << to_string(end) << "\n";
  for (const auto& w : warnings) o << "# warning " << one_line(w) << "\n";
  return o.str();
}

Trace parse_trace(std::string_view text) {
  Trace t;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw Error(ErrorCode::Parse, "trace must start with '" + std::string(kMagic) + "'");
  bool ended = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      std::string body = line.substr(2);
      auto sp = body.find(' ');
      std::string key = body.substr(0, sp);
      std::string value = sp == std::string::npos ? "" : body.substr(sp + 1);
      if (key == "end") {
        ended = true;
        bool found = false;
        for (auto r : {EndReason::Quiescent, EndReason::StepBudget, EndReason::Abort, EndReason::Stopped})
          if (to_string(r) == value) {
            t.end = r;
            found = true;
          }
        if (!found) throw Error(ErrorCode::Parse, "unknown end reason: " + line);
      } else if (key == "warning") {
        t.warnings.push_back(value);
      } else if (ended) {
        throw Error(ErrorCode::Parse, "header line after the end marker: " + line);
      } else {
        t.header.emplace_back(key, value);
      }
      continue;
    }
    if (ended) throw Error(ErrorCode::Parse, "event after the end marker: " + line);
    auto f = split(line);
    TraceEvent e;
    auto need = [&](std::size_t n) {
      if (f.size() != n) throw Error(ErrorCode::Parse, "wrong field count in trace line: " + line);
    };
    try {
      if (f[0] == "init") {
        need(3);
        e.kind = EventKind::Init;
        e.object.name = f[1];
        e.state = parse_object_state(f[2]);
      } else {
        if (f.size() < 3) need(3);
        e.step = to_int(f[0], line);
        const std::string& k = f[1];
        if (k == "inject" || k == "emit") {
          need(3);
          e.kind = k == "inject" ? EventKind::Inject : EventKind::Emit;
          e.msg = parse_message(f[2]);
        } else if (k == "deliver") {
          need(4);
          e.kind = EventKind::Deliver;
          e.msg = parse_message(f[2]);
          std::string c = f[3];
          if (c.size() > 6 && c.substr(c.size() - 6) == " chaos") {
            e.chaotic = true;
            c = c.substr(0, c.size() - 6);
          }
          auto slash = c.find('/');
          if (slash == std::string::npos) throw Error(ErrorCode::Parse, "bad choice in trace line: " + line);
          e.choice = static_cast<std::size_t>(to_int(c.substr(0, slash), line));
          e.of = static_cast<std::size_t>(to_int(c.substr(slash + 1), line));
        } else if (k == "state") {
          need(4);
          e.kind = EventKind::State;
          e.object.name = f[2];
          e.state = parse_object_state(f[3]);
        } else if (k == "abort") {
          need(5);
          e.kind = EventKind::Abort;
          e.msg = parse_message(f[2]);
          e.code = parse_code(f[3], line);
          e.detail = f[4];
        } else {
          throw Error(ErrorCode::Parse, "unknown event in trace line: " + line);
        }
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Parse) throw;
      throw Error(ErrorCode::Parse, std::string(err.what()) + " (line: " + line + ")");
    }
    t.events.push_back(std::move(e));
  }
  if (!ended) throw Error(ErrorCode::Parse, "trace has no end marker");
  return t;
}

}  // namespace iostd
