#pragma once

// Transport-independent session protocol. Api::handle maps (method, path,
// query, body) to a status code and a JSON or text body; server.hpp only
// forwards HTTP requests here.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ndp/error.hpp"
#include "ndp/export.hpp"
#include "ndp/formula.hpp"
#include "ndp/persist.hpp"
#include "ndp/state.hpp"
#include "ndp/system.hpp"

namespace ndp {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct Session {
  std::string id;
  ProofState state;
  Mode mode = Mode::Editable;
  std::chrono::steady_clock::time_point last_used;
  std::mutex mutex;
};

using Clock = std::function<std::chrono::steady_clock::time_point()>;

inline constexpr std::chrono::minutes kIdleTimeout{60};

namespace detail {

using ojson = nlohmann::ordered_json;

inline std::string_view status_name(LineStatus s) { return s == LineStatus::Goal ? "goal" : "justified"; }

inline ojson row_json(const RenderedRow& r) {
  ojson j = ojson::object();
  j["creation"] = r.creation;
  j["depth"] = r.depth;
  j["formulaUnicode"] = r.formula_unicode;
  j["formulaPrefix"] = r.formula_prefix;
  j["justification"] = r.justification();
  j["status"] = std::string(status_name(r.status));
  ojson flags = ojson::object();
  flags["currentGoal"] = r.current_goal;
  flags["currentResource"] = r.current_resource;
  flags["outOfScope"] = r.out_of_scope;
  j["flags"] = flags;
  j["boxOpens"] = r.box_opens;
  j["boxCloses"] = r.box_closes;
  return j;
}

inline ojson rows_json(const RenderedProof& p) {
  ojson rows = ojson::array();
  for (const auto& r : p.rows) rows.push_back(row_json(r));
  return rows;
}

inline ojson applicable_json(const Applicable& a) {
  ojson j = ojson::object();
  j["rule"] = std::string(rule_name(a.rule));
  if (a.side) j["side"] = std::string(to_string(*a.side));
  if (!a.axiom.empty()) j["axiomName"] = a.axiom;
  j["needs"] = a.needs;
  return j;
}

inline ojson error_json(const Error& e) {
  ojson j = ojson::object();
  j["code"] = std::string(to_string(e.code()));
  j["message"] = e.detail();
  if (auto* s = dynamic_cast<const SyntaxError*>(&e)) j["position"] = s->position();
  if (e.at()) j["at"] = *e.at();
  return j;
}

inline Response json_response(int status, const ojson& j) { return {status, j.dump(), "application/json"}; }

inline Response error_response(int status, const Error& e) { return json_response(status, error_json(e)); }

inline Response not_found(const std::string& what) {
  ojson j = ojson::object();
  j["code"] = "NotFound";
  j["message"] = what;
  return json_response(404, j);
}

inline std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

inline Rule rule_arg(const nlohmann::json& j) {
  if (!j.is_string()) throw Error(ErrorCode::MissingArgument, "rule");
  auto r = rule_from_name(j.get<std::string>());
  if (!r) throw Error(ErrorCode::ParseError, "unknown rule '" + j.get<std::string>() + "'");
  return *r;
}

inline RuleArgs rule_args(const nlohmann::json& j) {
  RuleArgs a;
  if (!j.is_object()) return a;
  if (j.contains("side")) {
    a.side = j["side"].is_string() ? side_from(j["side"].get<std::string>()) : std::nullopt;
    if (!a.side) throw Error(ErrorCode::ParseError, "side is \"left\" or \"right\"");
  }
  if (j.contains("witness")) a.witness = parse_term(j["witness"].get<std::string>());
  if (j.contains("axiomName")) a.axiom = j["axiomName"].get<std::string>();
  if (j.contains("line")) a.line = j["line"].get<int>();
  if (j.contains("bindings"))
    for (const auto& [v, t] : j["bindings"].items()) a.bindings.emplace(v, parse_term(t.get<std::string>()));
  return a;
}

}  // namespace detail

inline nlohmann::ordered_json session_view(const Session& s) {
  using detail::ojson;
  ojson j = ojson::object();
  j["sessionId"] = s.id;
  j["system"] = std::string(to_string(s.state.system.name));
  ojson palette = ojson::array();
  for (Rule r : s.state.palette) palette.push_back(std::string(rule_name(r)));
  j["palette"] = palette;
  j["mode"] = std::string(to_string(s.mode));
  j["complete"] = s.state.complete();
  j["rows"] = detail::rows_json(render(s.state));
  ojson applicable = ojson::array();
  if (s.mode == Mode::Editable)
    for (const auto& a : list_applicable(s.state)) applicable.push_back(detail::applicable_json(a));
  j["applicable"] = applicable;
  return j;
}

inline nlohmann::ordered_json frames_json(const FrameSequence& seq) {
  using detail::ojson;
  ojson frames = ojson::array();
  for (const auto& f : seq.frames) {
    ojson frame = ojson::object();
    frame["complete"] = f.complete;
    frame["rows"] = detail::rows_json(f);
    frames.push_back(frame);
  }
  ojson j = ojson::object();
  j["frames"] = frames;
  return j;
}

class Api {
 public:
  explicit Api(Clock clock = [] { return std::chrono::steady_clock::now(); }, std::uint64_t seed = std::random_device{}())
      : clock_(std::move(clock)), rng_(seed) {}

  Response handle(std::string_view method, std::string_view path, const std::string& body,
                  const std::map<std::string, std::string>& query = {}) {
    evict_idle();
    auto parts = detail::split_path(path);
    if (parts.empty() || parts[0] != "sessions") return detail::not_found("no such endpoint");
    try {
      if (parts.size() == 1 && method == "POST") return create(body);
      if (parts.size() == 2 && parts[1] == "import" && method == "POST") return import(body);
      if (parts.size() < 2) return detail::not_found("no such endpoint");
      auto session = find(parts[1]);
      if (!session) return detail::not_found("no session '" + parts[1] + "'");
      std::lock_guard lock(session->mutex);
      session->last_used = clock_();
      if (parts.size() == 2 && method == "GET") return view(*session);
      if (parts.size() == 3 && method == "GET" && parts[2] == "export") return export_session(*session, query);
      if (parts.size() == 3 && method == "POST") return command(*session, parts[2], body);
      return detail::not_found("no such endpoint");
    } catch (const nlohmann::json::exception& e) {
      return detail::error_response(400, Error(ErrorCode::ParseError, e.what()));
    }
  }

  std::size_t session_count() {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

  // Drops sessions idle for longer than the timeout.
  void evict_idle() {
    auto now = clock_();
    std::lock_guard lock(mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock session_lock(it->second->mutex, std::try_to_lock);
      if (session_lock.owns_lock() && now - it->second->last_used > kIdleTimeout)
        it = (session_lock.unlock(), sessions_.erase(it));
      else
        ++it;
    }
  }

 private:
  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  std::string new_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (int i = 0; i < 16; ++i) id += hex[rng_() % 16];
    return id;
  }

  Response add(ProofState state, Mode mode) {
    auto s = std::make_shared<Session>();
    s->state = std::move(state);
    s->mode = mode;
    s->last_used = clock_();
    {
      std::lock_guard lock(mutex_);
      do s->id = new_id();
      while (sessions_.contains(s->id));
      sessions_.emplace(s->id, s);
    }
    return detail::json_response(201, session_view(*s));
  }

  Response create(const std::string& body) {
    auto j = nlohmann::json::parse(body);
    try {
      std::vector<Formula> premises;
      for (const auto& p : j.value("premises", nlohmann::json::array())) premises.push_back(parse_formula(p.get<std::string>()));
      if (!j.contains("conclusion")) throw Error(ErrorCode::MissingArgument, "conclusion");
      Formula conclusion = parse_formula(j["conclusion"].get<std::string>());
      SystemProfile sys = system_by_name(j.value("system", std::string("NK")));
      ProofState state = new_proof(std::move(premises), std::move(conclusion), std::move(sys));
      if (j.contains("palette")) {
        const auto& p = j["palette"];
        if (p.is_string()) {
          state.palette = system_by_name(p.get<std::string>()).enabled;
        } else {
          state.palette.clear();
          for (const auto& r : p) state.palette.insert(detail::rule_arg(r));
        }
      }
      return add(std::move(state), Mode::Editable);
    } catch (const Error& e) {
      return detail::error_response(400, e);
    }
  }

  // Body: {"document": <ndp JSON>, "mode": "editable"|"demo"}.
  Response import(const std::string& body) {
    auto j = nlohmann::json::parse(body);
    try {
      if (!j.contains("document")) throw Error(ErrorCode::MissingArgument, "document");
      ProofDocument doc = deserialize(j["document"].dump());
      Mode mode = j.value("mode", std::string("editable")) == "demo" ? Mode::Demo : Mode::Editable;
      return add(to_state(doc), mode);
    } catch (const Error& e) {
      return detail::error_response(400, e);
    }
  }

  Response view(const Session& s) { return detail::json_response(200, session_view(s)); }

  Response command(Session& s, const std::string& name, const std::string& body) {
    auto j = body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
    try {
      bool playback = name == "undo" || name == "redo" || name == "takeover";
      if (s.mode == Mode::Demo && !playback)
        throw Error(ErrorCode::ReadOnly, "demonstration sessions only allow playback");
      if (name == "select") {
        ProofState next = s.state;
        if (j.contains("goal")) next = select_goal(std::move(next), j["goal"].get<int>());
        if (j.contains("resource")) next = select_resource(std::move(next), j["resource"].get<int>());
        s.state = std::move(next);
      } else if (name == "apply") {
        if (!j.contains("rule")) throw Error(ErrorCode::MissingArgument, "rule");
        Rule rule = detail::rule_arg(j["rule"]);
        RuleArgs args = detail::rule_args(j.contains("args") ? j["args"] : j);
        s.state = apply_rule(s.state, rule, std::move(args));
      } else if (name == "undo") {
        s.state = undo(s.state);
      } else if (name == "redo") {
        s.state = redo(s.state);
      } else if (name == "magic") {
        s.state = magic(s.state);
      } else if (name == "palette") {
        if (!j.contains("rule")) throw Error(ErrorCode::MissingArgument, "rule");
        s.state = toggle_palette(s.state, detail::rule_arg(j["rule"]), j.value("on", true));
      } else if (name == "takeover") {
        s.mode = Mode::Editable;
      } else {
        return detail::not_found("no such command '" + name + "'");
      }
      return view(s);
    } catch (const Error& e) {
      return detail::error_response(422, e);
    }
  }

  Response export_session(const Session& s, const std::map<std::string, std::string>& query) {
    auto it = query.find("format");
    std::string format = it == query.end() ? "text" : it->second;
    if (format == "latex") return {200, export_latex(s.state), "text/plain; charset=utf-8"};
    if (format == "text") return {200, export_unicode(s.state), "text/plain; charset=utf-8"};
    if (format == "ndp") return {200, serialize(to_document(s.state)), "application/json"};
    if (format == "frames") {
      try {
        return detail::json_response(200, frames_json(export_frames(to_document(s.state))));
      } catch (const Error& e) {
        return detail::error_response(422, e);
      }
    }
    return detail::error_response(400, Error(ErrorCode::ParseError, "unknown export format '" + format + "'"));
  }

  Clock clock_;
  std::mt19937_64 rng_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace ndp
