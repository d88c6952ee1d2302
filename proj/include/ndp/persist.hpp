#pragma once

// .ndp / .ndu proof documents. Both extensions hold byte-identical JSON:
// settings, the initial sequent, the full event log and the undo cursor.
// The visible state is always rebuilt by replay, never stored.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ndp/error.hpp"
#include "ndp/formula.hpp"
#include "ndp/state.hpp"
#include "ndp/system.hpp"

namespace ndp {

inline constexpr int kFormatVersion = 1;

enum class Mode { Editable, Demo };

inline std::string_view to_string(Mode m) { return m == Mode::Editable ? "editable" : "demo"; }
inline std::string_view extension(Mode m) { return m == Mode::Editable ? ".ndp" : ".ndu"; }

struct ProofDocument {
  int format_version = kFormatVersion;
  SystemProfile system;
  RuleSet palette;
  std::vector<Formula> premises;
  Formula conclusion;
  std::vector<Event> events;
  std::size_t undo_cursor = 0;

  std::size_t applications() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < undo_cursor && i < events.size(); ++i) n += events[i].is_application();
    return n;
  }
};

inline ProofDocument to_document(const ProofState& s) {
  return {kFormatVersion, s.system, s.palette, s.premises, s.conclusion, s.history.events, s.history.cursor};
}

namespace detail {

using ojson = nlohmann::ordered_json;

[[noreturn]] inline void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline ojson rule_list(const RuleSet& rules) {
  ojson out = ojson::array();
  for (Rule r : rules) out.push_back(std::string(rule_name(r)));
  return out;
}

inline RuleSet rules_from(const ojson& j) {
  if (!j.is_array()) parse_error("rule list must be an array");
  RuleSet out;
  for (const auto& e : j) {
    auto r = e.is_string() ? rule_from_name(e.get<std::string>()) : std::nullopt;
    if (!r) parse_error("unknown rule " + e.dump());
    out.insert(*r);
  }
  return out;
}

inline ojson selection_fields(ojson j, const std::optional<int>& goal, const std::optional<int>& resource) {
  if (goal) j["goal"] = *goal;
  if (resource) j["resource"] = *resource;
  return j;
}

inline ojson application_json(const RuleApplication& a, bool with_kind) {
  ojson j = ojson::object();
  if (with_kind) j["kind"] = "apply";
  j["rule"] = std::string(rule_name(a.rule));
  j["goal"] = a.goal;
  if (a.resource) j["resource"] = *a.resource;
  if (a.args.side) j["side"] = std::string(to_string(*a.args.side));
  if (a.args.witness) j["witness"] = print_prefix(*a.args.witness);
  if (!a.args.axiom.empty()) j["axiomName"] = a.args.axiom;
  if (a.args.line) j["line"] = *a.args.line;
  if (!a.args.bindings.empty()) {
    ojson b = ojson::object();
    for (const auto& [v, t] : a.args.bindings) b[v] = print_prefix(t);
    j["bindings"] = b;
  }
  return j;
}

template <class T>
T field(const ojson& j, const char* key) {
  if (!j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_error(std::string("bad field '") + key + "'");
  }
}

inline std::optional<int> opt_int(const ojson& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return field<int>(j, key);
}

inline Formula formula_from(const std::string& text) {
  try {
    return parse_prefix(text);
  } catch (const Error& e) {
    parse_error("bad formula '" + text + "': " + e.detail());
  }
}

inline Term term_from(const std::string& text) {
  try {
    return parse_prefix_term(text);
  } catch (const Error& e) {
    parse_error("bad term '" + text + "': " + e.detail());
  }
}

inline RuleApplication application_from(const ojson& j) {
  RuleApplication a;
  auto rule = rule_from_name(field<std::string>(j, "rule"));
  if (!rule) parse_error("unknown rule '" + field<std::string>(j, "rule") + "'");
  a.rule = *rule;
  a.goal = field<int>(j, "goal");
  a.resource = opt_int(j, "resource");
  if (j.contains("side")) {
    auto side = side_from(field<std::string>(j, "side"));
    if (!side) parse_error("bad side");
    a.args.side = side;
  }
  if (j.contains("witness")) a.args.witness = term_from(field<std::string>(j, "witness"));
  if (j.contains("axiomName")) a.args.axiom = field<std::string>(j, "axiomName");
  a.args.line = opt_int(j, "line");
  if (j.contains("bindings")) {
    if (!j["bindings"].is_object()) parse_error("bindings must be an object");
    for (const auto& [v, t] : j["bindings"].items()) {
      if (!t.is_string()) parse_error("binding values are terms");
      a.args.bindings.emplace(v, term_from(t.get<std::string>()));
    }
  }
  return a;
}

inline ojson event_json(const Event& e) {
  switch (e.kind) {
    case EventKind::Select: {
      ojson j = ojson::object();
      j["kind"] = "select";
      return selection_fields(j, e.selection.goal, e.selection.resource);
    }
    case EventKind::Apply: return application_json(e.steps.at(0), true);
    case EventKind::Magic: {
      ojson j = ojson::object();
      j["kind"] = "magic";
      ojson steps = ojson::array();
      for (const auto& s : e.steps) steps.push_back(application_json(s, false));
      j["steps"] = steps;
      return j;
    }
  }
  return {};
}

inline Event event_from(const ojson& j) {
  if (!j.is_object()) parse_error("events must be objects");
  std::string kind = field<std::string>(j, "kind");
  if (kind == "select") return Event::select({opt_int(j, "goal"), opt_int(j, "resource")});
  if (kind == "apply") return Event::apply(application_from(j));
  if (kind == "magic") {
    if (!j.contains("steps") || !j["steps"].is_array()) parse_error("magic event without steps");
    std::vector<RuleApplication> steps;
    for (const auto& s : j["steps"]) steps.push_back(application_from(s));
    return Event::magic(std::move(steps));
  }
  parse_error("unknown event kind '" + kind + "'");
}

}  // namespace detail

inline std::string serialize(const ProofDocument& d) {
  using detail::ojson;
  ojson settings = ojson::object();
  settings["systemName"] = std::string(to_string(d.system.name));
  settings["paletteList"] = detail::rule_list(d.palette);
  SystemProfile base = make_system(d.system.name);
  if (d.system.enabled != base.enabled) settings["rules"] = detail::rule_list(d.system.enabled);
  if (d.system.axioms != base.axioms) {
    ojson axioms = ojson::array();
    for (const auto& a : d.system.axioms) {
      ojson ax = ojson::object();
      ax["name"] = a.name;
      ax["schema"] = print_prefix(a.schema);
      axioms.push_back(ax);
    }
    settings["axioms"] = axioms;
  }
  ojson j = ojson::object();
  j["formatVersion"] = d.format_version;
  j["settings"] = settings;
  ojson premises = ojson::array();
  for (const auto& p : d.premises) premises.push_back(print_prefix(p));
  j["premises"] = premises;
  j["conclusion"] = print_prefix(d.conclusion);
  ojson events = ojson::array();
  for (const auto& e : d.events) events.push_back(detail::event_json(e));
  j["events"] = events;
  j["undoCursor"] = d.undo_cursor;
  return j.dump(2) + "\n";
}

inline ProofDocument deserialize(std::string_view text) {
  using detail::field;
  using detail::ojson;
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    detail::parse_error(std::string("not a proof document: ") + e.what());
  }
  if (!j.is_object()) detail::parse_error("not a proof document");
  ProofDocument d;
  d.format_version = field<int>(j, "formatVersion");
  if (d.format_version != kFormatVersion)
    detail::parse_error("unsupported formatVersion " + std::to_string(d.format_version));
  if (!j.contains("settings") || !j["settings"].is_object()) detail::parse_error("missing settings");
  const ojson& settings = j["settings"];
  auto name = system_name_from(field<std::string>(settings, "systemName"));
  if (!name) detail::parse_error("unknown system");
  d.system = make_system(*name);
  if (settings.contains("rules")) d.system.enabled = detail::rules_from(settings["rules"]);
  if (settings.contains("axioms")) {
    d.system.axioms.clear();
    for (const auto& a : settings["axioms"])
      d.system.axioms.push_back({field<std::string>(a, "name"), detail::formula_from(field<std::string>(a, "schema"))});
  }
  if (!settings.contains("paletteList")) detail::parse_error("missing paletteList");
  d.palette = detail::rules_from(settings["paletteList"]);
  for (const auto& p : field<std::vector<std::string>>(j, "premises")) d.premises.push_back(detail::formula_from(p));
  d.conclusion = detail::formula_from(field<std::string>(j, "conclusion"));
  if (!j.contains("events") || !j["events"].is_array()) detail::parse_error("missing events");
  for (const auto& e : j["events"]) d.events.push_back(detail::event_from(e));
  d.undo_cursor = field<std::size_t>(j, "undoCursor");
  if (d.undo_cursor > d.events.size()) detail::parse_error("undoCursor beyond the event log");
  return d;
}

// Rebuilds the full session state (history included) from a document.
inline ProofState to_state(const ProofDocument& d) {
  ProofState s;
  s.premises = d.premises;
  s.conclusion = d.conclusion;
  s.system = d.system;
  s.palette = d.palette;
  s.history = {d.events, d.undo_cursor};
  s.proof = replay_events(d.premises, d.conclusion, d.system, d.events, d.undo_cursor);
  return s;
}

// Proof after the first `applications` rule applications of the document.
inline Proof replay(const ProofDocument& d, std::size_t applications) {
  if (applications > d.applications())
    throw Error(ErrorCode::ReplayError, "document has only " + std::to_string(d.applications()) + " applications");
  std::size_t count = 0, seen = 0;
  while (seen < applications) {
    if (d.events[count].is_application()) ++seen;
    ++count;
  }
  return replay_events(d.premises, d.conclusion, d.system, d.events, count);
}

inline Mode mode_for_path(const std::filesystem::path& path) {
  return path.extension() == ".ndu" ? Mode::Demo : Mode::Editable;
}

// Writes the document; the extension is forced to match `mode`.
inline std::filesystem::path save(const ProofState& s, Mode mode, std::filesystem::path path) {
  path.replace_extension(extension(mode));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << serialize(to_document(s));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  return path;
}

inline ProofDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

inline std::pair<ProofState, Mode> load(const std::filesystem::path& path) {
  return {to_state(read_document(path)), mode_for_path(path)};
}

}  // namespace ndp
