#pragma once

// Headless proof scripts: an initial sequent plus a list of session commands.
//
//   {"system": "NK", "palette": "NJ", "premises": ["p"], "conclusion": "p ∨ q",
//    "steps": [{"apply": "∨I", "goal": 2, "side": "left"}, {"undo": true}]}

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ndp/error.hpp"
#include "ndp/formula.hpp"
#include "ndp/state.hpp"
#include "ndp/system.hpp"

namespace ndp {

struct ScriptStep {
  enum class Kind { SelectGoal, SelectResource, Apply, Magic, Undo, Redo, Palette };
  Kind kind = Kind::Apply;
  int line = 0;                    // SelectGoal / SelectResource
  std::optional<int> goal;         // Apply: selects this goal first
  std::optional<int> resource;     // Apply: selects this resource first
  Rule rule = Rule::Re;            // Apply / Palette
  RuleArgs args;                   // Apply
  bool on = true;                  // Palette
};

struct Script {
  SystemProfile system;
  RuleSet palette;
  std::vector<Formula> premises;
  Formula conclusion;
  std::vector<ScriptStep> steps;
};

namespace detail {

[[noreturn]] inline void script_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline Rule script_rule(const nlohmann::json& j) {
  if (!j.is_string()) script_error("rule names are strings");
  auto r = rule_from_name(j.get<std::string>());
  if (!r) script_error("unknown rule '" + j.get<std::string>() + "'");
  return *r;
}

inline RuleSet script_rules(const nlohmann::json& j) {
  if (j.is_string()) return system_by_name(j.get<std::string>()).enabled;
  if (!j.is_array()) script_error("a palette is a system name or a list of rules");
  RuleSet out;
  for (const auto& r : j) out.insert(script_rule(r));
  return out;
}

inline int script_int(const nlohmann::json& j, const char* key) {
  if (!j.at(key).is_number_integer()) script_error(std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

inline ScriptStep script_step(const nlohmann::json& j) {
  using K = ScriptStep::Kind;
  if (!j.is_object()) script_error("steps are objects");
  ScriptStep s;
  if (j.contains("selectGoal")) {
    s.kind = K::SelectGoal;
    s.line = script_int(j, "selectGoal");
  } else if (j.contains("selectResource")) {
    s.kind = K::SelectResource;
    s.line = script_int(j, "selectResource");
  } else if (j.contains("apply")) {
    s.kind = K::Apply;
    s.rule = script_rule(j["apply"]);
    if (j.contains("goal")) s.goal = script_int(j, "goal");
    if (j.contains("resource")) s.resource = script_int(j, "resource");
    if (j.contains("side")) {
      s.args.side = j["side"].is_string() ? side_from(j["side"].get<std::string>()) : std::nullopt;
      if (!s.args.side) script_error("side is \"left\" or \"right\"");
    }
    if (j.contains("witness")) s.args.witness = parse_term(j["witness"].get<std::string>());
    if (j.contains("axiomName")) s.args.axiom = j["axiomName"].get<std::string>();
    if (j.contains("line")) s.args.line = script_int(j, "line");
    if (j.contains("bindings"))
      for (const auto& [v, t] : j["bindings"].items()) s.args.bindings.emplace(v, parse_term(t.get<std::string>()));
  } else if (j.contains("magic")) {
    s.kind = K::Magic;
  } else if (j.contains("undo")) {
    s.kind = K::Undo;
  } else if (j.contains("redo")) {
    s.kind = K::Redo;
  } else if (j.contains("palette")) {
    s.kind = K::Palette;
    const auto& p = j["palette"];
    if (!p.is_object() || !p.contains("rule")) script_error("palette steps need a rule");
    s.rule = script_rule(p["rule"]);
    s.on = p.value("on", true);
  } else {
    script_error("unknown step " + j.dump());
  }
  return s;
}

}  // namespace detail

inline Script parse_script(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    detail::script_error(std::string("script is not JSON: ") + e.what());
  }
  if (!j.is_object()) detail::script_error("a script is a JSON object");
  try {
    Script s;
    s.system = system_by_name(j.value("system", std::string("NK")));
    if (j.contains("rules")) s.system.enabled = detail::script_rules(j["rules"]);
    if (j.contains("axioms")) {
      s.system.axioms.clear();
      for (const auto& a : j["axioms"]) s.system.axioms.push_back({a.at("name").get<std::string>(), parse_formula(a.at("schema").get<std::string>())});
    }
    s.palette = j.contains("palette") ? detail::script_rules(j["palette"]) : default_palette(s.system);
    for (const auto& p : j.value("premises", nlohmann::json::array())) s.premises.push_back(parse_formula(p.get<std::string>()));
    if (!j.contains("conclusion")) detail::script_error("script has no conclusion");
    s.conclusion = parse_formula(j["conclusion"].get<std::string>());
    for (const auto& step : j.value("steps", nlohmann::json::array())) s.steps.push_back(detail::script_step(step));
    return s;
  } catch (const nlohmann::json::exception& e) {
    detail::script_error(std::string("malformed script: ") + e.what());
  }
}

inline ProofState start(const Script& s) {
  ProofState st = new_proof(s.premises, s.conclusion, s.system);
  st.palette = s.palette;
  return st;
}

inline ProofState run_step(ProofState st, const ScriptStep& step) {
  using K = ScriptStep::Kind;
  switch (step.kind) {
    case K::SelectGoal: return select_goal(std::move(st), step.line);
    case K::SelectResource: return select_resource(std::move(st), step.line);
    case K::Apply: {
      if (step.goal) st = select_goal(std::move(st), *step.goal);
      if (step.resource) st = select_resource(std::move(st), *step.resource);
      return apply_rule(std::move(st), step.rule, step.args);
    }
    case K::Magic: return magic(std::move(st));
    case K::Undo: return undo(std::move(st));
    case K::Redo: return redo(std::move(st));
    case K::Palette: return toggle_palette(std::move(st), step.rule, step.on);
  }
  return st;
}

struct ScriptOutcome {
  ProofState state;
  std::optional<std::size_t> failed_step;  // 1-based
  std::optional<Error> error;
};

// Runs every step; stops at the first rejected one.
inline ScriptOutcome run_script(const Script& s) {
  ScriptOutcome out{start(s), std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    try {
      out.state = run_step(out.state, s.steps[i]);
    } catch (const Error& e) {
      out.failed_step = i + 1;
      out.error = e;
      break;
    }
  }
  return out;
}

}  // namespace ndp
