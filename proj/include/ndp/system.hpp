#pragma once

// Rule identifiers, rule classification, and the system profiles
// (NJ, NK, PA, custom) that decide which rules a proof may use.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ndp/error.hpp"
#include "ndp/formula.hpp"

namespace ndp {

enum class Rule {
  AndI, AndE, OrI, OrE, ImpI, ImpE, NotI, NotE, FalsumE, DoubleNegE,
  AllI, AllE, ExI, ExE, EqI, EqE, Re, Ind, Ax, Prem, Ass,
};

enum class RuleKind { Backward, Forward, Structural };
enum class RuleClass { Automatic, Choice };

struct RuleInfo {
  Rule rule;
  std::string_view name;   // exact text used in justifications
  std::string_view ascii;  // alias accepted on input
  RuleKind kind;
  RuleClass klass;
};

inline constexpr std::array<RuleInfo, 21> kRules{{
    {Rule::AndI, "∧I", "andI", RuleKind::Backward, RuleClass::Automatic},
    {Rule::AndE, "∧E", "andE", RuleKind::Forward, RuleClass::Choice},
    {Rule::OrI, "∨I", "orI", RuleKind::Backward, RuleClass::Choice},
    {Rule::OrE, "∨E", "orE", RuleKind::Forward, RuleClass::Automatic},
    {Rule::ImpI, "→I", "impI", RuleKind::Backward, RuleClass::Automatic},
    {Rule::ImpE, "→E", "impE", RuleKind::Forward, RuleClass::Automatic},
    {Rule::NotI, "¬I", "notI", RuleKind::Backward, RuleClass::Automatic},
    {Rule::NotE, "¬E", "notE", RuleKind::Forward, RuleClass::Automatic},
    {Rule::FalsumE, "⊥E", "botE", RuleKind::Forward, RuleClass::Automatic},
    {Rule::DoubleNegE, "¬¬E", "dneg", RuleKind::Backward, RuleClass::Choice},
    {Rule::AllI, "∀I", "allI", RuleKind::Backward, RuleClass::Automatic},
    {Rule::AllE, "∀E", "allE", RuleKind::Forward, RuleClass::Choice},
    {Rule::ExI, "∃I", "exI", RuleKind::Backward, RuleClass::Choice},
    {Rule::ExE, "∃E", "exE", RuleKind::Forward, RuleClass::Automatic},
    {Rule::EqI, "=I", "eqI", RuleKind::Backward, RuleClass::Automatic},
    {Rule::EqE, "=E", "eqE", RuleKind::Forward, RuleClass::Choice},
    {Rule::Re, "Re", "re", RuleKind::Backward, RuleClass::Automatic},
    {Rule::Ind, "Ind", "ind", RuleKind::Backward, RuleClass::Choice},
    {Rule::Ax, "Ax", "ax", RuleKind::Backward, RuleClass::Choice},
    {Rule::Prem, "Prem", "prem", RuleKind::Structural, RuleClass::Automatic},
    {Rule::Ass, "Ass", "ass", RuleKind::Structural, RuleClass::Automatic},
}};

inline const RuleInfo& info(Rule r) { return kRules[static_cast<std::size_t>(r)]; }
inline std::string_view rule_name(Rule r) { return info(r).name; }
inline bool is_forward(Rule r) { return info(r).kind == RuleKind::Forward; }
inline bool is_backward(Rule r) { return info(r).kind == RuleKind::Backward; }

// Accepts the justification spelling or the ASCII alias.
inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (const auto& r : kRules)
    if (r.name == s || r.ascii == s) return r.rule;
  return std::nullopt;
}

// Full justification spelling, with the axiom name for Ax.
inline std::string rule_label(Rule r, const std::string& axiom = {}) {
  if (r == Rule::Ax) return "Ax(" + axiom + ")";
  return std::string(rule_name(r));
}

using RuleSet = std::set<Rule>;

struct Axiom {
  std::string name;
  Formula schema;

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

enum class SystemName { NJ, NK, PA, Custom };

inline std::string_view to_string(SystemName n) {
  switch (n) {
    case SystemName::NJ: return "NJ";
    case SystemName::NK: return "NK";
    case SystemName::PA: return "PA";
    case SystemName::Custom: return "Custom";
  }
  return "Custom";
}

inline std::optional<SystemName> system_name_from(std::string_view s) {
  if (s == "NJ") return SystemName::NJ;
  if (s == "NK") return SystemName::NK;
  if (s == "PA") return SystemName::PA;
  if (s == "Custom") return SystemName::Custom;
  return std::nullopt;
}

struct SystemProfile {
  SystemName name = SystemName::NK;
  RuleSet enabled;
  std::vector<Axiom> axioms;

  bool allows(Rule r) const {
    if (r == Rule::Prem || r == Rule::Ass) return true;
    return enabled.contains(r);
  }

  const Axiom* axiom(const std::string& n) const {
    auto it = std::find_if(axioms.begin(), axioms.end(), [&](const Axiom& a) { return a.name == n; });
    return it == axioms.end() ? nullptr : &*it;
  }

  friend bool operator==(const SystemProfile&, const SystemProfile&) = default;
};

inline RuleSet nj_rules() {
  return {Rule::AndI, Rule::AndE, Rule::OrI, Rule::OrE, Rule::ImpI, Rule::ImpE, Rule::NotI,
          Rule::NotE, Rule::FalsumE, Rule::AllI, Rule::AllE, Rule::ExI, Rule::ExE, Rule::Re};
}

inline RuleSet nk_rules() {
  RuleSet r = nj_rules();
  r.insert(Rule::DoubleNegE);
  return r;
}

inline std::vector<Axiom> pa_axioms() {
  return {
      {"S1", parse_prefix("\\all{x}{\\neg{\\eq{\\suc{x}}{\\zero}}}")},
      {"S2", parse_prefix("\\all{x}{\\all{y}{\\imp{\\eq{\\suc{x}}{\\suc{y}}}{\\eq{x}{y}}}}")},
      {"A1", parse_prefix("\\all{x}{\\eq{\\plus{x}{\\zero}}{x}}")},
      {"A2", parse_prefix("\\all{x}{\\all{y}{\\eq{\\plus{x}{\\suc{y}}}{\\suc{\\plus{x}{y}}}}}")},
      {"M1", parse_prefix("\\all{x}{\\eq{\\times{x}{\\zero}}{\\zero}}")},
      {"M2", parse_prefix("\\all{x}{\\all{y}{\\eq{\\times{x}{\\suc{y}}}{\\plus{\\times{x}{y}}{x}}}}")},
  };
}

inline RuleSet pa_rules() {
  RuleSet r = nk_rules();
  r.insert({Rule::EqI, Rule::EqE, Rule::Ind, Rule::Ax});
  return r;
}

inline SystemProfile make_system(SystemName n) {
  switch (n) {
    case SystemName::NJ: return {n, nj_rules(), {}};
    case SystemName::NK: return {n, nk_rules(), {}};
    case SystemName::PA: return {n, pa_rules(), pa_axioms()};
    case SystemName::Custom: return {n, nk_rules(), {}};
  }
  return {n, nk_rules(), {}};
}

inline SystemProfile system_by_name(std::string_view s) {
  auto n = system_name_from(s);
  if (!n) throw Error(ErrorCode::ParseError, "unknown system '" + std::string(s) + "'");
  return make_system(*n);
}

// The default palette of a system is everything it enables.
inline RuleSet default_palette(const SystemProfile& s) { return s.enabled; }

enum class Side { Left, Right };

inline std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

inline std::optional<Side> side_from(std::string_view s) {
  if (s == "left" || s == "l") return Side::Left;
  if (s == "right" || s == "r") return Side::Right;
  return std::nullopt;
}

// User-supplied arguments of one rule application.
struct RuleArgs {
  std::optional<Side> side;
  std::optional<Term> witness;           // ∀E/∃I instance term, eigenvariable for ∀I/∃E
  std::string axiom;                     // Ax
  std::optional<int> line;               // second premise (=E), cited line (Re), antecedent (→E/¬E)
  std::map<std::string, Term> bindings;  // Ax schema variables

  friend bool operator==(const RuleArgs&, const RuleArgs&) = default;
};

struct RuleApplication {
  Rule rule = Rule::Re;
  int goal = 0;
  std::optional<int> resource;
  RuleArgs args;

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

}  // namespace ndp
