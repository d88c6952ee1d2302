#pragma once

// The worked deduction of ¬(p ∧ q) from ¬p ∨ ¬q, built step by step.

#include <string>

#include "ndp/formula.hpp"
#include "ndp/state.hpp"

namespace paper {

inline const char* kPremise = "¬p ∨ ¬q";
inline const char* kConclusion = "¬(p ∧ q)";

inline ndp::ProofState start(ndp::SystemName system = ndp::SystemName::NK) {
  return ndp::new_proof({ndp::parse_formula(kPremise)}, ndp::parse_formula(kConclusion), ndp::make_system(system));
}

inline ndp::ProofState step(ndp::ProofState s, ndp::Rule rule, int goal, int resource = 0,
                            std::optional<ndp::Side> side = std::nullopt) {
  s = ndp::select_goal(std::move(s), goal);
  if (resource) s = ndp::select_resource(std::move(s), resource);
  ndp::RuleArgs args;
  args.side = side;
  return ndp::apply_rule(std::move(s), rule, args);
}

// State after the first `steps` applications of the construction.
inline ndp::ProofState build(int steps = 6, ndp::SystemName system = ndp::SystemName::NK) {
  using ndp::Rule;
  using ndp::Side;
  ndp::ProofState s = start(system);
  if (steps > 0) s = step(s, Rule::NotI, 2);
  if (steps > 1) s = step(s, Rule::OrE, 4, 1);
  if (steps > 2) s = step(s, Rule::NotE, 6, 5);
  if (steps > 3) s = step(s, Rule::AndE, 9, 3, Side::Left);
  if (steps > 4) s = step(s, Rule::NotE, 8, 7);
  if (steps > 5) s = step(s, Rule::AndE, 10, 3, Side::Right);
  return s;
}

inline std::string script_path() { return std::string(NDP_SOURCE_DIR) + "/tests/data/paper.json"; }
inline std::string golden(const std::string& name) { return std::string(NDP_SOURCE_DIR) + "/tests/golden/" + name; }

}  // namespace paper
