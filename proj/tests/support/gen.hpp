#pragma once

// Random formulas and random sessions for property tests.

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ndp/formula.hpp"
#include "ndp/state.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline ndp::Formula propositional(Rng& rng, int depth, const std::vector<std::string>& atoms = {"p", "q", "r", "s"}) {
  using ndp::Formula;
  if (depth <= 0 || coin(rng, 0.25)) {
    if (coin(rng, 0.08)) return Formula::falsum();
    return Formula::atom(atoms[pick(rng, atoms.size())]);
  }
  switch (pick(rng, 4)) {
    case 0: return Formula::negation(propositional(rng, depth - 1, atoms));
    case 1: return Formula::conj(propositional(rng, depth - 1, atoms), propositional(rng, depth - 1, atoms));
    case 2: return Formula::disj(propositional(rng, depth - 1, atoms), propositional(rng, depth - 1, atoms));
    default: return Formula::implies(propositional(rng, depth - 1, atoms), propositional(rng, depth - 1, atoms));
  }
}

inline ndp::Term term(Rng& rng, int depth, const std::vector<std::string>& vars) {
  using ndp::Term;
  if (depth <= 0 || coin(rng, 0.5)) {
    std::size_t k = pick(rng, vars.size() + 2);
    if (k < vars.size()) return Term::variable(vars[k]);
    return k == vars.size() ? Term::zero() : Term::constant("a" + std::to_string(1 + pick(rng, 3)));
  }
  switch (pick(rng, 3)) {
    case 0: return Term::succ(term(rng, depth - 1, vars));
    case 1: return Term::plus(term(rng, depth - 1, vars), term(rng, depth - 1, vars));
    default: return Term::times(term(rng, depth - 1, vars), term(rng, depth - 1, vars));
  }
}

// First-order formulas over P/1, Q/1, R/2, propositional atoms p, q and =.
inline ndp::Formula first_order(Rng& rng, int depth, std::vector<std::string> vars = {}) {
  using ndp::Formula;
  if (depth <= 0 || coin(rng, 0.2)) {
    switch (pick(rng, 6)) {
      case 0: return Formula::atom(coin(rng) ? "p" : "q");
      case 1: return Formula::falsum();
      case 2: return Formula::atom("P", {term(rng, 1, vars)});
      case 3: return Formula::atom("Q", {term(rng, 1, vars)});
      case 4: return Formula::atom("R", {term(rng, 1, vars), term(rng, 1, vars)});
      default: return Formula::equals(term(rng, 2, vars), term(rng, 2, vars));
    }
  }
  switch (pick(rng, 6)) {
    case 0: return Formula::negation(first_order(rng, depth - 1, vars));
    case 1: return Formula::conj(first_order(rng, depth - 1, vars), first_order(rng, depth - 1, vars));
    case 2: return Formula::disj(first_order(rng, depth - 1, vars), first_order(rng, depth - 1, vars));
    case 3: return Formula::implies(first_order(rng, depth - 1, vars), first_order(rng, depth - 1, vars));
    default: {
      static const char* names[] = {"x", "y", "z"};
      std::string v = names[pick(rng, 3)];
      vars.push_back(v);
      Formula body = first_order(rng, depth - 1, vars);
      return coin(rng) ? Formula::forall(v, body) : Formula::exists(v, body);
    }
  }
}

// Arguments a user might supply for an offered rule.
inline ndp::RuleArgs arguments(Rng& rng, const ndp::ProofState& s, const ndp::Applicable& a) {
  ndp::RuleArgs args;
  args.side = a.side;
  args.axiom = a.axiom;
  std::set<std::string> names = s.proof.used_names();
  std::vector<std::string> pool(names.begin(), names.end());
  for (const auto& need : a.needs) {
    if (need == "witness") {
      if (!pool.empty() && coin(rng, 0.7))
        args.witness = ndp::parse_term(pool[pick(rng, pool.size())]);
      else
        args.witness = coin(rng) ? ndp::Term::zero() : ndp::fresh_constant(names);
    }
    if (need == "line") {
      auto scope = ndp::lines_in_scope(s, *s.proof.selection.goal);
      if (!scope.empty()) {
        std::vector<int> lines(scope.begin(), scope.end());
        args.line = lines[pick(rng, lines.size())];
      }
    }
    if (need == "bindings") {
      if (auto ax = s.system.axiom(a.axiom))
        for (const auto& v : ndp::free_vars(ax->schema)) args.bindings.emplace(v, term(rng, 1, {}));
    }
  }
  return args;
}

// Tries one random rule application. Returns false if nothing stuck.
inline bool random_application(Rng& rng, ndp::ProofState& s, int attempts = 8) {
  for (int i = 0; i < attempts; ++i) {
    auto goals = s.proof.goals();
    if (goals.empty()) return false;
    std::vector<int> open(goals.begin(), goals.end());
    ndp::ProofState next = ndp::select_goal(s, open[pick(rng, open.size())]);
    if (coin(rng, 0.6)) {
      std::vector<int> resources;
      for (int c : ndp::lines_in_scope(next, *next.proof.selection.goal))
        if (!next.proof.line(c).is_goal()) resources.push_back(c);
      if (!resources.empty()) next = ndp::select_resource(next, resources[pick(rng, resources.size())]);
    }
    auto offered = ndp::list_applicable(next);
    if (offered.empty()) continue;
    const auto& a = offered[pick(rng, offered.size())];
    try {
      s = ndp::apply_rule(next, a.rule, arguments(rng, next, a));
      return true;
    } catch (const ndp::Error&) {
    }
  }
  return false;
}

inline ndp::ProofState random_sequent(Rng& rng, bool first_order_formulas = false) {
  std::vector<ndp::Formula> premises;
  std::size_t n = pick(rng, 3);
  for (std::size_t i = 0; i < n; ++i)
    premises.push_back(first_order_formulas ? first_order(rng, 3) : propositional(rng, 3));
  ndp::Formula conclusion = first_order_formulas ? first_order(rng, 4) : propositional(rng, 4);
  static const ndp::SystemName systems[] = {ndp::SystemName::NJ, ndp::SystemName::NK, ndp::SystemName::PA};
  return ndp::new_proof(premises, conclusion, ndp::make_system(systems[pick(rng, 3)]));
}

// A random sequent followed by up to `depth` random applications. The
// sequent's formulas are retried until their arities are consistent.
inline ndp::ProofState random_session(Rng& rng, int depth, bool first_order_formulas = false) {
  for (;;) {
    try {
      ndp::ProofState s = random_sequent(rng, first_order_formulas);
      for (int i = 0; i < depth; ++i)
        if (!random_application(rng, s)) break;
      return s;
    } catch (const ndp::Error&) {
    }
  }
}

}  // namespace gen
