#pragma once

// The rule engine. Introduction rules work backward from the current goal
// and split it into subgoals; elimination rules work forward from the
// current resource. New lines always go immediately above the goal, inside
// its box, and take consecutive creation numbers.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndp/error.hpp"
#include "ndp/formula.hpp"
#include "ndp/proof.hpp"
#include "ndp/system.hpp"

namespace ndp {

namespace detail {

inline int add_line(Proof& p, Formula f, LineStatus status, std::optional<Justification> j,
                    LineRole role = LineRole::Derived) {
  int c = p.next_creation++;
  p.lines.emplace(c, ProofLine{c, std::move(f), status, std::move(j), role});
  return c;
}

inline int add_goal(Proof& p, Formula f) { return add_line(p, std::move(f), LineStatus::Goal, std::nullopt); }

inline int add_assumption(Proof& p, Formula f) {
  return add_line(p, std::move(f), LineStatus::Justified, Justification{Rule::Ass, {}, {}}, LineRole::Assumption);
}

inline void justify(Proof& p, int goal, Rule rule, std::vector<Ref> refs, std::string axiom = {}) {
  ProofLine& l = p.line(goal);
  l.status = LineStatus::Justified;
  l.justification = Justification{rule, std::move(axiom), std::move(refs)};
}

[[noreturn]] inline void mismatch(const std::string& what, int at) {
  throw Error(ErrorCode::ShapeMismatch, what, at);
}

[[noreturn]] inline void missing(const std::string& arg) {
  throw Error(ErrorCode::MissingArgument, arg);
}

// First in-scope justified line (vertical order) whose formula is `f`.
inline std::optional<int> find_reiteration(const Proof& p, const Structure& s, int goal, const Formula& f) {
  for (const auto& r : s.rows()) {
    const ProofLine& l = p.line(r.creation);
    if (!l.is_goal() && l.formula == f && s.in_scope(r.creation, goal)) return r.creation;
  }
  return std::nullopt;
}

// Any in-scope line (goal or justified) with formula `f`.
inline std::optional<int> find_in_scope(const Proof& p, const Structure& s, int goal, const Formula& f) {
  for (const auto& r : s.rows())
    if (p.line(r.creation).formula == f && s.in_scope(r.creation, goal)) return r.creation;
  return std::nullopt;
}

// Eigenvariable condition checked when a rule introduces a constant.
inline void check_eigenvariable(const Proof& p, const Structure& s, int goal, const Term& c,
                                const Formula* resource) {
  if (!c.is_name() || c.name == kZero)
    throw Error(ErrorCode::EigenvariableViolation, "eigenvariable must be a fresh name", goal);
  auto clash = [&](const Formula& f) { return occurs(c.name, f); };
  if (clash(p.line(goal).formula))
    throw Error(ErrorCode::EigenvariableViolation, c.name + " occurs in the goal", goal);
  if (resource && clash(*resource))
    throw Error(ErrorCode::EigenvariableViolation, c.name + " occurs in the resource", goal);
  for (const auto& [n, l] : p.lines) {
    if (l.role == LineRole::Premise && clash(l.formula))
      throw Error(ErrorCode::EigenvariableViolation, c.name + " occurs in premise " + std::to_string(n), goal);
    if (s.in_scope(n, goal) && clash(l.formula))
      throw Error(ErrorCode::EigenvariableViolation, c.name + " occurs in line " + std::to_string(n), goal);
  }
}

inline Term eigenvariable(const Proof& p, const Structure& s, int goal, const std::optional<Term>& requested,
                          const Formula* resource) {
  Term c = requested ? *requested : fresh_constant(p.used_names());
  check_eigenvariable(p, s, goal, c, resource);
  return c;
}

// Antecedent for →E/¬E: the requested line, an existing in-scope line, or
// (returned as nullopt) a new subgoal.
inline std::optional<int> antecedent(const Proof& p, const Structure& s, int goal, const Formula& a,
                                     const std::optional<int>& requested) {
  if (requested) {
    const ProofLine& l = p.line(*requested);
    if (!s.in_scope(*requested, goal))
      throw Error(ErrorCode::OutOfScope, "line " + std::to_string(*requested) + " is not in scope", *requested);
    if (l.formula != a) mismatch("line " + std::to_string(*requested) + " is not " + print_unicode(a), *requested);
    return requested;
  }
  return find_in_scope(p, s, goal, a);
}

// A forward rule derived `result` from `refs`: close the goal if it matches,
// otherwise record the result as a new justified line above the goal.
inline void conclude(Proof& p, int goal, const Formula& result, Rule rule, std::vector<Ref> refs) {
  if (p.line(goal).formula == result) {
    justify(p, goal, rule, std::move(refs));
    return;
  }
  int n = add_line(p, result, LineStatus::Justified, Justification{rule, {}, std::move(refs)});
  insert_above(p, goal, {LayoutNode::of_line(n)});
}

}  // namespace detail

// Applies one rule. Palette filtering is the caller's job; the system profile
// is enforced here. Returns the application with every implicit choice
// (fresh constants, cited lines) made explicit so replay is exact.
inline RuleApplication apply(Proof& p, const SystemProfile& sys, RuleApplication app) {
  using K = Formula::Kind;
  using detail::mismatch;
  using detail::missing;
  const Rule rule = app.rule;
  if (rule == Rule::Prem || rule == Rule::Ass)
    throw Error(ErrorCode::ShapeMismatch, std::string(rule_name(rule)) + " cannot be applied");
  if (!sys.allows(rule))
    throw Error(ErrorCode::RuleDisabled,
                std::string(rule_name(rule)) + " is not part of " + std::string(to_string(sys.name)));
  const int g = app.goal;
  if (!p.line(g).is_goal()) throw Error(ErrorCode::NotAGoal, "line " + std::to_string(g) + " is justified", g);
  const Structure s(p.layout);
  const Formula goal = p.line(g).formula;

  std::optional<Formula> res;
  int r = 0;
  if (is_forward(rule)) {
    if (!app.resource) missing("resource");
    r = *app.resource;
    const ProofLine& rl = p.line(r);
    if (rl.is_goal()) throw Error(ErrorCode::NotJustified, "resource " + std::to_string(r) + " is a goal", r);
    if (!s.in_scope(r, g))
      throw Error(ErrorCode::OutOfScope, "line " + std::to_string(r) + " is not in scope of goal " + std::to_string(g),
                  r);
    res = rl.formula;
  }

  switch (rule) {
    case Rule::AndI: {
      if (!goal.is(K::And)) mismatch("∧I needs a conjunction goal", g);
      int a = detail::add_goal(p, goal.left());
      int b = detail::add_goal(p, goal.right());
      insert_above(p, g, {LayoutNode::of_line(a), LayoutNode::of_line(b)});
      detail::justify(p, g, rule, {Ref::line(a), Ref::line(b)});
      break;
    }
    case Rule::OrI: {
      if (!goal.is(K::Or)) mismatch("∨I needs a disjunction goal", g);
      if (!app.args.side) missing("side");
      int n = detail::add_goal(p, *app.args.side == Side::Left ? goal.left() : goal.right());
      insert_above(p, g, {LayoutNode::of_line(n)});
      detail::justify(p, g, rule, {Ref::line(n)});
      break;
    }
    case Rule::ImpI:
    case Rule::NotI: {
      if (rule == Rule::ImpI && !goal.is(K::Implies)) mismatch("→I needs an implication goal", g);
      if (rule == Rule::NotI && !goal.is(K::Not)) mismatch("¬I needs a negation goal", g);
      int a = detail::add_assumption(p, rule == Rule::ImpI ? goal.left() : goal.operand());
      int b = detail::add_goal(p, rule == Rule::ImpI ? goal.right() : Formula::falsum());
      insert_above(p, g, {LayoutNode::of_box({LayoutNode::of_line(a), LayoutNode::of_line(b)})});
      detail::justify(p, g, rule, {Ref::range(a, b)});
      break;
    }
    case Rule::DoubleNegE: {
      int n = detail::add_goal(p, Formula::negation(Formula::negation(goal)));
      insert_above(p, g, {LayoutNode::of_line(n)});
      detail::justify(p, g, rule, {Ref::line(n)});
      break;
    }
    case Rule::AllI: {
      if (!goal.is(K::ForAll)) mismatch("∀I needs a universal goal", g);
      Term c = detail::eigenvariable(p, s, g, app.args.witness, nullptr);
      int n = detail::add_goal(p, substitute(goal.body(), goal.var(), c));
      insert_above(p, g, {LayoutNode::of_line(n)});
      detail::justify(p, g, rule, {Ref::line(n)});
      app.args.witness = c;
      break;
    }
    case Rule::ExI: {
      if (!goal.is(K::Exists)) mismatch("∃I needs an existential goal", g);
      if (!app.args.witness) missing("witness");
      int n = detail::add_goal(p, substitute(goal.body(), goal.var(), *app.args.witness));
      insert_above(p, g, {LayoutNode::of_line(n)});
      detail::justify(p, g, rule, {Ref::line(n)});
      break;
    }
    case Rule::EqI: {
      if (!goal.is(K::Equals) || goal.terms[0] != goal.terms[1]) mismatch("=I needs a goal t = t", g);
      detail::justify(p, g, rule, {});
      break;
    }
    case Rule::Ind: {
      if (!goal.is(K::ForAll)) mismatch("Ind needs a universal goal", g);
      const std::string& x = goal.var();
      Formula base = substitute(goal.body(), x, Term::zero());
      Formula step = Formula::forall(
          x, Formula::implies(goal.body(), substitute(goal.body(), x, Term::succ(Term::variable(x)))));
      int a = detail::add_goal(p, std::move(base));
      int b = detail::add_goal(p, std::move(step));
      insert_above(p, g, {LayoutNode::of_line(a), LayoutNode::of_line(b)});
      detail::justify(p, g, rule, {Ref::line(a), Ref::line(b)});
      break;
    }
    case Rule::Re: {
      std::optional<int> line = app.args.line;
      if (!line && app.resource && p.line(*app.resource).formula == goal) line = app.resource;
      if (!line) line = detail::find_reiteration(p, s, g, goal);
      if (!line) mismatch("no justified line in scope matches the goal", g);
      const ProofLine& l = p.line(*line);
      if (l.is_goal()) throw Error(ErrorCode::NotJustified, "line " + std::to_string(*line) + " is a goal", *line);
      if (!s.in_scope(*line, g))
        throw Error(ErrorCode::OutOfScope, "line " + std::to_string(*line) + " is not in scope", *line);
      if (l.formula != goal) mismatch("line " + std::to_string(*line) + " differs from the goal", g);
      detail::justify(p, g, rule, {Ref::line(*line)});
      app.args.line = line;
      break;
    }
    case Rule::Ax: {
      if (app.args.axiom.empty()) missing("axiomName");
      const Axiom* ax = sys.axiom(app.args.axiom);
      if (!ax) throw Error(ErrorCode::NoSuchAxiom, "no axiom named '" + app.args.axiom + "'", g);
      Formula inst = ax->schema;
      for (const auto& [v, t] : app.args.bindings) inst = substitute(inst, v, t);
      if (inst != goal) mismatch("axiom " + ax->name + " does not yield " + print_unicode(goal), g);
      detail::justify(p, g, rule, {}, ax->name);
      break;
    }
    case Rule::AndE: {
      if (!res->is(K::And)) mismatch("∧E needs a conjunction resource", r);
      if (!app.args.side) missing("side");
      detail::conclude(p, g, *app.args.side == Side::Left ? res->left() : res->right(), rule, {Ref::line(r)});
      break;
    }
    case Rule::ImpE:
    case Rule::NotE: {
      Formula a, b;
      if (rule == Rule::ImpE) {
        if (!res->is(K::Implies)) mismatch("→E needs an implication resource", r);
        a = res->left();
        b = res->right();
      } else {
        if (!res->is(K::Not)) mismatch("¬E needs a negation resource", r);
        if (!goal.is(K::Falsum)) mismatch("¬E concludes ⊥", g);
        a = res->operand();
        b = Formula::falsum();
      }
      std::optional<int> na = detail::antecedent(p, s, g, a, app.args.line);
      app.args.line = na;
      if (!na) {
        na = detail::add_goal(p, a);
        insert_above(p, g, {LayoutNode::of_line(*na)});
      }
      detail::conclude(p, g, b, rule, {Ref::line(r), Ref::line(*na)});
      break;
    }
    case Rule::OrE: {
      if (!res->is(K::Or)) mismatch("∨E needs a disjunction resource", r);
      int a1 = detail::add_assumption(p, res->left());
      int g1 = detail::add_goal(p, goal);
      int a2 = detail::add_assumption(p, res->right());
      int g2 = detail::add_goal(p, goal);
      insert_above(p, g,
                   {LayoutNode::of_box({LayoutNode::of_line(a1), LayoutNode::of_line(g1)}),
                    LayoutNode::of_box({LayoutNode::of_line(a2), LayoutNode::of_line(g2)})});
      detail::justify(p, g, rule, {Ref::line(r), Ref::range(a1, g1), Ref::range(a2, g2)});
      break;
    }
    case Rule::FalsumE: {
      if (!res->is(K::Falsum)) mismatch("⊥E needs ⊥ as resource", r);
      detail::justify(p, g, rule, {Ref::line(r)});
      break;
    }
    case Rule::AllE: {
      if (!res->is(K::ForAll)) mismatch("∀E needs a universal resource", r);
      if (!app.args.witness) missing("witness");
      detail::conclude(p, g, substitute(res->body(), res->var(), *app.args.witness), rule, {Ref::line(r)});
      break;
    }
    case Rule::ExE: {
      if (!res->is(K::Exists)) mismatch("∃E needs an existential resource", r);
      Term c = detail::eigenvariable(p, s, g, app.args.witness, &*res);
      int a = detail::add_assumption(p, substitute(res->body(), res->var(), c));
      int b = detail::add_goal(p, goal);
      insert_above(p, g, {LayoutNode::of_box({LayoutNode::of_line(a), LayoutNode::of_line(b)})});
      detail::justify(p, g, rule, {Ref::line(r), Ref::range(a, b)});
      app.args.witness = c;
      break;
    }
    case Rule::EqE: {
      if (!res->is(K::Equals)) mismatch("=E needs an equation resource", r);
      if (!app.args.line) missing("line");
      int m = *app.args.line;
      const ProofLine& ml = p.line(m);
      if (ml.is_goal()) throw Error(ErrorCode::NotJustified, "line " + std::to_string(m) + " is a goal", m);
      if (!s.in_scope(m, g))
        throw Error(ErrorCode::OutOfScope, "line " + std::to_string(m) + " is not in scope", m);
      detail::conclude(p, g, replace_term(ml.formula, res->terms[0], res->terms[1]), rule,
                       {Ref::line(r), Ref::line(m)});
      break;
    }
    case Rule::Prem:
    case Rule::Ass: break;
  }
  return app;
}

// One entry per applicable rule; sided rules appear once per side.
struct Applicable {
  Rule rule = Rule::Re;
  std::optional<Side> side;
  std::string axiom;
  std::vector<std::string> needs;  // arguments still to be supplied: witness, line, bindings

  std::string label() const {
    std::string s = rule_label(rule, axiom);
    if (side) s += "(" + std::string(to_string(*side)) + ")";
    return s;
  }

  friend bool operator==(const Applicable&, const Applicable&) = default;
};

inline std::vector<Applicable> list_applicable(const Proof& p, const SystemProfile& sys, const RuleSet& palette) {
  using K = Formula::Kind;
  std::vector<Applicable> out;
  if (!p.selection.goal) return out;
  const int g = *p.selection.goal;
  const Structure s(p.layout);
  const Formula& goal = p.line(g).formula;
  const Formula* res = p.selection.resource ? &p.line(*p.selection.resource).formula : nullptr;
  auto on = [&](Rule r) { return palette.contains(r) && sys.allows(r); };
  auto add = [&](Rule r, std::vector<std::string> needs = {}) {
    if (on(r)) out.push_back({r, std::nullopt, {}, std::move(needs)});
  };
  auto add_sided = [&](Rule r) {
    if (!on(r)) return;
    out.push_back({r, Side::Left, {}, {}});
    out.push_back({r, Side::Right, {}, {}});
  };

  if (goal.is(K::And)) add(Rule::AndI);
  if (goal.is(K::Or)) add_sided(Rule::OrI);
  if (goal.is(K::Implies)) add(Rule::ImpI);
  if (goal.is(K::Not)) add(Rule::NotI);
  add(Rule::DoubleNegE);
  if (goal.is(K::ForAll)) add(Rule::AllI);
  if (goal.is(K::Exists)) add(Rule::ExI, {"witness"});
  if (goal.is(K::Equals) && goal.terms[0] == goal.terms[1]) add(Rule::EqI);
  if (goal.is(K::ForAll)) add(Rule::Ind);
  if (detail::find_reiteration(p, s, g, goal)) add(Rule::Re);
  if (on(Rule::Ax)) {
    for (const auto& ax : sys.axioms) {
      bool schematic = !free_vars(ax.schema).empty();
      if (ax.schema == goal || schematic)
        out.push_back({Rule::Ax, std::nullopt, ax.name, schematic ? std::vector<std::string>{"bindings"}
                                                                  : std::vector<std::string>{}});
    }
  }

  if (res) {
    if (res->is(K::And)) add_sided(Rule::AndE);
    if (res->is(K::Implies)) add(Rule::ImpE);
    if (res->is(K::Not) && goal.is(K::Falsum)) add(Rule::NotE);
    if (res->is(K::Or)) add(Rule::OrE);
    if (res->is(K::Falsum)) add(Rule::FalsumE);
    if (res->is(K::ForAll)) add(Rule::AllE, {"witness"});
    if (res->is(K::Exists)) add(Rule::ExE);
    if (res->is(K::Equals)) add(Rule::EqE, {"line"});
  }
  return out;
}

inline constexpr int kMagicRounds = 10;

// Goal-driven rules that need no input, in the order magic tries them.
inline constexpr Rule kMagicRules[] = {Rule::Re, Rule::AndI, Rule::ImpI, Rule::NotI, Rule::AllI, Rule::EqI};

struct MagicResult {
  std::vector<RuleApplication> steps;
  int rounds = 0;
};

inline bool magic_matches(const Proof& p, const Structure& s, int g, Rule r) {
  using K = Formula::Kind;
  const Formula& f = p.line(g).formula;
  switch (r) {
    case Rule::Re: return detail::find_reiteration(p, s, g, f).has_value();
    case Rule::AndI: return f.is(K::And);
    case Rule::ImpI: return f.is(K::Implies);
    case Rule::NotI: return f.is(K::Not);
    case Rule::AllI: return f.is(K::ForAll);
    case Rule::EqI: return f.is(K::Equals) && f.terms[0] == f.terms[1];
    default: return false;
  }
}

// Each round visits the goals open at its start, in creation order, and
// applies the first matching automatic rule. Stops after a round that
// changes nothing, or after kMagicRounds rounds.
inline MagicResult magic(Proof& p, const SystemProfile& sys, const RuleSet& palette) {
  MagicResult out;
  while (out.rounds < kMagicRounds) {
    ++out.rounds;
    bool changed = false;
    for (int g : p.goals()) {
      if (!p.line(g).is_goal()) continue;
      const Structure s(p.layout);
      for (Rule r : kMagicRules) {
        if (!palette.contains(r) || !sys.allows(r) || !magic_matches(p, s, g, r)) continue;
        out.steps.push_back(apply(p, sys, RuleApplication{r, g, std::nullopt, {}}));
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace ndp
