#pragma once

// Independent proof checker. Works from the line table and layout alone:
// selection and history are never consulted, so hand-built or edited
// proofs get the same scrutiny as engine-built ones.

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ndp/formula.hpp"
#include "ndp/proof.hpp"
#include "ndp/system.hpp"

namespace ndp {

enum class CheckStatus { Complete, IncompleteButSound, Invalid };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Complete: return "Complete";
    case CheckStatus::IncompleteButSound: return "IncompleteButSound";
    case CheckStatus::Invalid: return "Invalid";
  }
  return "Invalid";
}

struct Diagnostic {
  int creation = 0;
  std::string code;  // ScopeViolation, ShapeMismatch, BadRange, BadNumbering,
                     // EigenvariableViolation, RuleNotInSystem, UnjustifiedLine
  std::string message;

  std::string line() const { return std::to_string(creation) + ":" + code + ":" + message; }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct CheckReport {
  CheckStatus status = CheckStatus::Complete;
  std::vector<Diagnostic> diagnostics;

  // "<creation>:<code>:<message>" per diagnostic.
  std::string text() const {
    std::string out;
    for (const auto& d : diagnostics) out += d.line() + "\n";
    return out;
  }
};

namespace detail {

class LineChecker {
 public:
  LineChecker(const Proof& p, const SystemProfile& sys) : p_(p), sys_(sys), s_(p.layout) {}

  void check_layout(std::vector<Diagnostic>& out) const {
    std::set<int> seen;
    for (const auto& r : s_.rows()) {
      if (!p_.has_line(r.creation))
        out.push_back({r.creation, "BadNumbering", "layout names line " + std::to_string(r.creation) +
                                                       " which does not exist"});
      else if (!seen.insert(r.creation).second)
        out.push_back({r.creation, "BadNumbering", "line " + std::to_string(r.creation) + " appears twice"});
    }
    int expected = 1;
    for (const auto& [c, l] : p_.lines) {
      if (c != expected || l.creation != c)
        out.push_back({c, "BadNumbering", "creation numbers are not a permutation of 1.." +
                                              std::to_string(p_.lines.size())});
      if (!seen.contains(c)) out.push_back({c, "BadNumbering", "line is missing from the layout"});
      ++expected;
    }
    for (const auto& b : s_.boxes()) {
      int at = b.assumption.value_or(b.terminal.value_or(0));
      if (b.empty)
        out.push_back({at, "BadRange", "empty box"});
      else if (!b.assumption || !p_.has_line(*b.assumption) || p_.line(*b.assumption).role != LineRole::Assumption)
        out.push_back({at, "BadRange", "box does not open with an assumption"});
      else if (!b.terminal)
        out.push_back({at, "BadRange", "box does not end with a line"});
    }
  }

  // Diagnostics attributable to one line.
  void check_line(int c, std::vector<Diagnostic>& out) const {
    if (!s_.index_of(c)) return;  // reported by check_layout
    const ProofLine& l = p_.line(c);
    if (l.is_goal()) {
      if (l.role != LineRole::Derived) out.push_back({c, "UnjustifiedLine", "premises and assumptions are never goals"});
      return;
    }
    if (!l.justification) {
      out.push_back({c, "UnjustifiedLine", "justified line without a justification"});
      return;
    }
    const Justification& j = *l.justification;
    if (!sys_.allows(j.rule)) {
      out.push_back({c, "RuleNotInSystem",
                     std::string(rule_name(j.rule)) + " is not part of " + std::string(to_string(sys_.name))});
      return;
    }
    std::vector<Diagnostic> local;
    if (!refs_ok(c, j, local)) {
      out.insert(out.end(), local.begin(), local.end());
      return;
    }
    shape(c, l, j, out);
  }

 private:
  bool refs_ok(int c, const Justification& j, std::vector<Diagnostic>& out) const {
    for (const auto& ref : j.refs) {
      if (!ref.is_range()) {
        if (!p_.has_line(ref.first) || !s_.index_of(ref.first)) {
          out.push_back({c, "BadRange", "cites missing line " + ref.text()});
        } else if (!s_.in_scope(ref.first, c)) {
          out.push_back({c, "ScopeViolation", "line " + ref.text() + " is not in scope"});
        }
        continue;
      }
      const BoxInfo* b = s_.find_box(ref.first, *ref.last);
      if (!b || !p_.has_line(ref.first) || !p_.has_line(*ref.last))
        out.push_back({c, "BadRange", ref.text() + " is not a box"});
      else if (!s_.box_in_scope(*b, c))
        out.push_back({c, "ScopeViolation", "box " + ref.text() + " is not in scope"});
    }
    return out.empty();
  }

  const Formula& f(int c) const { return p_.line(c).formula; }

  void expect_refs(const Justification& j, std::initializer_list<bool> ranges, int c,
                   std::vector<Diagnostic>& out, bool& ok) const {
    ok = j.refs.size() == ranges.size();
    if (ok) {
      std::size_t i = 0;
      for (bool r : ranges) ok = ok && j.refs[i++].is_range() == r;
    }
    if (!ok) out.push_back({c, "ShapeMismatch", "wrong citations for " + j.label()});
  }

  void bad(int c, const std::string& msg, std::vector<Diagnostic>& out) const {
    out.push_back({c, "ShapeMismatch", msg});
  }

  // Eigenvariable `name` must be absent from the conclusion, the premises
  // and every assumption open at line c (and the resource, for ∃E).
  void eigen(int c, const Term& t, const Formula& conclusion, const Formula* resource,
             std::vector<Diagnostic>& out) const {
    if (!t.is_name() || t.name == kZero) {
      out.push_back({c, "EigenvariableViolation", "instance term " + print_unicode(t) + " is not a fresh name"});
      return;
    }
    const std::string& n = t.name;
    if (occurs(n, conclusion)) {
      out.push_back({c, "EigenvariableViolation", n + " occurs in the conclusion"});
      return;
    }
    if (resource && occurs(n, *resource)) {
      out.push_back({c, "EigenvariableViolation", n + " occurs in the eliminated formula"});
      return;
    }
    for (const auto& [k, l] : p_.lines) {
      if (l.role == LineRole::Premise && occurs(n, l.formula)) {
        out.push_back({c, "EigenvariableViolation", n + " occurs in premise " + std::to_string(k)});
        return;
      }
    }
    for (int a : s_.open_assumptions(c)) {
      if (p_.has_line(a) && occurs(n, f(a))) {
        out.push_back({c, "EigenvariableViolation", n + " occurs in open assumption " + std::to_string(a)});
        return;
      }
    }
  }

  void shape(int c, const ProofLine& l, const Justification& j, std::vector<Diagnostic>& out) const {
    using K = Formula::Kind;
    const Formula& g = l.formula;
    bool ok = false;
    auto ln = [&](std::size_t i) { return j.refs[i].first; };
    auto last = [&](std::size_t i) { return *j.refs[i].last; };
    switch (j.rule) {
      case Rule::Prem:
        expect_refs(j, {}, c, out, ok);
        if (ok && (l.role != LineRole::Premise || s_.row(c).depth != 0)) bad(c, "premises sit at top level", out);
        break;
      case Rule::Ass: {
        expect_refs(j, {}, c, out, ok);
        bool opens = false;
        for (const auto& b : s_.boxes()) opens = opens || b.assumption == c;
        if (ok && (!opens || l.role != LineRole::Assumption)) bad(c, "assumptions must open a box", out);
        break;
      }
      case Rule::AndI:
        expect_refs(j, {false, false}, c, out, ok);
        if (ok && !(g.is(K::And) && f(ln(0)) == g.left() && f(ln(1)) == g.right()))
          bad(c, "∧I needs the two conjuncts", out);
        break;
      case Rule::OrI:
        expect_refs(j, {false}, c, out, ok);
        if (ok && !(g.is(K::Or) && (f(ln(0)) == g.left() || f(ln(0)) == g.right())))
          bad(c, "∨I needs one disjunct", out);
        break;
      case Rule::ImpI:
        expect_refs(j, {true}, c, out, ok);
        if (ok && !(g.is(K::Implies) && f(ln(0)) == g.left() && f(last(0)) == g.right()))
          bad(c, "→I needs a box from the antecedent to the consequent", out);
        break;
      case Rule::NotI:
        expect_refs(j, {true}, c, out, ok);
        if (ok && !(g.is(K::Not) && f(ln(0)) == g.operand() && f(last(0)).is(K::Falsum)))
          bad(c, "¬I needs a box from the negated formula to ⊥", out);
        break;
      case Rule::DoubleNegE:
        expect_refs(j, {false}, c, out, ok);
        if (ok && f(ln(0)) != Formula::negation(Formula::negation(g))) bad(c, "¬¬E needs ¬¬ of the line", out);
        break;
      case Rule::AllI: {
        expect_refs(j, {false}, c, out, ok);
        if (!ok) break;
        if (!g.is(K::ForAll)) {
          bad(c, "∀I concludes a universal formula", out);
          break;
        }
        InstanceMatch m = match_instance(g.body(), g.var(), f(ln(0)));
        if (!m.matches)
          bad(c, "cited line is not an instance of the body", out);
        else if (m.witness)
          eigen(c, *m.witness, g, nullptr, out);
        break;
      }
      case Rule::ExI:
        expect_refs(j, {false}, c, out, ok);
        if (ok && !(g.is(K::Exists) && match_instance(g.body(), g.var(), f(ln(0))).matches))
          bad(c, "∃I needs an instance of the body", out);
        break;
      case Rule::EqI:
        expect_refs(j, {}, c, out, ok);
        if (ok && !(g.is(K::Equals) && g.terms[0] == g.terms[1])) bad(c, "=I proves only t = t", out);
        break;
      case Rule::Ind: {
        expect_refs(j, {false, false}, c, out, ok);
        if (!ok) break;
        if (!g.is(K::ForAll)) {
          bad(c, "Ind concludes a universal formula", out);
          break;
        }
        const std::string& x = g.var();
        Formula base = substitute(g.body(), x, Term::zero());
        Formula step =
            Formula::forall(x, Formula::implies(g.body(), substitute(g.body(), x, Term::succ(Term::variable(x)))));
        if (f(ln(0)) != base || f(ln(1)) != step) bad(c, "Ind needs the base case and the step", out);
        break;
      }
      case Rule::Re:
        expect_refs(j, {false}, c, out, ok);
        if (ok && f(ln(0)) != g) bad(c, "Re repeats an identical line", out);
        break;
      case Rule::Ax: {
        expect_refs(j, {}, c, out, ok);
        if (!ok) break;
        const Axiom* ax = sys_.axiom(j.axiom);
        if (!ax) {
          out.push_back({c, "RuleNotInSystem", "no axiom named '" + j.axiom + "'"});
          break;
        }
        if (!is_schema_instance(ax->schema, g)) bad(c, "not an instance of axiom " + ax->name, out);
        break;
      }
      case Rule::AndE:
        expect_refs(j, {false}, c, out, ok);
        if (ok && !(f(ln(0)).is(K::And) && (f(ln(0)).left() == g || f(ln(0)).right() == g)))
          bad(c, "∧E yields a conjunct", out);
        break;
      case Rule::ImpE:
        expect_refs(j, {false, false}, c, out, ok);
        if (ok && !(f(ln(0)).is(K::Implies) && f(ln(1)) == f(ln(0)).left() && f(ln(0)).right() == g))
          bad(c, "→E needs the implication and its antecedent", out);
        break;
      case Rule::NotE:
        expect_refs(j, {false, false}, c, out, ok);
        if (ok && !(f(ln(0)).is(K::Not) && f(ln(1)) == f(ln(0)).operand() && g.is(K::Falsum)))
          bad(c, "¬E needs ¬A and A and concludes ⊥", out);
        break;
      case Rule::OrE: {
        expect_refs(j, {false, true, true}, c, out, ok);
        if (!ok) break;
        const Formula& d = f(ln(0));
        if (!(d.is(K::Or) && f(ln(1)) == d.left() && f(ln(2)) == d.right() && f(last(1)) == g && f(last(2)) == g))
          bad(c, "∨E needs a box per disjunct, each ending in the conclusion", out);
        break;
      }
      case Rule::FalsumE:
        expect_refs(j, {false}, c, out, ok);
        if (ok && !f(ln(0)).is(K::Falsum)) bad(c, "⊥E needs ⊥", out);
        break;
      case Rule::AllE:
        expect_refs(j, {false}, c, out, ok);
        if (ok && !(f(ln(0)).is(K::ForAll) && match_instance(f(ln(0)).body(), f(ln(0)).var(), g).matches))
          bad(c, "∀E yields an instance", out);
        break;
      case Rule::ExE: {
        expect_refs(j, {false, true}, c, out, ok);
        if (!ok) break;
        const Formula& e = f(ln(0));
        if (!e.is(K::Exists) || f(last(1)) != g) {
          bad(c, "∃E needs an existential and a box ending in the conclusion", out);
          break;
        }
        InstanceMatch m = match_instance(e.body(), e.var(), f(ln(1)));
        if (!m.matches)
          bad(c, "box assumption is not an instance of the existential", out);
        else if (m.witness)
          eigen(c, *m.witness, g, &e, out);
        break;
      }
      case Rule::EqE:
        expect_refs(j, {false, false}, c, out, ok);
        if (ok && !(f(ln(0)).is(K::Equals) && replace_term(f(ln(1)), f(ln(0)).terms[0], f(ln(0)).terms[1]) == g))
          bad(c, "=E rewrites the second line with the equation", out);
        break;
    }
  }

  // Axiom schemas may carry free variables; match them against the line.
  static bool is_schema_instance(const Formula& schema, const Formula& g) {
    Formula inst = g;
    Formula pat = schema;
    for (const auto& v : free_vars(schema)) {
      InstanceMatch m = match_instance(pat, v, inst);
      if (!m.matches) return false;
      if (m.witness) pat = substitute(pat, v, *m.witness);
    }
    return pat == inst;
  }

  const Proof& p_;
  const SystemProfile& sys_;
  Structure s_;
};

}  // namespace detail

inline CheckReport check_proof(const Proof& p, const SystemProfile& sys) {
  CheckReport r;
  detail::LineChecker checker(p, sys);
  checker.check_layout(r.diagnostics);
  for (const auto& [c, l] : p.lines) checker.check_line(c, r.diagnostics);
  if (!r.diagnostics.empty())
    r.status = CheckStatus::Invalid;
  else
    r.status = p.complete() ? CheckStatus::Complete : CheckStatus::IncompleteButSound;
  return r;
}

inline std::vector<Diagnostic> check_line(const Proof& p, int creation, const SystemProfile& sys) {
  p.line(creation);
  std::vector<Diagnostic> all;
  detail::LineChecker checker(p, sys);
  checker.check_layout(all);
  checker.check_line(creation, all);
  std::vector<Diagnostic> out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out),
               [&](const Diagnostic& d) { return d.creation == creation; });
  return out;
}

}  // namespace ndp
