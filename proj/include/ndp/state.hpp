#pragma once

// ProofState: a proof plus its settings and event-sourced history. Every
// visible state is reproducible by replaying the history prefix up to the
// undo cursor from the initial sequent.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndp/error.hpp"
#include "ndp/formula.hpp"
#include "ndp/proof.hpp"
#include "ndp/rules.hpp"
#include "ndp/system.hpp"

namespace ndp {

enum class EventKind { Select, Apply, Magic };

struct Event {
  EventKind kind = EventKind::Select;
  Selection selection;                  // Select: the resulting selection
  std::vector<RuleApplication> steps;   // Apply: one step; Magic: every step it took

  static Event select(Selection s) { return {EventKind::Select, s, {}}; }
  static Event apply(RuleApplication a) { return {EventKind::Apply, {}, {std::move(a)}}; }
  static Event magic(std::vector<RuleApplication> steps) { return {EventKind::Magic, {}, std::move(steps)}; }

  bool is_application() const { return kind != EventKind::Select; }

  friend bool operator==(const Event&, const Event&) = default;
};

struct History {
  std::vector<Event> events;
  std::size_t cursor = 0;  // events[cursor..] is the redo tail

  std::size_t applications() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < cursor; ++i) n += events[i].is_application();
    return n;
  }

  friend bool operator==(const History&, const History&) = default;
};

struct ProofState {
  std::vector<Formula> premises;
  Formula conclusion;
  SystemProfile system;
  RuleSet palette;
  Proof proof;
  History history;

  bool complete() const { return proof.complete(); }

  friend bool operator==(const ProofState&, const ProofState&) = default;
};

// Everything but the history: what the user sees.
inline bool same_visible_state(const ProofState& a, const ProofState& b) {
  return a.premises == b.premises && a.conclusion == b.conclusion && a.system == b.system &&
         a.palette == b.palette && a.proof == b.proof;
}

inline ProofState new_proof(std::vector<Formula> premises, Formula conclusion, SystemProfile system) {
  ProofState s;
  s.proof = new_proof(premises, conclusion);
  s.premises = std::move(premises);
  s.conclusion = std::move(conclusion);
  s.palette = default_palette(system);
  s.system = std::move(system);
  return s;
}

namespace detail {

inline void record(History& h, Event e) {
  h.events.resize(h.cursor);
  h.events.push_back(std::move(e));
  h.cursor = h.events.size();
}

inline void apply_step(Proof& p, const SystemProfile& sys, const RuleApplication& step) {
  apply(p, sys, step);
  p.selection = {step.goal, step.resource};
  normalize_selection(p);
}

// Palette is not consulted: saved histories replay even for disabled rules.
inline void apply_event(Proof& p, const SystemProfile& sys, const Event& e) {
  switch (e.kind) {
    case EventKind::Select: {
      Selection want = e.selection;
      p.selection = want;
      normalize_selection(p);
      if (!(p.selection == want)) throw Error(ErrorCode::ShapeMismatch, "recorded selection is not valid");
      break;
    }
    case EventKind::Apply:
      for (const auto& step : e.steps) apply_step(p, sys, step);
      break;
    case EventKind::Magic: {
      Selection saved = p.selection;
      for (const auto& step : e.steps) apply(p, sys, step);
      p.selection = saved;
      normalize_selection(p);
      break;
    }
  }
}

}  // namespace detail

// Proof after events[0..count), starting from the initial sequent.
inline Proof replay_events(const std::vector<Formula>& premises, const Formula& conclusion,
                           const SystemProfile& sys, const std::vector<Event>& events, std::size_t count) {
  Proof p = new_proof(premises, conclusion);
  for (std::size_t i = 0; i < count && i < events.size(); ++i) {
    try {
      detail::apply_event(p, sys, events[i]);
    } catch (const Error& e) {
      throw Error(ErrorCode::ReplayError,
                  "event " + std::to_string(i) + ": " + std::string(to_string(e.code())) + ": " + e.detail(),
                  static_cast<int>(i));
    }
  }
  return p;
}

inline void rebuild(ProofState& s) {
  s.proof = replay_events(s.premises, s.conclusion, s.system, s.history.events, s.history.cursor);
}

inline ProofState select_goal(ProofState s, int creation) {
  s.proof = select_goal(std::move(s.proof), creation);
  detail::record(s.history, Event::select(s.proof.selection));
  return s;
}

inline ProofState select_resource(ProofState s, int creation) {
  s.proof = select_resource(std::move(s.proof), creation);
  detail::record(s.history, Event::select(s.proof.selection));
  return s;
}

inline std::set<int> lines_in_scope(const ProofState& s, int creation) { return lines_in_scope(s.proof, creation); }

inline RenderedProof render(const ProofState& s) { return render(s.proof); }

// Applies a rule to the selected goal (and resource). A zero goal or empty
// resource in `app` is filled from the selection.
inline ProofState apply_rule(ProofState s, RuleApplication app) {
  if (!s.palette.contains(app.rule) && app.rule != Rule::Prem && app.rule != Rule::Ass)
    throw Error(ErrorCode::RuleDisabled, std::string(rule_name(app.rule)) + " is switched off in the palette");
  if (app.goal == 0) {
    if (!s.proof.selection.goal) throw Error(ErrorCode::NoGoalSelected, "select a goal first");
    app.goal = *s.proof.selection.goal;
  }
  if (!app.resource) app.resource = s.proof.selection.resource;
  if (!is_forward(app.rule) && app.rule != Rule::Re) app.resource.reset();
  RuleApplication resolved = apply(s.proof, s.system, std::move(app));
  s.proof.selection = {resolved.goal, resolved.resource};
  normalize_selection(s.proof);
  detail::record(s.history, Event::apply(std::move(resolved)));
  return s;
}

inline ProofState apply_rule(ProofState s, Rule rule, RuleArgs args = {}) {
  return apply_rule(std::move(s), RuleApplication{rule, 0, std::nullopt, std::move(args)});
}

inline ProofState instantiate_axiom(ProofState s, const std::string& name, std::map<std::string, Term> bindings = {}) {
  if (!s.system.axiom(name)) throw Error(ErrorCode::NoSuchAxiom, "no axiom named '" + name + "'");
  RuleArgs args;
  args.axiom = name;
  args.bindings = std::move(bindings);
  return apply_rule(std::move(s), Rule::Ax, std::move(args));
}

inline std::vector<Applicable> list_applicable(const ProofState& s) {
  return list_applicable(s.proof, s.system, s.palette);
}

// The palette only filters what is offered; it never touches the proof.
inline ProofState toggle_palette(ProofState s, Rule rule, bool on) {
  if (on)
    s.palette.insert(rule);
  else
    s.palette.erase(rule);
  return s;
}

// Runs magic mode and reports how many rounds it took. A run that changes
// nothing leaves the history untouched.
inline int run_magic(ProofState& s) {
  Proof p = s.proof;
  MagicResult m = magic(p, s.system, s.palette);
  if (m.steps.empty()) return m.rounds;
  p.selection = s.proof.selection;
  normalize_selection(p);
  s.proof = std::move(p);
  detail::record(s.history, Event::magic(std::move(m.steps)));
  return m.rounds;
}

inline ProofState magic(ProofState s) {
  run_magic(s);
  return s;
}

// Undo reverts the last rule application together with the selections that
// led up to it, landing on the state right after the previous application.
inline ProofState undo(ProofState s) {
  const auto& ev = s.history.events;
  std::optional<std::size_t> last;
  for (std::size_t i = s.history.cursor; i-- > 0;)
    if (ev[i].is_application()) {
      last = i;
      break;
    }
  if (!last) throw Error(ErrorCode::NothingToUndo, "nothing to undo");
  std::size_t cursor = 0;
  for (std::size_t i = *last; i-- > 0;)
    if (ev[i].is_application()) {
      cursor = i + 1;
      break;
    }
  s.history.cursor = cursor;
  rebuild(s);
  return s;
}

inline ProofState redo(ProofState s) {
  const auto& ev = s.history.events;
  std::optional<std::size_t> next;
  for (std::size_t i = s.history.cursor; i < ev.size(); ++i)
    if (ev[i].is_application()) {
      next = i;
      break;
    }
  if (!next) throw Error(ErrorCode::NothingToRedo, "nothing to redo");
  s.history.cursor = *next + 1;
  rebuild(s);
  return s;
}

// State right after the k-th rule application (k = 0: the initial sequent).
inline Proof proof_after_applications(const ProofState& s, std::size_t k) {
  const auto& ev = s.history.events;
  std::size_t count = 0, seen = 0;
  while (seen < k && count < s.history.cursor) {
    if (ev[count].is_application()) ++seen;
    ++count;
  }
  if (seen < k) throw Error(ErrorCode::ReplayError, "only " + std::to_string(seen) + " applications recorded");
  return replay_events(s.premises, s.conclusion, s.system, ev, count);
}

}  // namespace ndp
