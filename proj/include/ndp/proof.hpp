#pragma once

// Proof lines, boxes and the creation-order numbering; scope computation,
// goal/resource selection and the row rendering every display surface uses.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ndp/error.hpp"
#include "ndp/formula.hpp"
#include "ndp/system.hpp"

namespace ndp {

enum class LineStatus { Goal, Justified };
enum class LineRole { Premise, Assumption, Derived };

// A cited line, or a box cited by its assumption and terminal line.
struct Ref {
  int first = 0;
  std::optional<int> last;

  static Ref line(int c) { return {c, std::nullopt}; }
  static Ref range(int assumption, int conclusion) { return {assumption, conclusion}; }
  bool is_range() const { return last.has_value(); }

  // Ranges keep creation order even when it differs from vertical order.
  std::string text() const {
    return last ? std::to_string(first) + "-" + std::to_string(*last) : std::to_string(first);
  }

  friend bool operator==(const Ref&, const Ref&) = default;
};

struct Justification {
  Rule rule = Rule::Prem;
  std::string axiom;  // Ax only
  std::vector<Ref> refs;

  std::string refs_text() const {
    std::string s;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (i) s += ",";
      s += refs[i].text();
    }
    return s;
  }
  std::string label() const { return rule_label(rule, axiom); }
  // "1,5-6,7-8,∨E"
  std::string text() const {
    std::string r = refs_text();
    return r.empty() ? label() : r + "," + label();
  }

  friend bool operator==(const Justification&, const Justification&) = default;
};

struct ProofLine {
  int creation = 0;
  Formula formula;
  LineStatus status = LineStatus::Goal;
  std::optional<Justification> justification;
  LineRole role = LineRole::Derived;

  bool is_goal() const { return status == LineStatus::Goal; }

  friend bool operator==(const ProofLine&, const ProofLine&) = default;
};

// A line (line != 0) or a box holding nested nodes (line == 0).
struct LayoutNode {
  int line = 0;
  std::vector<LayoutNode> box;

  static LayoutNode of_line(int c) { return {c, {}}; }
  static LayoutNode of_box(std::vector<LayoutNode> contents) { return {0, std::move(contents)}; }
  bool is_box() const { return line == 0; }

  friend bool operator==(const LayoutNode&, const LayoutNode&) = default;
};

using Layout = std::vector<LayoutNode>;

struct Selection {
  std::optional<int> goal;
  std::optional<int> resource;

  friend bool operator==(const Selection&, const Selection&) = default;
};

struct Proof {
  std::map<int, ProofLine> lines;
  Layout layout;
  int next_creation = 1;
  Selection selection;

  bool has_line(int c) const { return lines.contains(c); }

  const ProofLine& line(int c) const {
    auto it = lines.find(c);
    if (it == lines.end()) throw Error(ErrorCode::NoSuchLine, "no line " + std::to_string(c), c);
    return it->second;
  }

  ProofLine& line(int c) {
    auto it = lines.find(c);
    if (it == lines.end()) throw Error(ErrorCode::NoSuchLine, "no line " + std::to_string(c), c);
    return it->second;
  }

  bool complete() const {
    return std::none_of(lines.begin(), lines.end(), [](const auto& kv) { return kv.second.is_goal(); });
  }

  std::vector<int> goals() const {
    std::vector<int> out;
    for (const auto& [c, l] : lines)
      if (l.is_goal()) out.push_back(c);
    return out;
  }

  std::vector<Formula> premises() const {
    std::vector<Formula> out;
    for (const auto& [c, l] : lines)
      if (l.role == LineRole::Premise) out.push_back(l.formula);
    return out;
  }

  // Every name used by any line, for eigenvariable freshness.
  std::set<std::string> used_names() const {
    std::set<std::string> out;
    for (const auto& [c, l] : lines) collect_names(l.formula, out);
    return out;
  }

  friend bool operator==(const Proof&, const Proof&) = default;
};

// ---------- structure ----------

struct RowPos {
  int creation = 0;
  int depth = 0;
  std::vector<int> boxes;  // enclosing box ids, outermost first
};

struct BoxInfo {
  int id = 0;
  std::vector<int> parents;  // enclosing box ids, outermost first
  std::size_t first_row = 0;
  std::size_t last_row = 0;
  std::optional<int> assumption;  // first node, when it is a line
  std::optional<int> terminal;    // last node, when it is a line
  bool empty = true;
};

// Flattened view of a layout: vertical row order plus box extents.
class Structure {
 public:
  explicit Structure(const Layout& layout) {
    std::vector<int> chain;
    walk(layout, chain);
  }

  const std::vector<RowPos>& rows() const { return rows_; }
  const std::vector<BoxInfo>& boxes() const { return boxes_; }

  std::optional<std::size_t> index_of(int creation) const {
    auto it = index_.find(creation);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const RowPos& row(int creation) const { return rows_.at(index_.at(creation)); }

  // `cited` lies above `at` and every box around `cited` is still open at `at`.
  bool in_scope(int cited, int at) const {
    auto ci = index_of(cited);
    auto ai = index_of(at);
    if (!ci || !ai || *ci >= *ai) return false;
    return is_prefix(rows_[*ci].boxes, rows_[*ai].boxes);
  }

  // A closed box above `at` whose enclosing boxes are all open at `at`.
  bool box_in_scope(const BoxInfo& b, int at) const {
    auto ai = index_of(at);
    if (!ai || b.empty || b.last_row >= *ai) return false;
    return is_prefix(b.parents, rows_[*ai].boxes);
  }

  const BoxInfo* find_box(int assumption, int terminal) const {
    for (const auto& b : boxes_)
      if (b.assumption == assumption && b.terminal == terminal) return &b;
    return nullptr;
  }

  // Assumption lines of the boxes enclosing `at`.
  std::vector<int> open_assumptions(int at) const {
    std::vector<int> out;
    for (int id : row(at).boxes)
      if (boxes_[static_cast<std::size_t>(id)].assumption) out.push_back(*boxes_[static_cast<std::size_t>(id)].assumption);
    return out;
  }

 private:
  static bool is_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
  }

  void walk(const Layout& nodes, std::vector<int>& chain) {
    for (const auto& n : nodes) {
      if (!n.is_box()) {
        index_.emplace(n.line, rows_.size());
        rows_.push_back({n.line, static_cast<int>(chain.size()), chain});
        continue;
      }
      int id = static_cast<int>(boxes_.size());
      boxes_.push_back({id, chain, rows_.size(), 0, std::nullopt, std::nullopt, true});
      if (!n.box.empty() && !n.box.front().is_box()) boxes_.back().assumption = n.box.front().line;
      if (!n.box.empty() && !n.box.back().is_box()) boxes_.back().terminal = n.box.back().line;
      chain.push_back(id);
      walk(n.box, chain);
      chain.pop_back();
      auto& b = boxes_[static_cast<std::size_t>(id)];
      b.empty = rows_.size() == b.first_row;
      b.last_row = b.empty ? b.first_row : rows_.size() - 1;
    }
  }

  std::vector<RowPos> rows_;
  std::vector<BoxInfo> boxes_;
  std::map<int, std::size_t> index_;
};

namespace detail {

inline bool insert_before(Layout& nodes, int target, std::vector<LayoutNode>& items) {
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    if (!it->is_box() && it->line == target) {
      nodes.insert(it, std::make_move_iterator(items.begin()), std::make_move_iterator(items.end()));
      return true;
    }
    if (it->is_box() && insert_before(it->box, target, items)) return true;
  }
  return false;
}

}  // namespace detail

// Places `items` immediately above line `target`, inside the same box.
inline void insert_above(Proof& p, int target, std::vector<LayoutNode> items) {
  if (!detail::insert_before(p.layout, target, items))
    throw Error(ErrorCode::NoSuchLine, "line " + std::to_string(target) + " is not in the layout", target);
}

// ---------- operations ----------

inline Proof new_proof(const std::vector<Formula>& premises, const Formula& conclusion) {
  std::vector<Formula> all = premises;
  all.push_back(conclusion);
  check_arities(all);
  Proof p;
  for (const auto& f : premises) {
    int c = p.next_creation++;
    p.lines.emplace(c, ProofLine{c, f, LineStatus::Justified, Justification{Rule::Prem, {}, {}}, LineRole::Premise});
    p.layout.push_back(LayoutNode::of_line(c));
  }
  int c = p.next_creation++;
  p.lines.emplace(c, ProofLine{c, conclusion, LineStatus::Goal, std::nullopt, LineRole::Derived});
  p.layout.push_back(LayoutNode::of_line(c));
  return p;
}

inline std::set<int> lines_in_scope(const Proof& p, int creation) {
  p.line(creation);
  Structure s(p.layout);
  std::set<int> out;
  for (const auto& r : s.rows())
    if (s.in_scope(r.creation, creation)) out.insert(r.creation);
  return out;
}

inline bool valid_resource(const Proof& p, const Structure& s, int goal, int resource) {
  auto it = p.lines.find(resource);
  return it != p.lines.end() && !it->second.is_goal() && s.in_scope(resource, goal);
}

// Drops selections that no longer satisfy the goal/resource invariants.
inline void normalize_selection(Proof& p) {
  auto& sel = p.selection;
  if (sel.goal && (!p.has_line(*sel.goal) || !p.line(*sel.goal).is_goal())) sel.goal.reset();
  if (!sel.goal) {
    sel.resource.reset();
    return;
  }
  if (sel.resource && !valid_resource(p, Structure(p.layout), *sel.goal, *sel.resource)) sel.resource.reset();
}

inline Proof select_goal(Proof p, int creation) {
  const ProofLine& l = p.line(creation);
  if (!l.is_goal()) throw Error(ErrorCode::NotAGoal, "line " + std::to_string(creation) + " is justified", creation);
  p.selection.goal = creation;
  normalize_selection(p);
  return p;
}

inline Proof select_resource(Proof p, int creation) {
  if (!p.selection.goal) throw Error(ErrorCode::NoGoalSelected, "select a goal first");
  const ProofLine& l = p.line(creation);
  if (l.is_goal()) throw Error(ErrorCode::NotJustified, "line " + std::to_string(creation) + " is a goal", creation);
  if (!Structure(p.layout).in_scope(creation, *p.selection.goal))
    throw Error(ErrorCode::OutOfScope,
                "line " + std::to_string(creation) + " is not in scope of goal " + std::to_string(*p.selection.goal),
                creation);
  p.selection.resource = creation;
  return p;
}

// ---------- rendering ----------

struct RenderedRow {
  int creation = 0;
  int depth = 0;
  Formula formula;
  std::string formula_unicode;
  std::string formula_prefix;
  std::string refs;  // "1,5-6,7-8"; empty for goals and rules without citations
  std::string rule;  // "∨E"; empty for goals
  LineStatus status = LineStatus::Goal;
  LineRole role = LineRole::Derived;
  bool current_goal = false;
  bool current_resource = false;
  bool out_of_scope = false;
  bool box_opens = false;  // first line of a box
  int box_closes = 0;      // boxes ending on this line

  std::string justification() const {
    if (rule.empty()) return {};
    return refs.empty() ? rule : refs + "," + rule;
  }

  friend bool operator==(const RenderedRow&, const RenderedRow&) = default;
};

struct RenderedProof {
  std::vector<RenderedRow> rows;
  bool complete = false;

  friend bool operator==(const RenderedProof&, const RenderedProof&) = default;
};

inline RenderedProof render(const Proof& p) {
  Structure s(p.layout);
  RenderedProof out;
  out.complete = p.complete();
  std::set<int> in_scope;
  if (p.selection.goal) {
    for (const auto& r : s.rows())
      if (s.in_scope(r.creation, *p.selection.goal)) in_scope.insert(r.creation);
  }
  std::map<std::size_t, int> closes;
  std::set<std::size_t> opens;
  for (const auto& b : s.boxes()) {
    if (b.empty) continue;
    opens.insert(b.first_row);
    ++closes[b.last_row];
  }
  for (std::size_t i = 0; i < s.rows().size(); ++i) {
    const RowPos& pos = s.rows()[i];
    const ProofLine& l = p.line(pos.creation);
    RenderedRow row;
    row.creation = pos.creation;
    row.depth = pos.depth;
    row.formula = l.formula;
    row.formula_unicode = print_unicode(l.formula);
    row.formula_prefix = print_prefix(l.formula);
    if (l.justification && !l.is_goal()) {
      row.refs = l.justification->refs_text();
      row.rule = l.justification->label();
    }
    row.status = l.status;
    row.role = l.role;
    row.current_goal = p.selection.goal == pos.creation;
    row.current_resource = p.selection.resource == pos.creation;
    row.out_of_scope = p.selection.goal && *p.selection.goal != pos.creation && !in_scope.contains(pos.creation);
    row.box_opens = opens.contains(i);
    row.box_closes = closes.contains(i) ? closes[i] : 0;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace ndp
