#pragma once

// Exporters. Every format is produced from RenderedProof alone, so row order,
// creation numbers and justification strings agree across formats.

#include <cstddef>
#include <string>
#include <vector>

#include "ndp/persist.hpp"
#include "ndp/proof.hpp"
#include "ndp/state.hpp"

namespace ndp {

struct FrameSequence {
  std::vector<RenderedProof> frames;
};

namespace detail {

inline std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

inline std::string repeat(const std::string& s, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += s;
  return out;
}

inline std::string scope_prefix(const RenderedRow& r) {
  if (r.depth == 0) return {};
  bool assumption = r.box_opens && r.role == LineRole::Assumption;
  return repeat("│ ", r.depth - 1) + (assumption ? "┌─" : "│ ");
}

inline std::string latex_justification(const RenderedRow& r) {
  if (r.rule.empty()) return {};
  std::string rule = "\\rulename{" + r.rule + "}";
  return r.refs.empty() ? rule : r.refs + "," + rule;
}

}  // namespace detail

inline std::string to_latex(const RenderedProof& p) {
  std::string out = "\\begin{ndproof}\n";
  for (const auto& r : p.rows) {
    const char* kind = r.box_opens ? "open" : r.box_closes > 0 ? "close" : "none";
    out += "\\ndline{" + std::to_string(r.depth) + "}{" + kind + "}{" + std::to_string(r.creation) + "}{" +
           print_latex(r.formula) + "}{" + detail::latex_justification(r) + "}\n";
  }
  out += "\\end{ndproof}\n";
  return out;
}

inline std::string to_unicode(const RenderedProof& p) {
  std::vector<std::string> body;
  std::size_t widest = 0;
  for (const auto& r : p.rows) {
    body.push_back(detail::scope_prefix(r) + std::to_string(r.creation) + ". " + r.formula_unicode);
    widest = std::max(widest, detail::display_width(body.back()));
  }
  std::size_t column = (widest / 8 + 1) * 8;
  std::string out;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const RenderedRow& r = p.rows[i];
    std::string line = body[i];
    std::string just = r.justification();
    if (!just.empty()) line += std::string(column - detail::display_width(line), ' ') + just;
    out += line + "\n";
    for (int k = 0; k < r.box_closes; ++k) out += detail::repeat("│ ", r.depth - 1 - k) + "├────\n";
  }
  return out;
}

inline std::string export_latex(const Proof& p) { return to_latex(render(p)); }
inline std::string export_latex(const ProofState& s) { return export_latex(s.proof); }
inline std::string export_unicode(const Proof& p) { return to_unicode(render(p)); }
inline std::string export_unicode(const ProofState& s) { return export_unicode(s.proof); }

// Frame i is the proof after i rule applications; frame 0 is the bare sequent.
inline FrameSequence export_frames(const ProofDocument& d) {
  FrameSequence seq;
  for (std::size_t k = 0; k <= d.applications(); ++k) seq.frames.push_back(render(replay(d, k)));
  return seq;
}

inline std::string frame_file_name(std::size_t index) {
  std::string n = std::to_string(index);
  return "frame-" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n + ".txt";
}

}  // namespace ndp
