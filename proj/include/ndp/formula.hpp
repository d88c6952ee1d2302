#pragma once

// First-order terms and formulas: construction, the two parsers (TeX-macro
// prefix storage format and human infix input), the printers, and
// substitution with deterministic fresh-name schemes.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ndp/error.hpp"

namespace ndp {

inline constexpr std::string_view kSucc = "s";
inline constexpr std::string_view kPlus = "+";
inline constexpr std::string_view kTimes = "·";  // ·
inline constexpr std::string_view kZero = "0";

struct Term {
  enum class Kind { Variable, Constant, Function };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string n) { return {Kind::Variable, std::move(n), {}}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
  static Term function(std::string symbol, std::vector<Term> a) {
    return {Kind::Function, std::move(symbol), std::move(a)};
  }
  static Term zero() { return constant(std::string(kZero)); }
  static Term succ(Term t) { return function(std::string(kSucc), {std::move(t)}); }
  static Term plus(Term a, Term b) { return function(std::string(kPlus), {std::move(a), std::move(b)}); }
  static Term times(Term a, Term b) { return function(std::string(kTimes), {std::move(a), std::move(b)}); }

  bool is_name() const { return kind != Kind::Function; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Formula {
  enum class Kind { Atom, Falsum, Not, And, Or, Implies, ForAll, Exists, Equals };

  Kind kind = Kind::Falsum;
  std::string name;              // predicate (Atom) or bound variable (ForAll/Exists)
  std::vector<Term> terms;       // Atom arguments, or both sides of Equals
  std::vector<Formula> children; // operands

  static Formula atom(std::string pred, std::vector<Term> args = {}) {
    return {Kind::Atom, std::move(pred), std::move(args), {}};
  }
  static Formula falsum() { return {Kind::Falsum, {}, {}, {}}; }
  static Formula negation(Formula f) { return {Kind::Not, {}, {}, {std::move(f)}}; }
  static Formula conj(Formula a, Formula b) { return {Kind::And, {}, {}, {std::move(a), std::move(b)}}; }
  static Formula disj(Formula a, Formula b) { return {Kind::Or, {}, {}, {std::move(a), std::move(b)}}; }
  static Formula implies(Formula a, Formula b) {
    return {Kind::Implies, {}, {}, {std::move(a), std::move(b)}};
  }
  static Formula forall(std::string v, Formula body) { return {Kind::ForAll, std::move(v), {}, {std::move(body)}}; }
  static Formula exists(std::string v, Formula body) { return {Kind::Exists, std::move(v), {}, {std::move(body)}}; }
  static Formula equals(Term a, Term b) { return {Kind::Equals, {}, {std::move(a), std::move(b)}, {}}; }

  bool is(Kind k) const { return kind == k; }
  bool is_binary() const { return kind == Kind::And || kind == Kind::Or || kind == Kind::Implies; }
  bool is_quantifier() const { return kind == Kind::ForAll || kind == Kind::Exists; }

  const Formula& operand() const { return children.at(0); }
  const Formula& left() const { return children.at(0); }
  const Formula& right() const { return children.at(1); }
  const Formula& body() const { return children.at(0); }
  const std::string& var() const { return name; }

  friend bool operator==(const Formula&, const Formula&) = default;
};

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'';
}

// Eigenvariable constants are a1, a2, ... .
inline bool is_indexed_constant(std::string_view n) {
  if (n.size() < 2 || n[0] != 'a' || n[1] == '0') return false;
  for (std::size_t i = 1; i < n.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(n[i]))) return false;
  return true;
}

inline std::size_t function_arity(std::string_view symbol) {
  if (symbol == kSucc) return 1;
  if (symbol == kPlus || symbol == kTimes) return 2;
  return 0;
}

class ArityTable {
 public:
  void note(const std::string& pred, std::size_t arity) {
    auto [it, inserted] = arities_.emplace(pred, arity);
    if (!inserted && it->second != arity)
      throw Error(ErrorCode::ArityError, "predicate '" + pred + "' used with " + std::to_string(arity) +
                                             " and " + std::to_string(it->second) + " arguments");
  }

 private:
  std::map<std::string, std::size_t> arities_;
};

inline void collect_arities(const Formula& f, ArityTable& table) {
  if (f.kind == Formula::Kind::Atom) table.note(f.name, f.terms.size());
  for (const auto& c : f.children) collect_arities(c, table);
}

// ---------- prefix (TeX macro) format ----------

class PrefixParser {
 public:
  explicit PrefixParser(std::string_view text) : text_(text) {}

  Formula parse_formula_all() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return f;
  }

  Term parse_term_all() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return t;
  }

 private:
  [[noreturn]] void fail(std::string expected) const { throw SyntaxError(pos_, std::move(expected)); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("'") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::string macro_name() {
    ++pos_;  // backslash
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("macro name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula braced_formula() {
    expect('{');
    Formula f = formula();
    expect('}');
    return f;
  }

  Term braced_term() {
    expect('{');
    Term t = term();
    expect('}');
    return t;
  }

  Formula formula() {
    skip_ws();
    if (pos_ >= text_.size()) fail("formula");
    if (text_[pos_] == '\\') {
      std::size_t at = pos_;
      std::string m = macro_name();
      if (m == "falsum") return Formula::falsum();
      if (m == "neg") return Formula::negation(braced_formula());
      if (m == "con" || m == "dis" || m == "imp") {
        Formula a = braced_formula();
        Formula b = braced_formula();
        if (m == "con") return Formula::conj(std::move(a), std::move(b));
        if (m == "dis") return Formula::disj(std::move(a), std::move(b));
        return Formula::implies(std::move(a), std::move(b));
      }
      if (m == "all" || m == "some") {
        expect('{');
        std::string v = ident();
        expect('}');
        bound_.push_back(v);
        Formula body = braced_formula();
        bound_.pop_back();
        return m == "all" ? Formula::forall(std::move(v), std::move(body))
                          : Formula::exists(std::move(v), std::move(body));
      }
      if (m == "eq") {
        Term a = braced_term();
        Term b = braced_term();
        return Formula::equals(std::move(a), std::move(b));
      }
      pos_ = at;
      fail("formula macro (\\falsum, \\neg, \\con, \\dis, \\imp, \\all, \\some, \\eq)");
    }
    std::string pred = ident();
    std::vector<Term> args;
    if (peek('(')) {
      ++pos_;
      args.push_back(term());
      while (peek(',')) {
        ++pos_;
        args.push_back(term());
      }
      expect(')');
    }
    arities_.note(pred, args.size());
    return Formula::atom(std::move(pred), std::move(args));
  }

  Term name_term(std::string n) const {
    bool bound = false;
    for (const auto& b : bound_) bound = bound || b == n;
    if (!bound && is_indexed_constant(n)) return Term::constant(std::move(n));
    return Term::variable(std::move(n));
  }

  Term term() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '\\') {
      std::size_t at = pos_;
      std::string m = macro_name();
      if (m == "zero") return Term::zero();
      if (m == "suc") return Term::succ(braced_term());
      if (m == "plus" || m == "times") {
        Term a = braced_term();
        Term b = braced_term();
        return m == "plus" ? Term::plus(std::move(a), std::move(b)) : Term::times(std::move(a), std::move(b));
      }
      pos_ = at;
      fail("term macro (\\zero, \\suc, \\plus, \\times)");
    }
    return name_term(ident());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
  ArityTable arities_;
};

// ---------- infix format ----------

enum class Tok {
  Ident, Zero, LParen, RParen, Comma, Dot, Eq, Plus, Times,
  Not, And, Or, Imp, ForAll, Exists, Falsum, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view s) {
  struct Sym {
    std::string_view spelling;
    Tok kind;
  };
  // Longest spellings first where prefixes collide.
  static const Sym symbols[] = {
      {"¬", Tok::Not},    {"~", Tok::Not},     {"∧", Tok::And},   {"&", Tok::And},
      {"∨", Tok::Or},     {"|", Tok::Or},      {"→", Tok::Imp},   {"->", Tok::Imp},
      {"∀", Tok::ForAll}, {"∃", Tok::Exists}, {"⊥", Tok::Falsum}, {"#f", Tok::Falsum},
      {"·", Tok::Times},  {"*", Tok::Times},   {"+", Tok::Plus},       {"=", Tok::Eq},
      {"(", Tok::LParen},      {")", Tok::RParen},  {",", Tok::Comma},      {".", Tok::Dot},
      {"0", Tok::Zero},
  };
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (ident_start(s[i])) {
      std::size_t start = i;
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      Tok k = word == "fa" ? Tok::ForAll : word == "ex" ? Tok::Exists : Tok::Ident;
      out.push_back({k, std::move(word), start});
      continue;
    }
    bool matched = false;
    for (const auto& sym : symbols) {
      if (s.substr(i).starts_with(sym.spelling)) {
        out.push_back({sym.kind, std::string(sym.spelling), i});
        i += sym.spelling.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(i, "symbol");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class InfixParser {
 public:
  explicit InfixParser(std::string_view text) : toks_(tokenize(text)) {}

  Formula parse_formula_all() {
    Formula f = implication();
    expect(Tok::End, "end of input");
    return f;
  }

  Term parse_term_all() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  [[noreturn]] void fail(std::string expected) const { throw SyntaxError(cur().pos, std::move(expected)); }
  void expect(Tok k, const char* what) {
    if (!at(k)) fail(what);
    ++i_;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (at(Tok::Imp)) {
      ++i_;
      return Formula::implies(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (at(Tok::Or)) {
      ++i_;
      lhs = Formula::disj(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (at(Tok::And)) {
      ++i_;
      lhs = Formula::conj(std::move(lhs), unary());
    }
    return lhs;
  }

  Formula unary() {
    if (at(Tok::Not)) {
      ++i_;
      return Formula::negation(unary());
    }
    if (at(Tok::ForAll) || at(Tok::Exists)) {
      bool universal = at(Tok::ForAll);
      ++i_;
      if (!at(Tok::Ident)) fail("bound variable");
      std::string v = cur().text;
      ++i_;
      expect(Tok::Dot, "'.' after bound variable");
      bound_.push_back(v);
      Formula body = implication();
      bound_.pop_back();
      return universal ? Formula::forall(std::move(v), std::move(body))
                       : Formula::exists(std::move(v), std::move(body));
    }
    return primary();
  }

  Formula primary() {
    if (at(Tok::Falsum)) {
      ++i_;
      return Formula::falsum();
    }
    // An equation may start with an identifier, 0 or '('; try it first and
    // fall back to a predicate or parenthesised formula.
    std::size_t save = i_;
    try {
      Term a = term();
      if (at(Tok::Eq)) {
        ++i_;
        Term b = term();
        return Formula::equals(std::move(a), std::move(b));
      }
    } catch (const SyntaxError&) {
    }
    i_ = save;
    if (at(Tok::LParen)) {
      ++i_;
      Formula f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (!at(Tok::Ident)) fail("formula");
    std::string pred = cur().text;
    ++i_;
    std::vector<Term> args;
    if (at(Tok::LParen)) {
      ++i_;
      args.push_back(term());
      while (at(Tok::Comma)) {
        ++i_;
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    arities_.note(pred, args.size());
    return Formula::atom(std::move(pred), std::move(args));
  }

  Term term() {
    Term lhs = product();
    while (at(Tok::Plus)) {
      ++i_;
      lhs = Term::plus(std::move(lhs), product());
    }
    return lhs;
  }

  Term product() {
    Term lhs = term_primary();
    while (at(Tok::Times)) {
      ++i_;
      lhs = Term::times(std::move(lhs), term_primary());
    }
    return lhs;
  }

  Term term_primary() {
    if (at(Tok::Zero)) {
      ++i_;
      return Term::zero();
    }
    if (at(Tok::LParen)) {
      ++i_;
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (!at(Tok::Ident)) fail("term");
    std::string n = cur().text;
    ++i_;
    if (at(Tok::LParen)) {
      if (n != kSucc) fail("'=' (only s may be applied inside terms)");
      ++i_;
      std::vector<Term> args{term()};
      while (at(Tok::Comma)) {
        ++i_;
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
      if (args.size() != 1)
        throw Error(ErrorCode::ArityError, "function 's' takes 1 argument, got " + std::to_string(args.size()));
      return Term::succ(std::move(args[0]));
    }
    bool bound = false;
    for (const auto& b : bound_) bound = bound || b == n;
    if (!bound && is_indexed_constant(n)) return Term::constant(std::move(n));
    return Term::variable(std::move(n));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::vector<std::string> bound_;
  ArityTable arities_;
};

// ---------- printing ----------

struct Glyphs {
  std::string_view neg, conj, disj, imp, all, some, falsum, times;
  bool spaced_quantifier;  // "fa x." needs a space, "∀x." does not
};

inline constexpr Glyphs kUnicodeGlyphs{"¬", " ∧ ", " ∨ ", " → ", "∀",
                                       "∃", "⊥", " · ", false};
inline constexpr Glyphs kAsciiGlyphs{"~", " & ", " | ", " -> ", "fa", "ex", "#f", " * ", true};

inline int term_prec(const Term& t) {
  if (t.kind == Term::Kind::Function && t.name == kPlus) return 1;
  if (t.kind == Term::Kind::Function && t.name == kTimes) return 2;
  return 3;
}

inline std::string infix_term(const Term& t, const Glyphs& g) {
  if (t.kind != Term::Kind::Function) return t.name;
  if (t.name == kSucc) return "s(" + infix_term(t.args[0], g) + ")";
  int p = term_prec(t);
  std::string l = infix_term(t.args[0], g);
  std::string r = infix_term(t.args[1], g);
  if (term_prec(t.args[0]) < p) l = "(" + l + ")";
  if (term_prec(t.args[1]) <= p) r = "(" + r + ")";
  return l + (t.name == kPlus ? std::string(" + ") : std::string(g.times)) + r;
}

inline int formula_prec(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not:
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: return 4;
    default: return 5;
  }
}

struct Printed {
  std::string text;
  bool open_right;  // ends in a quantifier body that would swallow a following operator
};

inline Printed infix_formula(const Formula& f, const Glyphs& g) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Falsum: return {std::string(g.falsum), false};
    case K::Atom: {
      std::string s = f.name;
      if (!f.terms.empty()) {
        s += "(";
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          if (i) s += ",";
          s += infix_term(f.terms[i], g);
        }
        s += ")";
      }
      return {s, false};
    }
    case K::Equals: return {infix_term(f.terms[0], g) + " = " + infix_term(f.terms[1], g), false};
    case K::Not: {
      Printed c = infix_formula(f.operand(), g);
      if (formula_prec(f.operand()) < 4) return {std::string(g.neg) + "(" + c.text + ")", false};
      return {std::string(g.neg) + c.text, c.open_right};
    }
    case K::ForAll:
    case K::Exists: {
      Printed b = infix_formula(f.body(), g);
      std::string q(f.kind == K::ForAll ? g.all : g.some);
      if (g.spaced_quantifier) q += " ";
      return {q + f.var() + "." + (g.spaced_quantifier ? " " : "") + b.text, true};
    }
    case K::And:
    case K::Or:
    case K::Implies: {
      int p = formula_prec(f);
      Printed l = infix_formula(f.left(), g);
      Printed r = infix_formula(f.right(), g);
      bool right_assoc = f.kind == K::Implies;
      bool paren_l = formula_prec(f.left()) < p || (right_assoc && formula_prec(f.left()) == p) || l.open_right;
      bool paren_r = formula_prec(f.right()) < p || (!right_assoc && formula_prec(f.right()) == p);
      std::string_view op = f.kind == K::And ? g.conj : f.kind == K::Or ? g.disj : g.imp;
      std::string lt = paren_l ? "(" + l.text + ")" : l.text;
      std::string rt = paren_r ? "(" + r.text + ")" : r.text;
      return {lt + std::string(op) + rt, !paren_r && r.open_right};
    }
  }
  return {"?", false};
}

inline std::string subscript_digits(const std::string& n) {
  std::size_t cut = n.size();
  while (cut > 1 && std::isdigit(static_cast<unsigned char>(n[cut - 1]))) --cut;
  if (cut == n.size() || cut == 0) return n;
  return n.substr(0, cut) + "_{" + n.substr(cut) + "}";
}

inline std::string macro_term(const Term& t, bool latex) {
  if (t.kind == Term::Kind::Constant && t.name == kZero) return "\\zero";
  if (t.kind != Term::Kind::Function) return latex ? subscript_digits(t.name) : t.name;
  if (t.name == kSucc) return "\\suc{" + macro_term(t.args[0], latex) + "}";
  std::string m = t.name == kPlus ? "\\plus" : "\\times";
  return m + "{" + macro_term(t.args[0], latex) + "}{" + macro_term(t.args[1], latex) + "}";
}

inline std::string macro_formula(const Formula& f, bool latex) {
  using K = Formula::Kind;
  auto br = [&](const Formula& c) { return "{" + macro_formula(c, latex) + "}"; };
  auto name = [&](const std::string& n) { return latex ? subscript_digits(n) : n; };
  switch (f.kind) {
    case K::Falsum: return "\\falsum";
    case K::Not: return "\\neg" + br(f.operand());
    case K::And: return "\\con" + br(f.left()) + br(f.right());
    case K::Or: return "\\dis" + br(f.left()) + br(f.right());
    case K::Implies: return "\\imp" + br(f.left()) + br(f.right());
    case K::ForAll: return "\\all{" + name(f.var()) + "}" + br(f.body());
    case K::Exists: return "\\some{" + name(f.var()) + "}" + br(f.body());
    case K::Equals: return "\\eq{" + macro_term(f.terms[0], latex) + "}{" + macro_term(f.terms[1], latex) + "}";
    case K::Atom: {
      std::string s = name(f.name);
      if (!f.terms.empty()) {
        s += "(";
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          if (i) s += ",";
          s += macro_term(f.terms[i], latex);
        }
        s += ")";
      }
      return s;
    }
  }
  return "?";
}

inline void term_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const auto& a : t.args) term_names(a, out);
}

inline void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Variable) out.insert(t.name);
  for (const auto& a : t.args) term_vars(a, out);
}

inline void free_vars_into(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  for (const auto& t : f.terms) {
    std::set<std::string> vs;
    term_vars(t, vs);
    for (const auto& v : vs)
      if (!bound.contains(v)) out.insert(v);
  }
  if (f.is_quantifier()) {
    bool fresh = bound.insert(f.var()).second;
    free_vars_into(f.body(), bound, out);
    if (fresh) bound.erase(f.var());
    return;
  }
  for (const auto& c : f.children) free_vars_into(c, bound, out);
}

inline Term substitute_term(const Term& t, const std::string& v, const Term& by) {
  if (t.kind == Term::Kind::Variable) return t.name == v ? by : t;
  Term out = t;
  for (auto& a : out.args) a = substitute_term(a, v, by);
  return out;
}

}  // namespace detail

// ---------- public API ----------

inline Formula parse_prefix(std::string_view text) { return detail::PrefixParser(text).parse_formula_all(); }
inline Formula parse_infix(std::string_view text) { return detail::InfixParser(text).parse_formula_all(); }
inline Term parse_prefix_term(std::string_view text) { return detail::PrefixParser(text).parse_term_all(); }
inline Term parse_infix_term(std::string_view text) { return detail::InfixParser(text).parse_term_all(); }

// User-facing entry point: text starting with a backslash is the storage
// format, anything else is infix.
inline Formula parse_formula(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '\\') return parse_prefix(text);
  return parse_infix(text);
}

inline Term parse_term(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '\\') return parse_prefix_term(text);
  return parse_infix_term(text);
}

inline std::string print_unicode(const Formula& f) { return detail::infix_formula(f, detail::kUnicodeGlyphs).text; }
inline std::string print_ascii(const Formula& f) { return detail::infix_formula(f, detail::kAsciiGlyphs).text; }
inline std::string print_prefix(const Formula& f) { return detail::macro_formula(f, false); }
inline std::string print_latex(const Formula& f) { return detail::macro_formula(f, true); }

inline std::string print_unicode(const Term& t) { return detail::infix_term(t, detail::kUnicodeGlyphs); }
inline std::string print_ascii(const Term& t) { return detail::infix_term(t, detail::kAsciiGlyphs); }
inline std::string print_prefix(const Term& t) { return detail::macro_term(t, false); }

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  detail::free_vars_into(f, bound, out);
  return out;
}

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  detail::term_vars(t, out);
  return out;
}

// Every name occurring in f: term symbols, binders and predicates.
inline void collect_names(const Formula& f, std::set<std::string>& out) {
  if (!f.name.empty()) out.insert(f.name);
  for (const auto& t : f.terms) detail::term_names(t, out);
  for (const auto& c : f.children) collect_names(c, out);
}

inline bool occurs(const std::string& name, const Formula& f) {
  std::set<std::string> names;
  collect_names(f, names);
  return names.contains(name);
}

// Smallest primed variant of `base` (base', base'', ...) outside `used`.
inline std::string fresh_variant(const std::string& base, const std::set<std::string>& used) {
  std::string candidate = base + "'";
  while (used.contains(candidate)) candidate += "'";
  return candidate;
}

// Capture-avoiding substitution of `by` for the free occurrences of `v`.
inline Formula substitute(const Formula& f, const std::string& v, const Term& by) {
  using K = Formula::Kind;
  Formula out = f;
  switch (f.kind) {
    case K::Atom:
    case K::Equals:
      for (auto& t : out.terms) t = detail::substitute_term(t, v, by);
      return out;
    case K::Falsum: return out;
    case K::ForAll:
    case K::Exists: {
      if (f.var() == v) return out;
      auto body_free = free_vars(f.body());
      if (!body_free.contains(v)) return out;
      if (free_vars(by).contains(f.var())) {
        std::set<std::string> used;
        collect_names(f.body(), used);
        detail::term_names(by, used);
        used.insert(v);
        std::string renamed = fresh_variant(f.var(), used);
        out.name = renamed;
        out.children[0] = substitute(f.body(), f.var(), Term::variable(renamed));
      }
      out.children[0] = substitute(out.children[0], v, by);
      return out;
    }
    default:
      for (auto& c : out.children) c = substitute(c, v, by);
      return out;
  }
}

// a1, a2, ...: the smallest index whose name is not in `used`.
inline Term fresh_constant(const std::set<std::string>& used) {
  for (int n = 1;; ++n) {
    std::string candidate = "a" + std::to_string(n);
    if (!used.contains(candidate)) return Term::constant(candidate);
  }
}

struct InstanceMatch {
  bool matches = false;
  std::optional<Term> witness;  // empty when `var` is not free in the body
};

namespace detail {

// Bound variables of the pattern paired with their (possibly renamed) counterparts.
using BinderPairs = std::vector<std::pair<std::string, std::string>>;

inline const std::pair<std::string, std::string>* innermost(const BinderPairs& binders, const std::string& name,
                                                            bool pattern_side) {
  for (auto it = binders.rbegin(); it != binders.rend(); ++it)
    if ((pattern_side ? it->first : it->second) == name) return &*it;
  return nullptr;
}

inline bool match_term(const Term& pat, const Term& inst, const std::string& var, bool shadowed,
                       const BinderPairs& binders, std::optional<Term>& witness) {
  if (pat.kind == Term::Kind::Variable && pat.name == var && !shadowed) {
    if (witness && *witness != inst) return false;
    witness = inst;
    return true;
  }
  if (pat.kind == Term::Kind::Variable && inst.kind == Term::Kind::Variable) {
    const auto* p = innermost(binders, pat.name, true);
    const auto* i = innermost(binders, inst.name, false);
    if (p || i) return p == i;
  }
  if (pat.kind != inst.kind || pat.name != inst.name || pat.args.size() != inst.args.size()) return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i)
    if (!match_term(pat.args[i], inst.args[i], var, shadowed, binders, witness)) return false;
  return true;
}

inline bool match_formula(const Formula& pat, const Formula& inst, const std::string& var, bool shadowed,
                          BinderPairs& binders, std::optional<Term>& witness) {
  if (pat.kind != inst.kind || pat.terms.size() != inst.terms.size() ||
      pat.children.size() != inst.children.size())
    return false;
  if (!pat.is_quantifier() && pat.name != inst.name) return false;
  for (std::size_t i = 0; i < pat.terms.size(); ++i)
    if (!match_term(pat.terms[i], inst.terms[i], var, shadowed, binders, witness)) return false;
  bool inner = shadowed || (pat.is_quantifier() && pat.var() == var);
  if (pat.is_quantifier()) binders.emplace_back(pat.var(), inst.var());
  bool ok = true;
  for (std::size_t i = 0; ok && i < pat.children.size(); ++i)
    ok = match_formula(pat.children[i], inst.children[i], var, inner, binders, witness);
  if (pat.is_quantifier()) binders.pop_back();
  return ok;
}

}  // namespace detail

// Finds t with substitute(body, var, t) == instance.
inline InstanceMatch match_instance(const Formula& body, const std::string& var, const Formula& instance) {
  std::optional<Term> witness;
  InstanceMatch m;
  detail::BinderPairs binders;
  if (!detail::match_formula(body, instance, var, false, binders, witness)) return m;
  if (witness && substitute(body, var, *witness) != instance) return m;
  if (!witness && body != instance) return m;
  m.matches = true;
  m.witness = std::move(witness);
  return m;
}

// Replaces every occurrence of `from` by `to` outside binders that would
// capture a variable of either term.
inline Term replace_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  Term out = t;
  for (auto& a : out.args) a = replace_term(a, from, to);
  return out;
}

inline Formula replace_term(const Formula& f, const Term& from, const Term& to) {
  Formula out = f;
  for (auto& t : out.terms) t = replace_term(t, from, to);
  if (f.is_quantifier()) {
    if (free_vars(from).contains(f.var()) || free_vars(to).contains(f.var())) return out;
  }
  for (auto& c : out.children) c = replace_term(c, from, to);
  return out;
}

// Number of connective, quantifier and atomic nodes.
inline std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children) n += formula_size(c);
  return n;
}

// Predicates must keep one arity across all the given formulas.
inline void check_arities(std::span<const Formula> formulas) {
  detail::ArityTable table;
  for (const auto& f : formulas) detail::collect_arities(f, table);
}

}  // namespace ndp
