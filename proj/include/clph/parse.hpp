#pragma once

#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clph/constraint.hpp"
#include "clph/engine.hpp"
#include "clph/regex.hpp"
#include "clph/syntax.hpp"

namespace clph {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  std::size_t line, col;
};

namespace detail {

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
inline bool var_char(char c) { return ident_char(c) || c == '#'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : s_(src) {}

  // --- lexical ---

  void skip_ws() {
    while (p_ < s_.size()) {
      char c = s_[p_];
      if (c == '%') {
        while (p_ < s_.size() && s_[p_] != '\n') ++p_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++p_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return p_ >= s_.size();
  }

  char peek() {
    skip_ws();
    return p_ < s_.size() ? s_[p_] : '\0';
  }

  bool lookahead(std::string_view t) {
    skip_ws();
    return s_.substr(p_, t.size()) == t;
  }

  bool accept(std::string_view t) {
    if (!lookahead(t)) return false;
    p_ += t.size();
    return true;
  }

  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }

  bool peek_ident() {
    skip_ws();
    return p_ < s_.size() && ident_char(s_[p_]);
  }

  std::string peek_word() {
    skip_ws();
    std::size_t q = p_;
    while (q < s_.size() && ident_char(s_[q])) ++q;
    return std::string(s_.substr(p_, q - p_));
  }

  bool accept_word(std::string_view w) {
    if (peek_word() != w) return false;
    p_ += w.size();
    return true;
  }

  std::string ident() {
    std::string w = peek_word();
    if (w.empty()) fail("expected an identifier");
    p_ += w.size();
    return w;
  }

  std::string var_name() {
    std::size_t q = p_;
    while (q < s_.size() && var_char(s_[q])) ++q;
    if (q == p_) fail("expected a variable name");
    std::string n(s_.substr(p_, q - p_));
    p_ = q;
    return n;
  }

  /// A '.' ends a clause when followed by whitespace that contains a
  /// newline, a comment, or the end of input. Any other '.' inside a
  /// regex is concatenation.
  bool dot_is_end() {
    skip_ws();
    if (p_ >= s_.size() || s_[p_] != '.') return false;
    std::size_t q = p_ + 1;
    if (q >= s_.size()) return true;
    while (q < s_.size() && (s_[q] == ' ' || s_[q] == '\t' || s_[q] == '\r')) ++q;
    return q >= s_.size() || s_[q] == '\n' || s_[q] == '%';
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < p_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, msg);
  }

  std::size_t pos() const { return p_; }
  void reset(std::size_t p) { p_ = p; }

  // --- terms and hedges ---

  Hedge args() {
    Hedge out;
    expect("(");
    if (accept(")")) return out;
    do out.push_back(item());
    while (accept(","));
    expect(")");
    return out;
  }

  Term item() {
    char c = peek();
    if (c == '?') {
      ++p_;
      return Term::tvar(var_name());
    }
    if (c == '@') {
      ++p_;
      return Term::hvar(var_name());
    }
    if (c == '^') {
      ++p_;
      std::string n = var_name();
      Hedge a;
      if (peek() == '(') a = args();
      return Term::app(Functor::var(n), std::move(a));
    }
    if (!peek_ident()) fail("expected a term");
    std::string n = ident();
    if (n == "in") fail("'in' is reserved");
    Hedge a;
    if (peek() == '(') a = args();
    return Term::sym(n, std::move(a));
  }

  Term term() {
    Term t = item();
    if (t.is_hvar()) fail("hedge variable where a term is required");
    return t;
  }

  Hedge hedge() {
    if (peek() == '(') return args();
    return {item()};
  }

  // --- regexes ---

  Regex regex() {
    Regex r = regex_concat();
    while (accept("|")) r = Regex::choice(std::move(r), regex_concat());
    return r;
  }

  Regex regex_concat() {
    Regex r = regex_postfix();
    while (peek() == '.' && !dot_is_end()) {
      ++p_;
      r = Regex::concat(std::move(r), regex_postfix());
    }
    return r;
  }

  Regex regex_postfix() {
    Regex r = regex_atom();
    while (accept("*")) r = Regex::star(std::move(r));
    return r;
  }

  Regex regex_atom() {
    if (accept("(")) {
      Regex r = regex();
      expect(")");
      return r;
    }
    if (!peek_ident()) fail("expected a regular expression");
    std::string n = ident();
    if (n == "eps") return Regex::eps();
    if (accept("(")) {
      if (accept(")")) return Regex::symbol(n);
      Regex body = regex();
      expect(")");
      return Regex::symbol(n, std::move(body));
    }
    return Regex::symbol(n);
  }

  // --- literals ---

  /// An atom, an equation `H = H`, or a membership `H in ρ`.
  BodyLiteral body_literal(const Signature& sig) {
    Hedge lhs;
    bool paren = peek() == '(';
    lhs = hedge();
    if (accept("=")) return BodyLiteral::of(make_eq(std::move(lhs), hedge(), sig));
    if (accept_word("in")) return BodyLiteral::of(make_member(std::move(lhs), regex()));
    if (paren || lhs.size() != 1 || !lhs[0].is_app() || lhs[0].head_is_var)
      fail("expected '=' or 'in'");
    Atom a{lhs[0].name, std::move(lhs[0].args)};
    for (const auto& t : a.args)
      if (t.is_hvar()) fail("hedge variable as an argument of predicate " + a.pred);
    return BodyLiteral::of(std::move(a));
  }

  Goal body(const Signature& sig) {
    Goal g;
    do g.push_back(body_literal(sig));
    while (accept(","));
    return g;
  }

  Formula formula(const Signature& sig) {
    std::vector<Formula> ds{conj(sig)};
    while (accept("\\/")) ds.push_back(conj(sig));
    return ds.size() == 1 ? ds[0] : Formula::disj(std::move(ds));
  }

  Formula conj(const Signature& sig) {
    std::vector<Formula> cs{prim(sig)};
    while (accept("&")) cs.push_back(prim(sig));
    return cs.size() == 1 ? cs[0] : Formula::conj(std::move(cs));
  }

  Formula prim(const Signature& sig) {
    std::size_t save = pos();
    std::string w = peek_word();
    if (w == "true" || w == "false") {
      p_ += w.size();
      if (peek() != '(' && !lookahead("=") && peek_word() != "in")
        return w == "true" ? Formula::top() : Formula::bottom();
      reset(save);
    }
    if (peek() == '(') {
      try {
        BodyLiteral l = body_literal(sig);
        if (!l.is_atom()) return Formula::atom(l.lit);
      } catch (const ParseError&) {
      }
      reset(save);
      expect("(");
      Formula f = formula(sig);
      expect(")");
      return f;
    }
    BodyLiteral l = body_literal(sig);
    if (l.is_atom()) fail("user atoms are not allowed in a constraint");
    return Formula::atom(l.lit);
  }

  void end_clause() {
    skip_ws();
    if (p_ < s_.size() && s_[p_] == '.') {
      ++p_;
      return;
    }
    fail("expected '.'");
  }

 private:
  std::string_view s_;
  std::size_t p_ = 0;
};

inline void symbols_of(const Hedge& h, std::vector<std::string>& out) {
  for (const auto& t : h) {
    if (t.is_app()) {
      if (!t.head_is_var) out.push_back(t.name);
      symbols_of(t.args, out);
    }
  }
}

inline void symbols_of(const Literal& l, std::vector<std::string>& out) {
  symbols_of(l.lhs, out);
  symbols_of(l.rhs, out);
  if (l.is_feq()) {
    if (!l.flhs.is_var) out.push_back(l.flhs.name);
    if (!l.frhs.is_var) out.push_back(l.frhs.name);
  }
  if (l.is_member()) {
    std::set<std::string> rs;
    collect_symbols(l.re, rs);
    out.insert(out.end(), rs.begin(), rs.end());
  }
}

inline void symbols_of(const BodyLiteral& l, std::vector<std::string>& out) {
  if (l.is_atom()) symbols_of(l.atom.args, out);
  else symbols_of(l.lit, out);
}

inline void symbols_of(const Formula& f, std::vector<std::string>& out) {
  if (f.kind == Formula::Kind::Lit) symbols_of(f.lit, out);
  for (const auto& k : f.kids) symbols_of(k, out);
}

template <class T>
void register_symbols(const T& x, Signature& sig) {
  std::vector<std::string> syms;
  symbols_of(x, syms);
  for (const auto& s : syms) sig.use(s);
}

/// Equations over unordered symbols are normalized against the signature
/// at construction, so literals are rebuilt once all symbols are known.
inline Literal renormalize(const Literal& l, const Signature& sig) {
  if (l.is_member()) return l;
  auto [a, b] = l.sides();
  return make_eq(a, b, sig);
}

inline BodyLiteral renormalize(const BodyLiteral& l, const Signature& sig) {
  return l.is_atom() ? l : BodyLiteral::of(renormalize(l.lit, sig));
}

inline void check_atom(const Atom& a, const Program& p, Parser& ps) {
  PredKey key{a.pred, a.args.size()};
  if (p.modes.count(key)) return;
  for (const auto& [k, m] : p.modes)
    if (k.first == a.pred)
      ps.fail("predicate " + a.pred + " is declared with arity " + std::to_string(k.second) +
              ", used with arity " + std::to_string(a.args.size()));
}

}  // namespace detail

/// Parses program text, extending `base`.
inline Program parse_program(std::string_view text, Program base = {}) {
  detail::Parser ps(text);
  Program& p = base;
  while (!ps.at_end()) {
    if (ps.accept(":-")) {
      std::string d = ps.ident();
      if (d == "ordered" || d == "unordered") {
        do {
          std::string f = ps.ident();
          if (!p.sig.declare(f, d == "unordered"))
            ps.fail("symbol " + f + " is already " + (d == "unordered" ? "ordered" : "unordered"));
        } while (ps.accept(","));
      } else if (d == "mode") {
        std::string pred = ps.ident();
        std::vector<Mode> ms;
        ps.expect("(");
        if (!ps.accept(")")) {
          do {
            std::string m = ps.ident();
            if (m == "i" || m == "in") ms.push_back(Mode::In);
            else if (m == "o" || m == "out") ms.push_back(Mode::Out);
            else ps.fail("mode must be i or o");
          } while (ps.accept(","));
          ps.expect(")");
        }
        PredKey key{pred, ms.size()};
        if (p.modes.count(key) && p.modes[key] != ms)
          ps.fail("second mode for " + pred + "/" + std::to_string(ms.size()));
        p.modes[key] = std::move(ms);
      } else {
        ps.fail("unknown directive " + d);
      }
      ps.end_clause();
      continue;
    }
    Term h = ps.term();
    if (!h.is_app() || h.head_is_var) ps.fail("clause head must be an atom");
    Clause c{Atom{h.name, std::move(h.args)}, {}};
    for (const auto& t : c.head.args)
      if (t.is_hvar()) ps.fail("hedge variable as an argument of predicate " + c.head.pred);
    if (ps.accept(":-")) c.body = ps.body(p.sig);
    ps.end_clause();
    detail::check_atom(c.head, p, ps);
    for (const auto& l : c.body)
      if (l.is_atom()) detail::check_atom(l.atom, p, ps);
    detail::register_symbols(c.head.args, p.sig);
    for (const auto& l : c.body) detail::register_symbols(l, p.sig);
    p.sig.predicates.insert({c.head.pred, c.head.args.size()});
    p.clauses.push_back(std::move(c));
  }
  for (auto& c : p.clauses)
    for (auto& l : c.body) l = detail::renormalize(l, p.sig);
  return p;
}

/// `?- L1, ..., Ln.` with the prefix and final dot optional. New symbols
/// are added to sig as ordered.
inline Goal parse_query(std::string_view text, Signature& sig) {
  detail::Parser ps(text);
  ps.accept("?-");
  Goal g;
  if (!ps.at_end() && ps.peek() != '.') g = ps.body(sig);
  if (!ps.at_end()) ps.end_clause();
  if (!ps.at_end()) ps.fail("unexpected text after query");
  for (const auto& l : g) detail::register_symbols(l, sig);
  for (auto& l : g) l = detail::renormalize(l, sig);
  return g;
}

/// Literals joined by `&` and `\/`, with `true`, `false` and parentheses.
inline Formula parse_constraint(std::string_view text, Signature& sig) {
  detail::Parser ps(text);
  Formula f = ps.formula(sig);
  if (!ps.at_end()) ps.end_clause();
  if (!ps.at_end()) ps.fail("unexpected text after constraint");
  detail::register_symbols(f, sig);
  std::function<void(Formula&)> fix = [&](Formula& x) {
    if (x.kind == Formula::Kind::Lit) x.lit = detail::renormalize(x.lit, sig);
    for (auto& k : x.kids) fix(k);
  };
  fix(f);
  return f;
}

inline Regex parse_regex(std::string_view text) {
  detail::Parser ps(text);
  Regex r = ps.regex();
  if (!ps.at_end()) ps.fail("unexpected text after regular expression");
  return r;
}

inline Hedge parse_hedge(std::string_view text) {
  detail::Parser ps(text);
  Hedge h = ps.hedge();
  if (!ps.at_end()) ps.fail("unexpected text after hedge");
  return h;
}

inline Term parse_term(std::string_view text) {
  detail::Parser ps(text);
  Term t = ps.term();
  if (!ps.at_end()) ps.fail("unexpected text after term");
  return t;
}

}  // namespace clph
