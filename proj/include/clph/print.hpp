#pragma once

#include <sstream>
#include <string>

#include "clph/constraint.hpp"
#include "clph/engine.hpp"
#include "clph/regex.hpp"
#include "clph/syntax.hpp"

namespace clph {

inline std::string to_string(const Var& v) {
  switch (v.kind) {
    case VarKind::Term: return "?" + v.name;
    case VarKind::Hedge: return "@" + v.name;
    case VarKind::Func: return "^" + v.name;
  }
  return v.name;
}

inline std::string to_string(const Functor& f) { return (f.is_var ? "^" : "") + f.name; }

inline std::string to_string(const Hedge& h);

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::TermVar: return "?" + t.name;
    case Term::Kind::HedgeVar: return "@" + t.name;
    case Term::Kind::App: {
      std::string s = to_string(t.functor());
      if (t.args.empty()) return s;
      s += '(';
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(t.args[i]);
      }
      return s + ')';
    }
  }
  return {};
}

/// A one-element hedge prints as its element; anything else in parentheses.
inline std::string to_string(const Hedge& h) {
  if (h.size() == 1) return to_string(h[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ", ";
    s += to_string(h[i]);
  }
  return s + ')';
}

namespace detail {

// precedence: choice 0, concat 1, star/atom 2
inline std::string regex_str(const Regex& r, int ctx) {
  std::string s;
  int mine = 2;
  switch (r.kind) {
    case Regex::Kind::Eps: return "eps";
    case Regex::Kind::Sym:
      return r.body().is_eps() ? r.sym : r.sym + "(" + regex_str(r.body(), 0) + ")";
    case Regex::Kind::Star: return regex_str(r.body(), 2) + "*";
    case Regex::Kind::Concat:
      mine = 1;
      s = regex_str(r.left(), 1) + " . " + regex_str(r.right(), 2);
      break;
    case Regex::Kind::Choice:
      mine = 0;
      s = regex_str(r.left(), 0) + " | " + regex_str(r.right(), 1);
      break;
  }
  return mine < ctx ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string to_string(const Regex& r) { return detail::regex_str(r, 0); }

inline std::string to_string(const Literal& l) {
  switch (l.kind) {
    case Literal::Kind::Eq: return to_string(l.lhs) + " = " + to_string(l.rhs);
    case Literal::Kind::FunctorEq: return to_string(l.flhs) + " = " + to_string(l.frhs);
    case Literal::Kind::Member: return to_string(l.lhs) + " in " + to_string(l.re);
  }
  return {};
}

inline std::string to_string(const Conjunction& c) {
  if (c.is_true()) return "true";
  if (c.is_false()) return "false";
  std::string s;
  for (std::size_t i = 0; i < c.lits.size(); ++i) {
    if (i) s += " & ";
    s += to_string(c.lits[i]);
  }
  return s;
}

inline std::string to_string(const Constraint& c) {
  if (c.disjuncts.size() == 1) return to_string(c.disjuncts[0]);
  std::string s;
  for (std::size_t i = 0; i < c.disjuncts.size(); ++i) {
    if (i) s += " \\/ ";
    s += "(" + to_string(c.disjuncts[i]) + ")";
  }
  return s;
}

inline std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const auto& [k, v] : s.terms) sep(), out += "?" + k + " -> " + to_string(v);
  for (const auto& [k, v] : s.hedges) sep(), out += "@" + k + " -> " + to_string(v);
  for (const auto& [k, v] : s.functors) sep(), out += "^" + k + " -> " + to_string(v);
  return out + "}";
}

inline std::string to_string(const Atom& a) {
  std::string s = a.pred;
  if (a.args.empty()) return s;
  s += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(a.args[i]);
  }
  return s + ')';
}

inline std::string to_string(const BodyLiteral& l) {
  return l.is_atom() ? to_string(l.atom) : to_string(l.lit);
}

inline std::string to_string(const Goal& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ", ";
    s += to_string(g[i]);
  }
  return s;
}

inline std::string to_string(const Clause& c) {
  if (c.body.empty()) return to_string(c.head) + ".";
  return to_string(c.head) + " :- " + to_string(c.body) + ".";
}

/// Declarations first, then clauses, one per line.
inline std::string to_string(const Program& p) {
  std::string s;
  for (const auto& f : p.sig.ordered) s += ":- ordered " + f + ".\n";
  for (const auto& f : p.sig.unordered) s += ":- unordered " + f + ".\n";
  for (const auto& [k, ms] : p.modes) {
    s += ":- mode " + k.first + "(";
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (i) s += ", ";
      s += ms[i] == Mode::In ? "i" : "o";
    }
    s += ").\n";
  }
  for (const auto& c : p.clauses) s += to_string(c) + "\n";
  return s;
}

inline std::string to_string(const State& st) {
  return "<" + (st.goal.empty() ? std::string("[]") : to_string(st.goal)) + " || " +
         to_string(st.store) + ">";
}

}  // namespace clph
