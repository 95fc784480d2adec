#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "clph/constraint.hpp"
#include "clph/regex.hpp"
#include "clph/syntax.hpp"

namespace clph {

/// Enumeration limits. Depth counts a constant as 1.
struct Bounds {
  std::size_t max_depth = 2;
  std::size_t max_width = 2;
  std::size_t max_total_size = 4;
};

// ---------------------------------------------------------------------------
// Canonical forms: arguments of unordered symbols sorted by compare

inline Hedge canonical(const Hedge& h, const Signature& sig);

inline Term canonical(const Term& t, const Signature& sig) {
  if (!t.is_app()) return t;
  Term out = t;
  out.args = canonical(t.args, sig);
  if (!t.head_is_var && sig.is_unordered(t.name)) std::sort(out.args.begin(), out.args.end());
  return out;
}

inline Hedge canonical(const Hedge& h, const Signature& sig) {
  Hedge out;
  out.reserve(h.size());
  for (const auto& t : h) out.push_back(canonical(t, sig));
  return out;
}

// ---------------------------------------------------------------------------
// Ground enumeration

namespace detail {

inline std::vector<Hedge> enum_hedges(const std::vector<std::string>& syms, const Signature& sig,
                                      std::size_t depth, std::size_t budget, std::size_t width);

/// Canonical ground terms of depth <= depth and size <= budget.
inline std::vector<Term> enum_terms(const std::vector<std::string>& syms, const Signature& sig,
                                    std::size_t depth, std::size_t budget, std::size_t width) {
  std::vector<Term> out;
  if (depth == 0 || budget == 0) return out;
  for (const auto& f : syms) {
    out.push_back(Term::sym(f));
    if (depth == 1) continue;
    for (auto& args : enum_hedges(syms, sig, depth - 1, budget - 1, width)) {
      if (args.empty()) continue;
      if (sig.is_unordered(f) && !std::is_sorted(args.begin(), args.end())) continue;
      out.push_back(Term::sym(f, std::move(args)));
    }
  }
  return out;
}

inline std::vector<Hedge> enum_hedges(const std::vector<std::string>& syms, const Signature& sig,
                                      std::size_t depth, std::size_t budget, std::size_t width) {
  std::vector<Hedge> out{Hedge{}};
  if (width == 0 || budget == 0) return out;
  for (const auto& t : enum_terms(syms, sig, depth, budget, width))
    for (auto& rest : enum_hedges(syms, sig, depth, budget - size(t), width - 1)) {
      Hedge h{t};
      h.insert(h.end(), rest.begin(), rest.end());
      out.push_back(std::move(h));
    }
  return out;
}

}  // namespace detail

/// One canonical representative per class of ground terms within bounds.
/// max_width also limits argument lists.
inline std::vector<Term> enum_ground_terms(const Signature& sig, const Bounds& b) {
  return detail::enum_terms(sig.symbols(), sig, b.max_depth, b.max_total_size, b.max_width);
}

/// All ground hedges within bounds, one canonical representative per
/// permutation class.
inline std::vector<Hedge> enum_ground(const Signature& sig, const Bounds& b) {
  return detail::enum_hedges(sig.symbols(), sig, b.max_depth, b.max_total_size, b.max_width);
}

// ---------------------------------------------------------------------------
// Evaluation under the intended structure

/// Values of variables. A function variable maps to a one-element hedge
/// holding a constant whose name is the symbol.
using Grounding = std::map<Var, Hedge>;

inline Substitution to_substitution(const Grounding& g) {
  Substitution s;
  for (const auto& [v, h] : g) {
    switch (v.kind) {
      case VarKind::Term:
        if (h.size() != 1) throw std::invalid_argument("grounding: term variable needs one term");
        s.terms.emplace(v.name, h[0]);
        break;
      case VarKind::Hedge: s.hedges.emplace(v.name, h); break;
      case VarKind::Func:
        if (h.size() != 1) throw std::invalid_argument("grounding: function variable needs a symbol");
        s.functors.emplace(v.name, Functor::sym(h[0].name));
        break;
    }
  }
  return s;
}

inline bool eval_ground(const Literal& l, const Substitution& th, const Signature& sig) {
  switch (l.kind) {
    case Literal::Kind::FunctorEq: {
      Functor a = substitute(l.flhs, th), b = substitute(l.frhs, th);
      if (a.is_var || b.is_var) throw std::invalid_argument("eval_ground: not grounding");
      return a == b;
    }
    case Literal::Kind::Eq: {
      Hedge a = substitute(l.lhs, th), b = substitute(l.rhs, th);
      if (!is_ground(a) || !is_ground(b)) throw std::invalid_argument("eval_ground: not grounding");
      return compare(canonical(a, sig), canonical(b, sig)) == 0;
    }
    case Literal::Kind::Member: {
      Hedge a = substitute(l.lhs, th);
      if (!is_ground(a)) throw std::invalid_argument("eval_ground: not grounding");
      return ground_member(a, l.re, sig);
    }
  }
  return false;
}

inline bool eval_ground(const Conjunction& d, const Substitution& th, const Signature& sig) {
  if (d.is_false()) return false;
  for (const auto& l : d.lits)
    if (!eval_ground(l, th, sig)) return false;
  return true;
}

inline bool eval_ground(const Constraint& c, const Substitution& th, const Signature& sig) {
  for (const auto& d : c.disjuncts)
    if (eval_ground(d, th, sig)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Bounded solution enumeration

namespace detail {

struct Domains {
  std::vector<Term> terms;
  std::vector<Hedge> hedges;
  std::vector<std::string> symbols;
};

inline Domains domains(const Signature& sig, const Bounds& b) {
  return {enum_ground_terms(sig, b), enum_ground(sig, b), sig.symbols()};
}

/// Enumerates values for vars[i..] with a shared size budget; calls f on
/// each complete grounding until it returns true.
template <class F>
bool each_grounding(const std::vector<Var>& vars, std::size_t i, std::size_t budget,
                    const Domains& dom, Grounding& g, F&& f) {
  if (i == vars.size()) return f(g);
  const Var& v = vars[i];
  auto attempt = [&](Hedge h, std::size_t cost) {
    if (cost > budget) return false;
    g[v] = std::move(h);
    bool done = each_grounding(vars, i + 1, budget - cost, dom, g, f);
    g.erase(v);
    return done;
  };
  switch (v.kind) {
    case VarKind::Term:
      for (const auto& t : dom.terms)
        if (attempt(Hedge{t}, size(t))) return true;
      break;
    case VarKind::Hedge:
      for (const auto& h : dom.hedges)
        if (attempt(h, size(h))) return true;
      break;
    case VarKind::Func:
      for (const auto& s : dom.symbols)
        if (attempt(Hedge{Term::sym(s)}, 0)) return true;
      break;
  }
  return false;
}

/// Binds variables of d outside g that an equation fixes to a ground value.
inline void propagate(const Conjunction& d, Grounding& g, const Signature& sig) {
  for (bool changed = true; changed;) {
    changed = false;
    Substitution th = to_substitution(g);
    for (const auto& l : d.lits) {
      if (l.is_feq()) {
        for (int o = 0; o < 2; ++o) {
          const Functor& v = o ? l.frhs : l.flhs;
          Functor e = substitute(o ? l.flhs : l.frhs, th);
          Var key{VarKind::Func, v.name};
          if (v.is_var && !e.is_var && !g.count(key)) {
            g[key] = Hedge{Term::sym(e.name)};
            changed = true;
          }
        }
        continue;
      }
      if (!l.is_eq()) continue;
      for (int o = 0; o < 2; ++o) {
        const Hedge& side = o ? l.rhs : l.lhs;
        if (side.size() != 1 || side[0].is_app()) continue;
        Var key = side[0].as_var();
        if (g.count(key)) continue;
        Hedge e = substitute(o ? l.lhs : l.rhs, th);
        if (!is_ground(e) || (key.kind == VarKind::Term && e.size() != 1)) continue;
        g[key] = canonical(e, sig);
        changed = true;
      }
    }
  }
}

inline bool satisfiable_extension(const Conjunction& d, const Grounding& base,
                                  const Signature& sig, const Domains& dom, const Bounds& b) {
  if (d.is_false()) return false;
  Grounding g = base;
  propagate(d, g, sig);
  std::vector<Var> extra;
  for (const auto& v : free_vars(d))
    if (!g.count(v)) extra.push_back(v);
  if (extra.empty()) return eval_ground(d, to_substitution(g), sig);
  return each_grounding(extra, 0, b.max_total_size * extra.size(), dom, g,
                        [&](const Grounding& full) {
                          return eval_ground(d, to_substitution(full), sig);
                        });
}

}  // namespace detail

/// Groundings of `vars` (default var(C)) within bounds that satisfy some
/// disjunct. The bound on total size is shared by all variables. Other
/// variables of C are existential: they are fixed by equations where
/// possible and otherwise enumerated within bounds.
inline std::set<Grounding> brute_solutions(const Constraint& c, const Signature& sig,
                                           const Bounds& b,
                                           const std::optional<VarSet>& vars = std::nullopt) {
  VarSet vs = vars ? *vars : free_vars(c);
  std::vector<Var> order(vs.begin(), vs.end());
  auto dom = detail::domains(sig, b);
  std::set<Grounding> out;
  Grounding g;
  detail::each_grounding(order, 0, b.max_total_size, dom, g, [&](const Grounding& full) {
    for (const auto& d : c.disjuncts)
      if (detail::satisfiable_extension(d, full, sig, dom, b)) {
        out.insert(full);
        break;
      }
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Groundings of solved conjunctions

/// A hedge of minimal size in the language.
inline Hedge shortest_witness(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Eps:
    case Regex::Kind::Star: return {};
    case Regex::Kind::Sym: return {Term::sym(r.sym, shortest_witness(r.body()))};
    case Regex::Kind::Concat: {
      Hedge h = shortest_witness(r.left());
      Hedge t = shortest_witness(r.right());
      h.insert(h.end(), t.begin(), t.end());
      return h;
    }
    case Regex::Kind::Choice: {
      Hedge a = shortest_witness(r.left()), b = shortest_witness(r.right());
      return size(b) < size(a) ? b : a;
    }
  }
  return {};
}

/// Builds a solution of a solved conjunction: membership-solved variables
/// take shortest witnesses, unconstrained ones a default value, and
/// equation-solved ones the instance of their other side.
inline Substitution solved_grounding(const Conjunction& d, const Signature& sig) {
  auto syms = sig.symbols();
  std::string dflt = syms.empty() ? std::string("a") : syms.front();
  VarSet eq_vars = eq_solved_vars(d);
  Substitution base;
  for (std::size_t i = 0; i < d.lits.size(); ++i) {
    auto v = member_solved_var(d.lits, i);
    if (!v) continue;
    Hedge w = shortest_witness(d.lits[i].re);
    if (v->kind == VarKind::Term) base.terms.emplace(v->name, w.at(0));
    else base.hedges.emplace(v->name, w);
  }
  for (const auto& v : free_vars(d)) {
    if (eq_vars.count(v)) continue;
    switch (v.kind) {
      case VarKind::Term: base.terms.emplace(v.name, Term::sym(dflt)); break;
      case VarKind::Hedge: base.hedges.emplace(v.name, Hedge{}); break;
      case VarKind::Func: base.functors.emplace(v.name, Functor::sym(dflt)); break;
    }
  }
  Substitution out = base;
  for (std::size_t i = 0; i < d.lits.size(); ++i) {
    auto v = eq_solved_var(d.lits, i);
    if (!v) continue;
    const Literal& l = d.lits[i];
    if (l.is_feq()) {
      const Functor& other = (l.flhs.is_var && l.flhs.name == v->name) ? l.frhs : l.flhs;
      out.functors.emplace(v->name, substitute(other, base));
      continue;
    }
    bool left = l.lhs.size() == 1 && !l.lhs[0].is_app() && l.lhs[0].as_var() == *v;
    Hedge val = substitute(left ? l.rhs : l.lhs, base);
    if (v->kind == VarKind::Term) out.terms.emplace(v->name, val.at(0));
    else out.hedges.emplace(v->name, val);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference recursive path ordering on ranked ground terms

enum class Status : std::uint8_t { Lex, Mul };

struct RpoTable {
  std::map<std::string, int> prec;  // larger value = greater symbol
  std::map<std::string, Status> status;
};

namespace detail {

inline const std::string& rpo_symbol(const Term& t, const RpoTable& tab) {
  if (!t.is_app() || t.head_is_var || !tab.prec.count(t.name) || !tab.status.count(t.name))
    throw std::invalid_argument("rpo_reference: undeclared symbol or non-ground term");
  return t.name;
}

}  // namespace detail

inline bool rpo_reference(const Term& s, const Term& t, const RpoTable& tab);

/// Leftmost difference decides.
inline bool rpo_lex(const Hedge& ss, const Hedge& ts, const RpoTable& tab) {
  for (std::size_t i = 0; i < ss.size() && i < ts.size(); ++i) {
    if (ss[i] == ts[i]) continue;
    return rpo_reference(ss[i], ts[i], tab);
  }
  return false;
}

/// Multiset extension: after cancelling common elements, the left side is
/// non-empty and dominates every remaining element on the right.
inline bool rpo_mul(Hedge ss, Hedge ts, const RpoTable& tab) {
  for (auto it = ss.begin(); it != ss.end();) {
    auto jt = std::find(ts.begin(), ts.end(), *it);
    if (jt == ts.end()) {
      ++it;
      continue;
    }
    ts.erase(jt);
    it = ss.erase(it);
  }
  if (ss.empty()) return false;
  for (const auto& t : ts)
    if (std::none_of(ss.begin(), ss.end(), [&](const Term& s) { return rpo_reference(s, t, tab); }))
      return false;
  return true;
}

inline bool rpo_reference(const Term& s, const Term& t, const RpoTable& tab) {
  const std::string& f = detail::rpo_symbol(s, tab);
  const std::string& g = detail::rpo_symbol(t, tab);
  for (const auto& si : s.args)
    if (si == t || rpo_reference(si, t, tab)) return true;
  for (const auto& ti : t.args)
    if (!rpo_reference(s, ti, tab)) return false;
  if (tab.prec.at(f) > tab.prec.at(g)) return true;
  if (f != g) return false;
  return tab.status.at(f) == Status::Lex ? rpo_lex(s.args, t.args, tab)
                                         : rpo_mul(s.args, t.args, tab);
}

// ---------------------------------------------------------------------------
// Language enumeration by structural recursion

namespace detail {

using HedgeSet = std::set<Hedge, HedgeLess>;

inline HedgeSet lang_upto(const Regex& r, const Signature& sig, std::size_t n) {
  HedgeSet out;
  switch (r.kind) {
    case Regex::Kind::Eps: out.insert(Hedge{}); break;
    case Regex::Kind::Sym:
      if (n == 0) break;
      for (const auto& h : lang_upto(r.body(), sig, n - 1))
        out.insert(canonical(Hedge{Term::sym(r.sym, h)}, sig));
      break;
    case Regex::Kind::Choice:
      out = lang_upto(r.left(), sig, n);
      for (auto& h : lang_upto(r.right(), sig, n)) out.insert(h);
      break;
    case Regex::Kind::Concat: {
      auto a = lang_upto(r.left(), sig, n);
      auto b = lang_upto(r.right(), sig, n);
      for (const auto& x : a)
        for (const auto& y : b)
          if (size(x) + size(y) <= n) {
            Hedge h = x;
            h.insert(h.end(), y.begin(), y.end());
            out.insert(std::move(h));
          }
      break;
    }
    case Regex::Kind::Star: {
      auto body = lang_upto(r.body(), sig, n);
      out.insert(Hedge{});
      for (bool grew = true; grew;) {
        grew = false;
        HedgeSet next = out;
        for (const auto& x : body) {
          if (x.empty()) continue;
          for (const auto& y : out)
            if (size(x) + size(y) <= n) {
              Hedge h = x;
              h.insert(h.end(), y.begin(), y.end());
              grew |= next.insert(std::move(h)).second;
            }
        }
        out = std::move(next);
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

/// All hedges of the language with size <= n, in canonical form.
inline std::vector<Hedge> lang_enumerate(const Regex& r, const Signature& sig, std::size_t n) {
  auto s = detail::lang_upto(r, sig, n);
  return {s.begin(), s.end()};
}

}  // namespace clph
