#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "clph/regex.hpp"
#include "clph/syntax.hpp"

namespace clph {

/// Primitive constraint. Eq holds hedge equations (a term equation is the
/// singleton case); FunctorEq holds F ≐ G; Member holds H in ρ.
struct Literal {
  enum class Kind : std::uint8_t { Eq, FunctorEq, Member };

  Kind kind = Kind::Eq;
  Hedge lhs;  // Member: the subject
  Hedge rhs;
  Functor flhs, frhs;
  Regex re;

  bool is_eq() const { return kind == Kind::Eq; }
  bool is_feq() const { return kind == Kind::FunctorEq; }
  bool is_member() const { return kind == Kind::Member; }
  bool is_equation() const { return kind != Kind::Member; }

  /// Both sides as hedges; F ≐ G is seen as F() ≐ G().
  std::pair<Hedge, Hedge> sides() const {
    if (kind == Kind::FunctorEq) return {Hedge{Term::app(flhs)}, Hedge{Term::app(frhs)}};
    return {lhs, rhs};
  }
};

inline int compare(const Literal& a, const Literal& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = compare(a.lhs, b.lhs)) return c;
  if (int c = compare(a.rhs, b.rhs)) return c;
  if (a.flhs != b.flhs) return a.flhs < b.flhs ? -1 : 1;
  if (a.frhs != b.frhs) return a.frhs < b.frhs ? -1 : 1;
  return compare(a.re, b.re);
}

inline bool operator==(const Literal& a, const Literal& b) { return compare(a, b) == 0; }
inline bool operator<(const Literal& a, const Literal& b) { return compare(a, b) < 0; }

inline Literal make_feq(Functor f, Functor g) {
  Literal l;
  l.kind = Literal::Kind::FunctorEq;
  l.flhs = std::move(f);
  l.frhs = std::move(g);
  return l;
}

/// Builds H1 ≐ H2, decomposing equal ordered heads and turning F1() ≐ F2()
/// into a functor equation.
inline Literal make_eq(Hedge l, Hedge r, const Signature& sig) {
  while (l.size() == 1 && r.size() == 1 && l[0].is_app() && r[0].is_app() && !l[0].head_is_var &&
         !r[0].head_is_var && l[0].name == r[0].name && !sig.is_unordered(l[0].name)) {
    Hedge la = std::move(l[0].args), ra = std::move(r[0].args);
    l = std::move(la);
    r = std::move(ra);
  }
  if (l.size() == 1 && r.size() == 1 && l[0].is_app() && r[0].is_app() && l[0].args.empty() &&
      r[0].args.empty())
    return make_feq(l[0].functor(), r[0].functor());
  Literal out;
  out.kind = Literal::Kind::Eq;
  out.lhs = std::move(l);
  out.rhs = std::move(r);
  return out;
}

inline Literal make_term_eq(const Term& a, const Term& b, const Signature& sig) {
  return make_eq(Hedge{a}, Hedge{b}, sig);
}

inline Literal make_member(Hedge h, Regex r) {
  Literal l;
  l.kind = Literal::Kind::Member;
  l.lhs = std::move(h);
  l.re = std::move(r);
  return l;
}

inline void collect_vars(const Literal& l, VarSet& out) {
  collect_vars(l.lhs, out);
  collect_vars(l.rhs, out);
  if (l.kind == Literal::Kind::FunctorEq) {
    collect_vars(l.flhs, out);
    collect_vars(l.frhs, out);
  }
}

inline bool occurs(const Var& v, const Literal& l) {
  if (occurs(v, l.lhs) || occurs(v, l.rhs)) return true;
  if (l.kind == Literal::Kind::FunctorEq && v.kind == VarKind::Func)
    return (l.flhs.is_var && l.flhs.name == v.name) || (l.frhs.is_var && l.frhs.name == v.name);
  return false;
}

inline Literal substitute(const Literal& l, const Substitution& s, const Signature& sig) {
  if (l.is_member()) return make_member(substitute(l.lhs, s), l.re);
  auto [a, b] = l.sides();
  return make_eq(substitute(a, s), substitute(b, s), sig);
}

// ---------------------------------------------------------------------------
// Conjunctions and DNF

/// ⊤, ⊥, or a non-empty literal sequence. Producing true or false inside a
/// conjunction collapses immediately, so the two never mix with literals.
struct Conjunction {
  enum class Kind : std::uint8_t { True, False, Lits };

  Kind kind = Kind::True;
  std::vector<Literal> lits;

  static Conjunction top() { return {}; }
  static Conjunction bottom() { return {Kind::False, {}}; }
  static Conjunction of(std::vector<Literal> ls) {
    if (ls.empty()) return top();
    return {Kind::Lits, std::move(ls)};
  }

  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
};

inline void collect_vars(const Conjunction& c, VarSet& out) {
  for (const auto& l : c.lits) collect_vars(l, out);
}

/// Literal multiset equality (conjunction is AC).
inline bool same_conjunction(const Conjunction& a, const Conjunction& b) {
  if (a.kind != b.kind) return false;
  if (a.lits.size() != b.lits.size()) return false;
  auto x = a.lits, y = b.lits;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return std::equal(x.begin(), x.end(), y.begin());
}

struct Constraint {
  std::vector<Conjunction> disjuncts{Conjunction::top()};

  static Constraint top() { return {}; }
  static Constraint bottom() { return Constraint{{Conjunction::bottom()}}; }
  static Constraint of(Conjunction c) { return Constraint{{std::move(c)}}; }

  bool is_false() const { return disjuncts.size() == 1 && disjuncts[0].is_false(); }
  bool is_true() const { return disjuncts.size() == 1 && disjuncts[0].is_true(); }
};

inline void collect_vars(const Constraint& c, VarSet& out) {
  for (const auto& d : c.disjuncts) collect_vars(d, out);
}

inline Conjunction conjoin(const Conjunction& a, const Conjunction& b) {
  if (a.is_false() || b.is_false()) return Conjunction::bottom();
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  auto ls = a.lits;
  ls.insert(ls.end(), b.lits.begin(), b.lits.end());
  return Conjunction::of(std::move(ls));
}

/// Quantifier-free formula over ⊤, ⊥, literals, ∧ and ∨.
struct Formula {
  enum class Kind : std::uint8_t { True, False, Lit, And, Or };

  Kind kind = Kind::True;
  Literal lit;
  std::vector<Formula> kids;

  static Formula top() { return {}; }
  static Formula bottom() { return {Kind::False, {}, {}}; }
  static Formula atom(Literal l) { return {Kind::Lit, std::move(l), {}}; }
  static Formula conj(std::vector<Formula> ks) { return {Kind::And, {}, std::move(ks)}; }
  static Formula disj(std::vector<Formula> ks) { return {Kind::Or, {}, std::move(ks)}; }

  static Formula of(const Constraint& c) {
    std::vector<Formula> ds;
    for (const auto& d : c.disjuncts) {
      if (d.is_true()) ds.push_back(top());
      else if (d.is_false()) ds.push_back(bottom());
      else {
        std::vector<Formula> ls;
        for (const auto& l : d.lits) ls.push_back(atom(l));
        ds.push_back(conj(std::move(ls)));
      }
    }
    return ds.size() == 1 ? ds[0] : disj(std::move(ds));
  }
};

/// Distributes ∧ over ∨ left to right.
inline Constraint dnf(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True: return Constraint::top();
    case Formula::Kind::False: return Constraint::bottom();
    case Formula::Kind::Lit: return Constraint::of(Conjunction::of({f.lit}));
    case Formula::Kind::Or: {
      if (f.kids.empty()) return Constraint::bottom();
      Constraint out{{}};
      for (const auto& k : f.kids) {
        auto d = dnf(k);
        out.disjuncts.insert(out.disjuncts.end(), d.disjuncts.begin(), d.disjuncts.end());
      }
      return out;
    }
    case Formula::Kind::And: {
      Constraint acc = Constraint::top();
      for (const auto& k : f.kids) {
        auto d = dnf(k);
        Constraint next{{}};
        for (const auto& a : acc.disjuncts)
          for (const auto& b : d.disjuncts) next.disjuncts.push_back(conjoin(a, b));
        acc = std::move(next);
      }
      return acc;
    }
  }
  return Constraint::top();
}

// ---------------------------------------------------------------------------
// Solved and partially solved forms

namespace detail {

inline bool occurs_elsewhere(const Var& v, const std::vector<Literal>& lits, std::size_t skip,
                             bool members_only) {
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i == skip) continue;
    if (members_only && !lits[i].is_member()) continue;
    if (occurs(v, lits[i])) return true;
  }
  return false;
}

}  // namespace detail

/// Variable solved by an equation literal at index i (first three cases), in
/// either orientation.
inline std::optional<Var> eq_solved_var(const std::vector<Literal>& lits, std::size_t i) {
  const Literal& l = lits[i];
  if (l.is_feq()) {
    for (int o = 0; o < 2; ++o) {
      const Functor& f = o ? l.frhs : l.flhs;
      const Functor& g = o ? l.flhs : l.frhs;
      if (!f.is_var || f == g) continue;
      Var v{VarKind::Func, f.name};
      if (!detail::occurs_elsewhere(v, lits, i, false)) return v;
    }
    return std::nullopt;
  }
  if (!l.is_eq()) return std::nullopt;
  for (int o = 0; o < 2; ++o) {
    const Hedge& a = o ? l.rhs : l.lhs;
    const Hedge& b = o ? l.lhs : l.rhs;
    if (a.size() != 1 || a[0].is_app()) continue;
    Var v = a[0].as_var();
    if (v.kind == VarKind::Term && !(b.size() == 1 && b[0].is_term())) continue;
    if (occurs(v, b)) continue;
    if (!detail::occurs_elsewhere(v, lits, i, false)) return v;
  }
  return std::nullopt;
}

/// Variable solved by a membership literal at index i (last two cases).
inline std::optional<Var> member_solved_var(const std::vector<Literal>& lits, std::size_t i) {
  const Literal& l = lits[i];
  if (!l.is_member() || l.lhs.size() != 1 || l.lhs[0].is_app()) return std::nullopt;
  Var v = l.lhs[0].as_var();
  if (v.kind == VarKind::Term && l.re.kind != Regex::Kind::Sym) return std::nullopt;
  if (v.kind == VarKind::Hedge && l.re.kind != Regex::Kind::Concat &&
      l.re.kind != Regex::Kind::Star)
    return std::nullopt;
  if (detail::occurs_elsewhere(v, lits, i, true)) return std::nullopt;
  return v;
}

inline bool literal_solved(const std::vector<Literal>& lits, std::size_t i) {
  return eq_solved_var(lits, i).has_value() || member_solved_var(lits, i).has_value();
}

inline bool var_solved_in(const Var& v, const Conjunction& d) {
  for (std::size_t i = 0; i < d.lits.size(); ++i) {
    if (auto s = eq_solved_var(d.lits, i); s && *s == v) return true;
    if (auto s = member_solved_var(d.lits, i); s && *s == v) return true;
  }
  return false;
}

/// Variables with a solved equation. This is the reading of "solved" used
/// by the termination measure.
inline VarSet eq_solved_vars(const Conjunction& d) {
  VarSet out;
  for (std::size_t i = 0; i < d.lits.size(); ++i)
    if (auto v = eq_solved_var(d.lits, i)) out.insert(*v);
  return out;
}

namespace detail {

inline std::size_t first_hvar(const Hedge& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i].is_hvar()) return i;
  return h.size();
}

inline bool disjoint(const Hedge& a, const Hedge& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x == y) return false;
  return true;
}

inline bool has_hvar(const Hedge& h) { return first_hvar(h) < h.size(); }

}  // namespace detail

/// The irreducible non-solved literal shapes admitted in partially solved
/// conjunctions.
inline bool is_stuck(const Literal& l, const Signature& sig) {
  if (l.is_member()) {
    const Hedge& h = l.lhs;
    if (h.size() == 1 && h[0].is_app() && !h[0].head_is_var && sig.is_unordered(h[0].name) &&
        l.re.kind == Regex::Kind::Sym && l.re.sym == h[0].name && detail::has_hvar(h[0].args))
      return true;
    if (h.size() >= 2 && h[0].is_hvar() &&
        (l.re.kind == Regex::Kind::Concat || l.re.kind == Regex::Kind::Star))
      return true;
    return false;
  }
  if (!l.is_eq()) return false;
  for (int o = 0; o < 2; ++o) {
    const Hedge& a = o ? l.rhs : l.lhs;
    const Hedge& b = o ? l.lhs : l.rhs;
    if (a.size() >= 2 && a[0].is_hvar()) {
      Var x = a[0].as_var();
      // (X,H1) ≐ (Y,H2)
      if (b.size() >= 2 && b[0].is_hvar() && b[0].name != a[0].name) return true;
      // (X,H1) ≐ (T,Y,H2)
      std::size_t k = detail::first_hvar(b);
      if (k > 0 && k < b.size()) {
        Hedge t(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(k));
        if (!occurs(x, t)) return true;
      }
    }
  }
  if (l.lhs.size() == 1 && l.rhs.size() == 1) {
    const Term& s = l.lhs[0];
    const Term& t = l.rhs[0];
    if (s.is_app() && t.is_app() && !s.head_is_var && !t.head_is_var && s.name == t.name &&
        sig.is_unordered(s.name) && detail::has_hvar(s.args) && detail::has_hvar(t.args) &&
        detail::disjoint(s.args, t.args))
      return true;
  }
  return false;
}

enum class Classification : std::uint8_t { Solved, PartiallySolved, Active, Failed };

inline Classification classify(const Conjunction& d, const Signature& sig) {
  if (d.is_true()) return Classification::Solved;
  if (d.is_false()) return Classification::Failed;
  bool all_solved = true;
  for (std::size_t i = 0; i < d.lits.size(); ++i) {
    if (literal_solved(d.lits, i)) continue;
    all_solved = false;
    if (!is_stuck(d.lits[i], sig)) return Classification::Active;
  }
  return all_solved ? Classification::Solved : Classification::PartiallySolved;
}

/// Worst classification over the disjuncts; ⊥ only when every disjunct is.
inline Classification classify(const Constraint& c, const Signature& sig) {
  if (c.is_false()) return Classification::Failed;
  Classification worst = Classification::Solved;
  bool any_live = false;
  for (const auto& d : c.disjuncts) {
    auto k = classify(d, sig);
    if (k == Classification::Failed) continue;
    any_live = true;
    if (k == Classification::Active) return k;
    if (k == Classification::PartiallySolved) worst = k;
  }
  return any_live ? worst : Classification::Failed;
}

}  // namespace clph
