#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clph/automaton.hpp"
#include "clph/constraint.hpp"
#include "clph/regex.hpp"
#include "clph/syntax.hpp"

namespace clph {

// clang-format off
enum class RuleId : std::uint8_t {
  Log1, Log2, Log3, Log4, Log5, Log6, Log7, Log8,
  F1, F2, F3, F4, F5, F6, F7,
  Del1, Del2, Del3,
  D1, D2,
  E1, E2, E3, E4, E5, E6, E7,
  M1, M2, M3, M4, M5, M6, M7, M8, M9, M10, M11, M12,
};
// clang-format on

inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(RuleId::M12) + 1;

inline std::string_view rule_name(RuleId r) {
  static constexpr std::array<std::string_view, kRuleCount> names = {
      "Log1", "Log2", "Log3", "Log4", "Log5", "Log6", "Log7", "Log8", "F1",  "F2",
      "F3",   "F4",   "F5",   "F6",   "F7",   "Del1", "Del2", "Del3", "D1",  "D2",
      "E1",   "E2",   "E3",   "E4",   "E5",   "E6",   "E7",   "M1",   "M2",  "M3",
      "M4",   "M5",   "M6",   "M7",   "M8",   "M9",   "M10",  "M11",  "M12"};
  return names[static_cast<std::size_t>(r)];
}

inline std::optional<RuleId> rule_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kRuleCount; ++i)
    if (rule_name(static_cast<RuleId>(i)) == s) return static_cast<RuleId>(i);
  return std::nullopt;
}

/// Application order used by step: Log, Fail, Del, Dec, Elim, Memb, with
/// M8 after every other membership rule.
inline const std::vector<RuleId>& step_order() {
  static const std::vector<RuleId> order = [] {
    std::vector<RuleId> o;
    auto range = [&](RuleId a, RuleId b) {
      for (auto i = static_cast<std::size_t>(a); i <= static_cast<std::size_t>(b); ++i)
        o.push_back(static_cast<RuleId>(i));
    };
    range(RuleId::Log1, RuleId::Log8);
    range(RuleId::F1, RuleId::F7);
    range(RuleId::Del1, RuleId::Del3);
    range(RuleId::D1, RuleId::D2);
    range(RuleId::E1, RuleId::E7);
    range(RuleId::M1, RuleId::M7);
    range(RuleId::M9, RuleId::M12);
    o.push_back(RuleId::M8);
    return o;
  }();
  return order;
}

/// before/after are filled in only when an observer is installed.
struct TraceEvent {
  RuleId rule = RuleId::Log1;
  std::size_t disjunct = 0;
  std::size_t literal = 0;
  Constraint before;
  Constraint after;
};

// ---------------------------------------------------------------------------
// Termination measure

struct ConjMeasure {
  std::size_t n1 = 0;
  std::vector<std::size_t> m1;  // multisets are kept sorted descending
  std::size_t n2 = 0;
  std::vector<std::size_t> m2;
  std::vector<std::size_t> m3;
};

using Measure = std::vector<ConjMeasure>;

namespace detail {

inline int multiset_cmp(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) return -1;
  if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) return 1;
  return 0;
}

inline void sort_desc(std::vector<std::size_t>& v) { std::sort(v.rbegin(), v.rend()); }

}  // namespace detail

inline int compare(const ConjMeasure& a, const ConjMeasure& b) {
  if (a.n1 != b.n1) return a.n1 < b.n1 ? -1 : 1;
  if (int c = detail::multiset_cmp(a.m1, b.m1)) return c;
  if (a.n2 != b.n2) return a.n2 < b.n2 ? -1 : 1;
  if (int c = detail::multiset_cmp(a.m2, b.m2)) return c;
  return detail::multiset_cmp(a.m3, b.m3);
}

/// N1 counts the variables of D without a solved equation.
inline ConjMeasure cm(const Conjunction& d) {
  ConjMeasure m;
  if (d.kind != Conjunction::Kind::Lits) return m;
  VarSet vars;
  collect_vars(d, vars);
  VarSet solved = eq_solved_vars(d);
  for (const auto& v : vars)
    if (!solved.count(v)) ++m.n1;
  for (const auto& l : d.lits) {
    if (l.is_member()) {
      if (!l.lhs.empty()) m.m1.push_back(size(l.lhs));
      if (l.lhs.size() == 1 && l.lhs[0].is_hvar()) ++m.n2;
      m.m2.push_back(size(l.re));
    } else if (l.is_feq()) {
      m.m3.push_back(2);
    } else {
      m.m3.push_back(size(l.lhs) + size(l.rhs));
    }
  }
  detail::sort_desc(m.m1);
  detail::sort_desc(m.m2);
  detail::sort_desc(m.m3);
  return m;
}

inline Measure cm(const Constraint& c) {
  Measure out;
  for (const auto& d : c.disjuncts) out.push_back(cm(d));
  std::sort(out.begin(), out.end(),
            [](const ConjMeasure& a, const ConjMeasure& b) { return compare(a, b) > 0; });
  return out;
}

/// Multiset extension of the lexicographic tuple order.
inline bool measure_less(const Measure& a, const Measure& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const ConjMeasure& x, const ConjMeasure& y) { return compare(x, y) < 0; });
}

// ---------------------------------------------------------------------------
// Rules

struct SolverContext {
  const Signature& sig;
  FreshSupply* supply = nullptr;
};

namespace rules {

using Disjuncts = std::vector<Conjunction>;
using Result = std::optional<Disjuncts>;

inline Hedge slice(const Hedge& h, std::size_t from, std::size_t to) {
  return Hedge(h.begin() + static_cast<std::ptrdiff_t>(from),
               h.begin() + static_cast<std::ptrdiff_t>(to));
}
inline Hedge tail(const Hedge& h, std::size_t from = 1) { return slice(h, from, h.size()); }

inline bool has_term(const Hedge& h) {
  return std::any_of(h.begin(), h.end(), [](const Term& t) { return t.is_term(); });
}

inline bool is_single_var(const Hedge& h, Term::Kind k) { return h.size() == 1 && h[0].kind == k; }

inline bool single_app(const Hedge& h) { return h.size() == 1 && h[0].is_app(); }

inline bool single_sym_app(const Hedge& h) { return single_app(h) && !h[0].head_is_var; }

inline bool occurs_in_rest(const Var& v, const Conjunction& d, std::size_t j) {
  for (std::size_t i = 0; i < d.lits.size(); ++i)
    if (i != j && occurs(v, d.lits[i])) return true;
  return false;
}

/// D with literal j replaced by repl and theta applied to every other literal.
inline Conjunction rebuild(const Conjunction& d, std::size_t j, std::vector<Literal> repl,
                           const Substitution* theta, const Signature& sig) {
  std::vector<Literal> out;
  out.reserve(d.lits.size() + repl.size());
  auto other = [&](const Literal& l) { out.push_back(theta ? substitute(l, *theta, sig) : l); };
  for (std::size_t i = 0; i < j; ++i) other(d.lits[i]);
  for (auto& l : repl) out.push_back(std::move(l));
  for (std::size_t i = j + 1; i < d.lits.size(); ++i) other(d.lits[i]);
  return Conjunction::of(std::move(out));
}

inline Result one(Conjunction c) { return Disjuncts{std::move(c)}; }
inline Result fail() { return Disjuncts{Conjunction::bottom()}; }

/// Orientations of an equation literal: (lhs, rhs) first.
template <class F>
Result oriented(const Literal& l, F&& f) {
  if (!l.is_eq()) return std::nullopt;
  if (auto r = f(l.lhs, l.rhs)) return r;
  return f(l.rhs, l.lhs);
}

// --- Log ---

inline Result log7(const Conjunction& d, std::size_t j, SolverContext&) {
  const Literal& l = d.lits[j];
  bool trivial = l.is_feq() ? l.flhs == l.frhs : (l.is_eq() && compare(l.lhs, l.rhs) == 0);
  if (!trivial) return std::nullopt;
  return one(rebuild(d, j, {}, nullptr, {}));
}

inline Result log8(const Conjunction& d, std::size_t j, SolverContext&) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !l.lhs.empty() || !nullable(l.re)) return std::nullopt;
  return one(rebuild(d, j, {}, nullptr, {}));
}

// --- Fail ---

inline Result f1(const Conjunction& d, std::size_t j, SolverContext&) {
  return oriented(d.lits[j], [](const Hedge& a, const Hedge& b) -> Result {
    if (!is_single_var(a, Term::Kind::TermVar)) return std::nullopt;
    Var x = a[0].as_var();
    for (const auto& t : b)
      if (t.is_app() && occurs(x, t.args)) return fail();
    return std::nullopt;
  });
}

inline Result f2(const Conjunction& d, std::size_t j, SolverContext&) {
  return oriented(d.lits[j], [](const Hedge& a, const Hedge& b) -> Result {
    if (!is_single_var(a, Term::Kind::HedgeVar)) return std::nullopt;
    if (has_term(b) && occurs(a[0].as_var(), b)) return fail();
    return std::nullopt;
  });
}

inline Result f3(const Conjunction& d, std::size_t j, SolverContext&) {
  const Literal& l = d.lits[j];
  if (l.is_feq()) {
    if (!l.flhs.is_var && !l.frhs.is_var && l.flhs.name != l.frhs.name) return fail();
    return std::nullopt;
  }
  if (!l.is_eq() || !single_sym_app(l.lhs) || !single_sym_app(l.rhs)) return std::nullopt;
  if (l.lhs[0].name != l.rhs[0].name) return fail();
  return std::nullopt;
}

inline Result f4(const Conjunction& d, std::size_t j, SolverContext&) {
  return oriented(d.lits[j], [](const Hedge& a, const Hedge& b) -> Result {
    if (a.empty() && has_term(b)) return fail();
    return std::nullopt;
  });
}

inline Result f5(const Conjunction& d, std::size_t j, SolverContext&) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !single_sym_app(l.lhs) || l.re.kind != Regex::Kind::Sym)
    return std::nullopt;
  if (l.lhs[0].name != l.re.sym) return fail();
  return std::nullopt;
}

inline Result f6(const Conjunction& d, std::size_t j, SolverContext&) {
  const Literal& l = d.lits[j];
  if (l.is_member() && l.lhs.empty() && !nullable(l.re)) return fail();
  return std::nullopt;
}

inline Result f7(const Conjunction& d, std::size_t j, SolverContext&) {
  const Literal& l = d.lits[j];
  if (l.is_member() && l.re.is_eps() && has_term(l.lhs)) return fail();
  return std::nullopt;
}

// --- Del ---

inline Result del1(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_eq() || l.lhs.empty() || l.rhs.empty()) return std::nullopt;
  if (!l.lhs[0].is_hvar() || !(l.lhs[0] == l.rhs[0])) return std::nullopt;
  return one(rebuild(d, j, {make_eq(tail(l.lhs), tail(l.rhs), cx.sig)}, nullptr, cx.sig));
}

inline Result del2(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_eq() || !single_sym_app(l.lhs) || !single_sym_app(l.rhs)) return std::nullopt;
  const Term& s = l.lhs[0];
  const Term& t = l.rhs[0];
  if (s.name != t.name || !cx.sig.is_unordered(s.name)) return std::nullopt;
  for (std::size_t i = 0; i < s.args.size(); ++i) {
    auto it = std::find(t.args.begin(), t.args.end(), s.args[i]);
    if (it == t.args.end()) continue;
    Hedge sa = s.args, ta = t.args;
    sa.erase(sa.begin() + static_cast<std::ptrdiff_t>(i));
    ta.erase(ta.begin() + (it - t.args.begin()));
    Literal nl = make_eq({Term::sym(s.name, std::move(sa))}, {Term::sym(t.name, std::move(ta))},
                         cx.sig);
    return one(rebuild(d, j, {std::move(nl)}, nullptr, cx.sig));
  }
  return std::nullopt;
}

inline Result del3(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (!is_single_var(a, Term::Kind::HedgeVar)) return std::nullopt;
    for (std::size_t k = 1; k < b.size(); ++k) {
      if (!(b[k] == a[0])) continue;
      return one(rebuild(d, j,
                         {make_eq(slice(b, 0, k), {}, cx.sig), make_eq(tail(b, k + 1), {}, cx.sig)},
                         nullptr, cx.sig));
    }
    return std::nullopt;
  });
}

// --- Dec ---

inline Result d1(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (!single_sym_app(a) || !single_sym_app(b)) return std::nullopt;
    const Term& s = a[0];
    const Term& t = b[0];
    if (s.name != t.name || !cx.sig.is_unordered(s.name)) return std::nullopt;
    if (!is_term_sequence(t.args) || !detail::disjoint(s.args, t.args)) return std::nullopt;
    Disjuncts out;
    for (const auto& p : perms(t.args))
      out.push_back(rebuild(d, j, {make_eq(s.args, p, cx.sig)}, nullptr, cx.sig));
    return out;
  });
}

inline Result d2(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_eq() || l.lhs.empty() || l.rhs.empty()) return std::nullopt;
  if (!l.lhs[0].is_term() || !l.rhs[0].is_term()) return std::nullopt;
  if (l.lhs.size() == 1 && l.rhs.size() == 1) return std::nullopt;
  return one(rebuild(d, j,
                     {make_eq({l.lhs[0]}, {l.rhs[0]}, cx.sig),
                      make_eq(tail(l.lhs), tail(l.rhs), cx.sig)},
                     nullptr, cx.sig));
}

// --- Elim ---

inline Result e1(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (!is_single_var(a, Term::Kind::TermVar) || b.size() != 1 || !b[0].is_term())
      return std::nullopt;
    Var x = a[0].as_var();
    if (occurs(x, b) || !occurs_in_rest(x, d, j)) return std::nullopt;
    if (b[0].is_tvar() && !occurs_in_rest(b[0].as_var(), d, j)) return std::nullopt;
    Substitution th = Substitution::single(x, b);
    return one(rebuild(d, j, {d.lits[j]}, &th, cx.sig));
  });
}

inline Result e2(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (!is_single_var(a, Term::Kind::HedgeVar)) return std::nullopt;
    Var x = a[0].as_var();
    if (occurs(x, b) || !occurs_in_rest(x, d, j)) return std::nullopt;
    if (is_single_var(b, Term::Kind::HedgeVar) && !occurs_in_rest(b[0].as_var(), d, j))
      return std::nullopt;
    Substitution th = Substitution::single(x, b);
    return one(rebuild(d, j, {d.lits[j]}, &th, cx.sig));
  });
}

inline Result e3(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (a.size() < 2 || !a[0].is_hvar() || !is_term_sequence(b)) return std::nullopt;
    Var x = a[0].as_var();
    if (occurs(x, b)) return std::nullopt;
    Hedge rest = tail(a);
    Disjuncts out;
    for (std::size_t k = 0; k <= b.size(); ++k) {
      Hedge t1 = slice(b, 0, k);
      Substitution th = Substitution::single(x, t1);
      out.push_back(rebuild(d, j,
                            {make_eq({a[0]}, t1, cx.sig),
                             make_eq(substitute(rest, th), tail(b, k), cx.sig)},
                            &th, cx.sig));
    }
    return out;
  });
}

inline Result e4(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (a.size() < 2 || !a[0].is_hvar()) return std::nullopt;
    Var x = a[0].as_var();
    std::size_t m = 0;
    for (; m < b.size(); ++m) {
      if (b[m].is_hvar()) return std::nullopt;
      if (occurs(x, b[m])) break;
    }
    if (m == b.size()) return std::nullopt;
    Hedge rest = tail(a);
    Disjuncts out;
    for (std::size_t k = 0; k <= m; ++k) {
      Hedge t1 = slice(b, 0, k);
      Substitution th = Substitution::single(x, t1);
      out.push_back(rebuild(d, j,
                            {make_eq({a[0]}, t1, cx.sig),
                             make_eq(substitute(rest, th), substitute(tail(b, k), th), cx.sig)},
                            &th, cx.sig));
    }
    return out;
  });
}

inline Result e5(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_feq()) return std::nullopt;
  for (int o = 0; o < 2; ++o) {
    const Functor& f = o ? l.frhs : l.flhs;
    const Functor& g = o ? l.flhs : l.frhs;
    if (!f.is_var || f == g) continue;
    Var fv{VarKind::Func, f.name};
    if (!occurs_in_rest(fv, d, j)) continue;
    if (g.is_var && !occurs_in_rest(Var{VarKind::Func, g.name}, d, j)) continue;
    Substitution th;
    th.functors.emplace(f.name, g);
    return one(rebuild(d, j, {l}, &th, cx.sig));
  }
  return std::nullopt;
}

inline Result e6(const Conjunction& d, std::size_t j, SolverContext& cx) {
  return oriented(d.lits[j], [&](const Hedge& a, const Hedge& b) -> Result {
    if (!single_app(a) || !single_app(b) || !a[0].head_is_var) return std::nullopt;
    Functor f = a[0].functor(), g = b[0].functor();
    if (f == g || (a[0].args.empty() && b[0].args.empty())) return std::nullopt;
    Substitution th;
    th.functors.emplace(f.name, g);
    return one(rebuild(d, j, {make_feq(f, g), make_eq(substitute(a, th), substitute(b, th), cx.sig)}, &th,
                       cx.sig));
  });
}

inline Result e7(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_eq() || !single_app(l.lhs) || !single_app(l.rhs)) return std::nullopt;
  const Term& s = l.lhs[0];
  const Term& t = l.rhs[0];
  if (!s.head_is_var || !t.head_is_var || s.name != t.name || s.args == t.args)
    return std::nullopt;
  Disjuncts out;
  for (const auto& f : cx.sig.symbols()) {
    Substitution th;
    th.functors.emplace(s.name, Functor::sym(f));
    out.push_back(rebuild(
        d, j,
        {make_feq(s.functor(), Functor::sym(f)), make_eq(substitute(l.lhs, th), substitute(l.rhs, th), cx.sig)},
        &th, cx.sig));
  }
  if (out.empty()) return fail();
  return out;
}

// --- Memb ---

inline Result m1(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !l.re.is_eps() || l.lhs.empty()) return std::nullopt;
  for (const auto& t : l.lhs)
    if (!t.is_hvar()) return std::nullopt;
  Substitution th;
  std::vector<Literal> repl;
  for (const auto& t : l.lhs) {
    th.hedges.emplace(t.name, Hedge{});
    repl.push_back(make_eq({t}, {}, cx.sig));
  }
  return one(rebuild(d, j, std::move(repl), &th, cx.sig));
}

inline Result m2(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || l.lhs.size() < 2 || !l.lhs[0].is_term() || l.re.is_eps())
    return std::nullopt;
  Disjuncts out;
  Hedge rest = tail(l.lhs);
  for (const auto& [head, tl] : lf(l.re).pairs)
    out.push_back(rebuild(d, j, {make_member({l.lhs[0]}, head), make_member(rest, tl)}, nullptr,
                          cx.sig));
  if (out.empty()) return fail();
  return out;
}

inline Result m3(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || l.lhs.size() < 2 || !l.lhs[0].is_hvar() ||
      l.re.kind != Regex::Kind::Sym)
    return std::nullopt;
  Hedge rest = tail(l.lhs);
  return Disjuncts{
      rebuild(d, j, {make_member({l.lhs[0]}, l.re), make_eq(rest, {}, cx.sig)}, nullptr, cx.sig),
      rebuild(d, j, {make_eq({l.lhs[0]}, {}, cx.sig), make_member(rest, l.re)}, nullptr, cx.sig)};
}

inline bool single_term_member(const Literal& l) {
  return l.is_member() && l.lhs.size() == 1 && l.lhs[0].is_term();
}

inline Result m4(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!single_term_member(l) || l.re.kind != Regex::Kind::Star) return std::nullopt;
  return one(rebuild(d, j, {make_member(l.lhs, l.re.body())}, nullptr, cx.sig));
}

inline Result m5(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!single_term_member(l) || l.re.kind != Regex::Kind::Concat) return std::nullopt;
  return Disjuncts{rebuild(d, j, {make_member(l.lhs, l.re.left()), make_member({}, l.re.right())},
                           nullptr, cx.sig),
                   rebuild(d, j, {make_member({}, l.re.left()), make_member(l.lhs, l.re.right())},
                           nullptr, cx.sig)};
}

inline Result m6(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!single_term_member(l) || l.re.kind != Regex::Kind::Choice) return std::nullopt;
  return Disjuncts{rebuild(d, j, {make_member(l.lhs, l.re.left())}, nullptr, cx.sig),
                   rebuild(d, j, {make_member(l.lhs, l.re.right())}, nullptr, cx.sig)};
}

inline Result m7(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || l.lhs.empty() || !l.lhs[0].is_hvar() ||
      l.re.kind != Regex::Kind::Choice)
    return std::nullopt;
  return Disjuncts{rebuild(d, j, {make_member(l.lhs, l.re.left())}, nullptr, cx.sig),
                   rebuild(d, j, {make_member(l.lhs, l.re.right())}, nullptr, cx.sig)};
}

inline Result m8(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || l.lhs.size() != 1 || l.lhs[0].is_app()) return std::nullopt;
  for (std::size_t k = j + 1; k < d.lits.size(); ++k) {
    const Literal& o = d.lits[k];
    if (!o.is_member() || o.lhs.size() != 1 || !(o.lhs[0] == l.lhs[0])) continue;
    if (!intersect_supported(l.re, o.re, cx.sig)) {
      if (intersection_certainly_empty(l.re, o.re, cx.sig)) return fail();
      return std::nullopt;
    }
    MaybeRegex r = intersect(l.re, o.re, cx.sig);
    if (!r) return fail();
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < d.lits.size(); ++i) {
      if (i == k) continue;
      lits.push_back(i == j ? make_member(l.lhs, *r) : d.lits[i]);
    }
    return one(Conjunction::of(std::move(lits)));
  }
  return std::nullopt;
}

inline Result m9(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !is_single_var(l.lhs, Term::Kind::HedgeVar) ||
      l.re.kind != Regex::Kind::Sym)
    return std::nullopt;
  FreshSupply local;
  FreshSupply& supply = cx.supply ? *cx.supply : local;
  supply.reserve(free_vars(d));
  Var x = supply.fresh(VarKind::Term, l.lhs[0].name);
  Term xt = Term::of_var(x);
  Substitution th = Substitution::single(l.lhs[0].as_var(), {xt});
  return one(rebuild(d, j, {make_eq(l.lhs, {xt}, cx.sig), make_member({xt}, l.re)}, &th, cx.sig));
}

inline Result m10(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !single_app(l.lhs) || !l.lhs[0].head_is_var ||
      l.re.kind != Regex::Kind::Sym)
    return std::nullopt;
  Functor f = Functor::sym(l.re.sym);
  Substitution th;
  th.functors.emplace(l.lhs[0].name, f);
  return one(rebuild(d, j, {make_feq(l.lhs[0].functor(), f), make_member(substitute(l.lhs, th), l.re)},
                     &th, cx.sig));
}

inline Result m11(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !single_sym_app(l.lhs) || l.re.kind != Regex::Kind::Sym) return std::nullopt;
  if (l.lhs[0].name != l.re.sym || cx.sig.is_unordered(l.re.sym)) return std::nullopt;
  return one(rebuild(d, j, {make_member(l.lhs[0].args, l.re.body())}, nullptr, cx.sig));
}

inline Result m12(const Conjunction& d, std::size_t j, SolverContext& cx) {
  const Literal& l = d.lits[j];
  if (!l.is_member() || !single_sym_app(l.lhs) || l.re.kind != Regex::Kind::Sym) return std::nullopt;
  if (l.lhs[0].name != l.re.sym || !cx.sig.is_unordered(l.re.sym)) return std::nullopt;
  if (!is_term_sequence(l.lhs[0].args)) return std::nullopt;
  Disjuncts out;
  for (const auto& p : perms(l.lhs[0].args))
    out.push_back(rebuild(d, j, {make_member(p, l.re.body())}, nullptr, cx.sig));
  return out;
}

using LiteralRule = Result (*)(const Conjunction&, std::size_t, SolverContext&);

inline LiteralRule literal_rule(RuleId r) {
  switch (r) {
    case RuleId::Log7: return log7;
    case RuleId::Log8: return log8;
    case RuleId::F1: return f1;
    case RuleId::F2: return f2;
    case RuleId::F3: return f3;
    case RuleId::F4: return f4;
    case RuleId::F5: return f5;
    case RuleId::F6: return f6;
    case RuleId::F7: return f7;
    case RuleId::Del1: return del1;
    case RuleId::Del2: return del2;
    case RuleId::Del3: return del3;
    case RuleId::D1: return d1;
    case RuleId::D2: return d2;
    case RuleId::E1: return e1;
    case RuleId::E2: return e2;
    case RuleId::E3: return e3;
    case RuleId::E4: return e4;
    case RuleId::E5: return e5;
    case RuleId::E6: return e6;
    case RuleId::E7: return e7;
    case RuleId::M1: return m1;
    case RuleId::M2: return m2;
    case RuleId::M3: return m3;
    case RuleId::M4: return m4;
    case RuleId::M5: return m5;
    case RuleId::M6: return m6;
    case RuleId::M7: return m7;
    case RuleId::M8: return m8;
    case RuleId::M9: return m9;
    case RuleId::M10: return m10;
    case RuleId::M11: return m11;
    case RuleId::M12: return m12;
    default: return nullptr;
  }
}

}  // namespace rules

/// Applies `rule` at its first match. Log3 and Log5 never fire: a ⊥ or ⊤
/// literal is absorbed into its conjunction when it is produced.
inline std::optional<std::pair<Constraint, TraceEvent>> try_rule(RuleId rule, const Constraint& c,
                                                                 SolverContext& cx) {
  auto done = [&](Constraint after, std::size_t i, std::size_t j) {
    TraceEvent ev{rule, i, j, {}, {}};
    return std::make_optional(std::make_pair(std::move(after), std::move(ev)));
  };
  const auto& ds = c.disjuncts;
  switch (rule) {
    case RuleId::Log1:
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& ls = ds[i].lits;
        for (std::size_t k = 1; k < ls.size(); ++k)
          for (std::size_t j = 0; j < k; ++j)
            if (ls[j] == ls[k]) {
              Constraint out = c;
              auto& ol = out.disjuncts[i].lits;
              ol.erase(ol.begin() + static_cast<std::ptrdiff_t>(k));
              return done(std::move(out), i, k);
            }
      }
      return std::nullopt;
    case RuleId::Log2:
      for (std::size_t k = 1; k < ds.size(); ++k)
        for (std::size_t i = 0; i < k; ++i)
          if (same_conjunction(ds[i], ds[k])) {
            Constraint out = c;
            out.disjuncts.erase(out.disjuncts.begin() + static_cast<std::ptrdiff_t>(k));
            return done(std::move(out), k, 0);
          }
      return std::nullopt;
    case RuleId::Log4:
      if (ds.size() < 2) return std::nullopt;
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds[i].is_false()) {
          Constraint out = c;
          out.disjuncts.erase(out.disjuncts.begin() + static_cast<std::ptrdiff_t>(i));
          return done(std::move(out), i, 0);
        }
      return std::nullopt;
    case RuleId::Log6:
      if (ds.size() < 2) return std::nullopt;
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds[i].is_true()) return done(Constraint::top(), i, 0);
      return std::nullopt;
    case RuleId::Log3:
    case RuleId::Log5: return std::nullopt;
    default: break;
  }
  auto fn = rules::literal_rule(rule);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].kind != Conjunction::Kind::Lits) continue;
    for (std::size_t j = 0; j < ds[i].lits.size(); ++j) {
      auto r = fn(ds[i], j, cx);
      if (!r) continue;
      Constraint out{{}};
      out.disjuncts.insert(out.disjuncts.end(), ds.begin(),
                           ds.begin() + static_cast<std::ptrdiff_t>(i));
      out.disjuncts.insert(out.disjuncts.end(), r->begin(), r->end());
      out.disjuncts.insert(out.disjuncts.end(), ds.begin() + static_cast<std::ptrdiff_t>(i + 1),
                           ds.end());
      if (out.disjuncts.empty()) out = Constraint::bottom();
      return done(std::move(out), i, j);
    }
  }
  return std::nullopt;
}

inline std::optional<std::pair<Constraint, TraceEvent>> step(const Constraint& c,
                                                             SolverContext& cx) {
  for (RuleId r : step_order())
    if (auto res = try_rule(r, c, cx)) return res;
  return std::nullopt;
}

struct SolveOptions {
  FreshSupply* supply = nullptr;
  std::function<void(const TraceEvent&)> observer;
  /// Recompute cm before and after every step and throw if it fails to
  /// decrease.
  bool check_measure = false;
  std::size_t max_steps = 0;  // 0 = unlimited
};

class MeasureViolation : public std::logic_error {
 public:
  explicit MeasureViolation(RuleId r)
      : std::logic_error("measure did not decrease after " + std::string(rule_name(r))), rule(r) {}
  RuleId rule;
};

inline Constraint normalize(Constraint c, const Signature& sig, const SolveOptions& opt = {}) {
  FreshSupply local;
  if (!opt.supply) local.reserve(free_vars(c));
  SolverContext cx{sig, opt.supply ? opt.supply : &local};
  std::size_t n = 0;
  for (;;) {
    if (opt.max_steps && n++ >= opt.max_steps)
      throw std::runtime_error("solver step limit exceeded");
    auto r = step(c, cx);
    if (!r) return c;
    if (opt.check_measure && !measure_less(cm(r->first), cm(c)))
      throw MeasureViolation(r->second.rule);
    if (opt.observer) {
      r->second.before = c;
      r->second.after = r->first;
      opt.observer(r->second);
    }
    c = std::move(r->first);
  }
}

inline Constraint sol(const Formula& f, const Signature& sig, const SolveOptions& opt = {}) {
  return normalize(dnf(f), sig, opt);
}

inline Constraint sol(const Constraint& c, const Signature& sig, const SolveOptions& opt = {}) {
  return normalize(dnf(Formula::of(c)), sig, opt);
}

}  // namespace clph
