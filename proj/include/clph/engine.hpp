#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clph/constraint.hpp"
#include "clph/solver.hpp"
#include "clph/syntax.hpp"

namespace clph {

struct Atom {
  std::string pred;
  std::vector<Term> args;
};

inline bool operator==(const Atom& a, const Atom& b) {
  return a.pred == b.pred && compare(a.args, b.args) == 0;
}

/// A goal or body literal: a user atom or a primitive constraint.
struct BodyLiteral {
  enum class Kind : std::uint8_t { Atom, Constraint };

  Kind kind = Kind::Constraint;
  Atom atom;
  Literal lit;

  static BodyLiteral of(Atom a) { return {Kind::Atom, std::move(a), {}}; }
  static BodyLiteral of(Literal l) { return {Kind::Constraint, {}, std::move(l)}; }

  bool is_atom() const { return kind == Kind::Atom; }
};

inline bool operator==(const BodyLiteral& a, const BodyLiteral& b) {
  if (a.kind != b.kind) return false;
  return a.is_atom() ? a.atom == b.atom : a.lit == b.lit;
}

using Goal = std::vector<BodyLiteral>;

struct Clause {
  Atom head;
  Goal body;
};

enum class Mode : std::uint8_t { In, Out };

using PredKey = std::pair<std::string, std::size_t>;
using ModeTable = std::map<PredKey, std::vector<Mode>>;

struct Program {
  Signature sig;
  std::vector<Clause> clauses;
  ModeTable modes;
};

inline void collect_vars(const Atom& a, VarSet& out) {
  for (const auto& t : a.args) collect_vars(t, out);
}

inline void collect_vars(const BodyLiteral& l, VarSet& out) {
  if (l.is_atom()) collect_vars(l.atom, out);
  else collect_vars(l.lit, out);
}

inline void collect_vars(const Goal& g, VarSet& out) {
  for (const auto& l : g) collect_vars(l, out);
}

inline void collect_vars(const Clause& c, VarSet& out) {
  collect_vars(c.head, out);
  collect_vars(c.body, out);
}

inline void collect_vars(const Program& p, VarSet& out) {
  for (const auto& c : p.clauses) collect_vars(c, out);
}

inline Atom substitute(const Atom& a, const Substitution& s) {
  Atom out{a.pred, {}};
  for (const auto& t : a.args) out.args.push_back(substitute(t, s));
  return out;
}

inline BodyLiteral substitute(const BodyLiteral& l, const Substitution& s, const Signature& sig) {
  if (l.is_atom()) return BodyLiteral::of(substitute(l.atom, s));
  return BodyLiteral::of(substitute(l.lit, s, sig));
}

/// Renames every variable of c apart using the supply.
inline Clause rename(const Clause& c, FreshSupply& supply, const Signature& sig) {
  Substitution s;
  for (const auto& v : free_vars(c)) {
    Var f = supply.fresh(v.kind, v.name);
    switch (v.kind) {
      case VarKind::Term: s.terms.emplace(v.name, Term::tvar(f.name)); break;
      case VarKind::Hedge: s.hedges.emplace(v.name, Hedge{Term::hvar(f.name)}); break;
      case VarKind::Func: s.functors.emplace(v.name, Functor::var(f.name)); break;
    }
  }
  Clause out{substitute(c.head, s), {}};
  for (const auto& l : c.body) out.body.push_back(substitute(l, s, sig));
  return out;
}

/// Clauses for the atom's predicate and arity, renamed apart, in program order.
inline std::vector<Clause> defn(const Program& p, const Atom& a, FreshSupply& supply) {
  std::vector<Clause> out;
  for (const auto& c : p.clauses)
    if (c.head.pred == a.pred && c.head.args.size() == a.args.size())
      out.push_back(rename(c, supply, p.sig));
  return out;
}

struct State {
  Goal goal;
  Constraint store;

  bool finished() const { return goal.empty() || store.is_false(); }
  bool failed() const { return store.is_false(); }
};

inline Constraint add_literal(const Constraint& c, const Literal& l) {
  Constraint out{{}};
  for (const auto& d : c.disjuncts) out.disjuncts.push_back(conjoin(d, Conjunction::of({l})));
  return out;
}

/// One reduction of the selected literal. `clause` picks among defn of an
/// atom; `candidates` must be that defn list.
inline State reduce(const State& s, const Program& p, std::size_t index,
                    const std::vector<Clause>& candidates, std::size_t clause,
                    const SolveOptions& opt = {}) {
  if (index >= s.goal.size()) throw std::out_of_range("reduce: literal index");
  const BodyLiteral& sel = s.goal[index];
  auto box_false = [] { return State{{}, Constraint::bottom()}; };
  if (!sel.is_atom()) {
    Constraint c = normalize(add_literal(s.store, sel.lit), p.sig, opt);
    if (c.is_false()) return box_false();
    Goal g = s.goal;
    g.erase(g.begin() + static_cast<std::ptrdiff_t>(index));
    return {std::move(g), std::move(c)};
  }
  if (candidates.empty()) return box_false();
  if (clause >= candidates.size()) throw std::out_of_range("reduce: clause index");
  const Clause& cl = candidates[clause];
  Goal g(s.goal.begin(), s.goal.begin() + static_cast<std::ptrdiff_t>(index));
  for (std::size_t i = 0; i < sel.atom.args.size(); ++i)
    g.push_back(BodyLiteral::of(make_term_eq(cl.head.args[i], sel.atom.args[i], p.sig)));
  g.insert(g.end(), cl.body.begin(), cl.body.end());
  g.insert(g.end(), s.goal.begin() + static_cast<std::ptrdiff_t>(index + 1), s.goal.end());
  return {std::move(g), s.store};
}

// ---------------------------------------------------------------------------
// Answers

struct Binding {
  Var var;
  std::optional<Hedge> value;  // a function variable's value is a nullary app
  std::vector<Literal> residual;
};

struct Answer {
  Conjunction store;
  std::vector<Binding> bindings;
};

/// Reads each variable's value off a solved equation of d, or lists the
/// literals mentioning it.
inline std::vector<Binding> project(const Conjunction& d, const VarSet& vars) {
  std::vector<Binding> out;
  for (const auto& v : vars) {
    Binding b{v, std::nullopt, {}};
    for (const auto& l : d.lits) {
      if (b.value) break;
      if (l.is_feq() && v.kind == VarKind::Func) {
        for (int o = 0; o < 2 && !b.value; ++o) {
          const Functor& f = o ? l.frhs : l.flhs;
          const Functor& g = o ? l.flhs : l.frhs;
          if (f.is_var && f.name == v.name && !(g == f)) b.value = Hedge{Term::app(g)};
        }
      } else if (l.is_eq()) {
        for (int o = 0; o < 2 && !b.value; ++o) {
          const Hedge& a = o ? l.rhs : l.lhs;
          const Hedge& e = o ? l.lhs : l.rhs;
          if (a.size() == 1 && !a[0].is_app() && a[0].as_var() == v && !occurs(v, e)) b.value = e;
        }
      }
    }
    if (!b.value)
      for (const auto& l : d.lits)
        if (occurs(v, l)) b.residual.push_back(l);
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<std::vector<Binding>> project(const Constraint& c, const VarSet& vars) {
  std::vector<std::vector<Binding>> out;
  for (const auto& d : c.disjuncts)
    if (!d.is_false()) out.push_back(project(d, vars));
  return out;
}

// ---------------------------------------------------------------------------
// Search

struct EngineOptions {
  std::size_t max_depth = 10000;
  std::size_t max_answers = 0;  // 0 = all
  std::function<void(const TraceEvent&)> solver_trace;
  /// Called on every state reached, with the state it was reduced from
  /// (nullptr for the initial state).
  std::function<void(const State* from, const State& to)> on_reduce;
};

struct Outcome {
  enum class Kind : std::uint8_t { Answer, DepthExceeded };
  Kind kind = Kind::Answer;
  Answer answer;
  std::size_t depth = 0;
};

/// Depth-first, leftmost-literal search. Each call to next() resumes the
/// search and returns the next answer or depth-exceeded marker.
class Search {
 public:
  Search(const Program& p, Goal goal, EngineOptions opt = {})
      : prog_(p), opt_(std::move(opt)) {
    collect_vars(goal, query_vars_);
    supply_.reserve(query_vars_);
    supply_.reserve(free_vars(p));
    sopt_.supply = &supply_;
    sopt_.observer = opt_.solver_trace;
    State init{std::move(goal), Constraint::top()};
    if (opt_.on_reduce) opt_.on_reduce(nullptr, init);
    stack_.push_back({std::move(init), 0});
  }

  const VarSet& query_vars() const { return query_vars_; }

  std::optional<Outcome> next() {
    if (!pending_.empty()) return pop_pending();
    if (opt_.max_answers && produced_ >= opt_.max_answers) return std::nullopt;
    while (!stack_.empty()) {
      auto [s, depth] = std::move(stack_.back());
      stack_.pop_back();
      if (s.failed()) continue;
      if (s.goal.empty()) {
        for (const auto& d : s.store.disjuncts)
          if (!d.is_false())
            pending_.push_back({Outcome::Kind::Answer, Answer{d, project(d, query_vars_)}, depth});
        if (!pending_.empty()) return pop_pending();
        continue;
      }
      if (depth >= opt_.max_depth) return Outcome{Outcome::Kind::DepthExceeded, {}, depth};
      const BodyLiteral& sel = s.goal.front();
      if (!sel.is_atom()) {
        push(s, reduce(s, prog_, 0, {}, 0, sopt_), depth + 1);
        continue;
      }
      auto cands = defn(prog_, sel.atom, supply_);
      if (cands.empty()) {
        push(s, State{{}, Constraint::bottom()}, depth + 1);
        continue;
      }
      std::vector<State> kids;
      for (std::size_t k = 0; k < cands.size(); ++k) kids.push_back(reduce(s, prog_, 0, cands, k));
      for (std::size_t k = kids.size(); k-- > 0;) push(s, std::move(kids[k]), depth + 1);
    }
    return std::nullopt;
  }

  std::vector<Outcome> all() {
    std::vector<Outcome> out;
    while (auto o = next()) out.push_back(std::move(*o));
    return out;
  }

 private:
  struct Frame {
    State state;
    std::size_t depth;
  };

  void push(const State& from, State to, std::size_t depth) {
    if (opt_.on_reduce) opt_.on_reduce(&from, to);
    stack_.push_back({std::move(to), depth});
  }

  std::optional<Outcome> pop_pending() {
    if (opt_.max_answers && produced_ >= opt_.max_answers) {
      pending_.clear();
      return std::nullopt;
    }
    Outcome o = std::move(pending_.front());
    pending_.erase(pending_.begin());
    ++produced_;
    return o;
  }

  const Program& prog_;
  EngineOptions opt_;
  SolveOptions sopt_;
  FreshSupply supply_;
  VarSet query_vars_;
  std::vector<Frame> stack_;
  std::vector<Outcome> pending_;
  std::size_t produced_ = 0;
};

inline std::vector<Outcome> solve(const Program& p, const Goal& goal, EngineOptions opt = {}) {
  return Search(p, goal, std::move(opt)).all();
}

}  // namespace clph
