#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clph/constraint.hpp"
#include "clph/engine.hpp"
#include "clph/syntax.hpp"

namespace clph {

struct ModeReport {
  bool ok = true;
  std::vector<std::size_t> witness;  // literal indices in a well-moded order
  std::optional<std::size_t> violation;
  std::string message;
  std::vector<std::string> warnings;  // predicates analysed with the all-input default
};

namespace detail {

inline const std::vector<Mode>* mode_of(const Atom& a, const ModeTable& m,
                                        std::vector<std::string>* warnings) {
  auto it = m.find({a.pred, a.args.size()});
  if (it != m.end()) return &it->second;
  if (warnings) {
    std::string w = "no mode for " + a.pred + "/" + std::to_string(a.args.size()) +
                    "; assuming all positions input";
    if (std::find(warnings->begin(), warnings->end(), w) == warnings->end())
      warnings->push_back(std::move(w));
  }
  return nullptr;
}

inline void add_all(VarSet& into, const VarSet& from) { into.insert(from.begin(), from.end()); }

inline bool subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// Variables in input positions. ≐ and in have only output positions.
inline VarSet invars(const BodyLiteral& l, const ModeTable& m,
                     std::vector<std::string>* warnings = nullptr) {
  VarSet out;
  if (!l.is_atom()) return out;
  const auto* ms = detail::mode_of(l.atom, m, warnings);
  for (std::size_t i = 0; i < l.atom.args.size(); ++i)
    if (!ms || (*ms)[i] == Mode::In) collect_vars(l.atom.args[i], out);
  return out;
}

inline VarSet outvars(const BodyLiteral& l, const ModeTable& m,
                      std::vector<std::string>* warnings = nullptr) {
  VarSet out;
  if (!l.is_atom()) {
    collect_vars(l.lit, out);
    return out;
  }
  const auto* ms = detail::mode_of(l.atom, m, warnings);
  if (!ms) return out;
  for (std::size_t i = 0; i < l.atom.args.size(); ++i)
    if ((*ms)[i] == Mode::Out) collect_vars(l.atom.args[i], out);
  return out;
}

namespace detail {

/// Sequence conditions for one literal given the variables produced so far.
inline bool enabled(const BodyLiteral& l, const VarSet& known, const ModeTable& m,
                    std::vector<std::string>* warnings) {
  if (!subset(invars(l, m, warnings), known)) return false;
  if (l.is_atom()) return true;
  if (l.lit.is_member()) return subset(free_vars(l.lit), known);
  VarSet a, b;
  if (l.lit.is_feq()) {
    collect_vars(l.lit.flhs, a);
    collect_vars(l.lit.frhs, b);
  } else {
    collect_vars(l.lit.lhs, a);
    collect_vars(l.lit.rhs, b);
  }
  return subset(a, known) || subset(b, known);
}

}  // namespace detail

/// Looks for a well-moded ordering by greedy saturation. Enabling is
/// monotone in the produced variables, so greedy placement finds an
/// ordering whenever one exists.
inline ModeReport check_wellmoded_conjunction(const Goal& g, const ModeTable& m) {
  ModeReport r;
  VarSet known;
  std::vector<bool> placed(g.size(), false);
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (placed[i] || !detail::enabled(g[i], known, m, &r.warnings)) continue;
      placed[i] = true;
      r.witness.push_back(i);
      detail::add_all(known, outvars(g[i], m));
      progress = true;
      break;
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!placed[i]) {
      r.ok = false;
      r.violation = i;
      r.message = "literal " + std::to_string(i + 1) + " can never be placed";
      r.witness.clear();
      break;
    }
  return r;
}

inline ModeReport check_wellmoded_clause(const Clause& c, const ModeTable& m) {
  ModeReport r;
  BodyLiteral head = BodyLiteral::of(c.head);
  VarSet known = invars(head, m, &r.warnings);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (!detail::enabled(c.body[i], known, m, &r.warnings)) {
      r.ok = false;
      r.violation = i;
      r.message = "body literal " + std::to_string(i + 1) + " uses variables not yet produced";
      return r;
    }
    detail::add_all(known, outvars(c.body[i], m));
    r.witness.push_back(i);
  }
  if (!detail::subset(outvars(head, m), known)) {
    r.ok = false;
    r.message = "head output variables are not produced by the body";
    r.witness.clear();
  }
  return r;
}

inline ModeReport check_wellmoded_program(const Program& p) {
  ModeReport r;
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    ModeReport c = check_wellmoded_clause(p.clauses[i], p.modes);
    for (auto& w : c.warnings)
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end())
        r.warnings.push_back(std::move(w));
    if (!c.ok && r.ok) {
      r.ok = false;
      r.violation = i;
      r.message = "clause " + std::to_string(i + 1) + ": " + c.message;
    }
  }
  return r;
}

inline ModeReport check_wellmoded_goal(const Goal& g, const ModeTable& m) {
  return check_wellmoded_conjunction(g, m);
}

/// Each disjunct of the store is checked together with the whole goal.
inline ModeReport check_wellmoded_state(const State& s, const ModeTable& m) {
  ModeReport r;
  for (std::size_t j = 0; j < s.store.disjuncts.size(); ++j) {
    Goal g = s.goal;
    for (const auto& l : s.store.disjuncts[j].lits) g.push_back(BodyLiteral::of(l));
    ModeReport d = check_wellmoded_conjunction(g, m);
    r.warnings = d.warnings;
    if (!d.ok) {
      r.ok = false;
      r.violation = j;
      r.message = "disjunct " + std::to_string(j + 1) + ": " + d.message;
      return r;
    }
  }
  return r;
}

inline ModeReport check_wellmoded_constraint(const Constraint& c) {
  return check_wellmoded_state(State{{}, c}, {});
}

// ---------------------------------------------------------------------------
// KIF form

inline bool is_kif_hedge(const Hedge& h, const Signature& sig);

/// Hedge variables only as the last argument of ordered symbols (and of
/// function variables when there are no unordered symbols).
inline bool is_kif_term(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case Term::Kind::TermVar: return true;
    case Term::Kind::HedgeVar: return false;
    case Term::Kind::App: break;
  }
  bool hedge_args = t.head_is_var ? sig.unordered.empty() : !sig.is_unordered(t.name);
  if (hedge_args) return is_kif_hedge(t.args, sig);
  for (const auto& a : t.args)
    if (!is_kif_term(a, sig)) return false;
  return true;
}

inline bool is_kif_hedge(const Hedge& h, const Signature& sig) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].is_hvar() && i + 1 == h.size()) continue;
    if (!is_kif_term(h[i], sig)) return false;
  }
  return true;
}

inline bool is_kif_literal(const Literal& l, const Signature& sig) {
  switch (l.kind) {
    case Literal::Kind::FunctorEq: return true;
    case Literal::Kind::Member: return is_kif_hedge(l.lhs, sig);
    case Literal::Kind::Eq: return is_kif_hedge(l.lhs, sig) && is_kif_hedge(l.rhs, sig);
  }
  return false;
}

inline bool is_kif_conjunction(const Conjunction& d, const Signature& sig) {
  for (const auto& l : d.lits)
    if (!is_kif_literal(l, sig)) return false;
  return true;
}

inline bool is_kif_constraint(const Constraint& c, const Signature& sig) {
  for (const auto& d : c.disjuncts)
    if (!is_kif_conjunction(d, sig)) return false;
  return true;
}

inline bool is_kif_atom(const Atom& a, const Signature& sig) {
  for (const auto& t : a.args)
    if (!is_kif_term(t, sig)) return false;
  return true;
}

inline bool is_kif_goal(const Goal& g, const Signature& sig) {
  for (const auto& l : g)
    if (l.is_atom() ? !is_kif_atom(l.atom, sig) : !is_kif_literal(l.lit, sig)) return false;
  return true;
}

inline bool is_kif_clause(const Clause& c, const Signature& sig) {
  return is_kif_atom(c.head, sig) && is_kif_goal(c.body, sig);
}

inline bool is_kif_program(const Program& p) {
  for (const auto& c : p.clauses)
    if (!is_kif_clause(c, p.sig)) return false;
  return true;
}

inline bool is_kif_state(const State& s, const Signature& sig) {
  return is_kif_goal(s.goal, sig) && is_kif_constraint(s.store, sig);
}

}  // namespace clph
