#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clph/syntax.hpp"

namespace clph {

/// Regular hedge expression. Sym(f, body) denotes the single-tree language
/// f(⟦body⟧).
struct Regex {
  enum class Kind : std::uint8_t { Eps, Sym, Concat, Choice, Star };

  Kind kind = Kind::Eps;
  std::string sym;
  std::vector<Regex> kids;

  static Regex eps() { return {}; }
  static Regex symbol(std::string f, Regex body = eps()) {
    return {Kind::Sym, std::move(f), {std::move(body)}};
  }
  static Regex concat(Regex l, Regex r) { return {Kind::Concat, {}, {std::move(l), std::move(r)}}; }
  static Regex choice(Regex l, Regex r) { return {Kind::Choice, {}, {std::move(l), std::move(r)}}; }
  static Regex star(Regex b) { return {Kind::Star, {}, {std::move(b)}}; }

  bool is_eps() const { return kind == Kind::Eps; }
  const Regex& body() const { return kids[0]; }
  const Regex& left() const { return kids[0]; }
  const Regex& right() const { return kids[1]; }
};

inline int compare(const Regex& a, const Regex& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = a.sym.compare(b.sym)) return c < 0 ? -1 : 1;
  if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (int c = compare(a.kids[i], b.kids[i])) return c;
  return 0;
}

inline bool operator==(const Regex& a, const Regex& b) { return compare(a, b) == 0; }
inline bool operator<(const Regex& a, const Regex& b) { return compare(a, b) < 0; }

/// The language of a Regex is never empty, so the empty intersection is
/// represented by an absent value.
using MaybeRegex = std::optional<Regex>;

inline bool nullable(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Eps: return true;
    case Regex::Kind::Sym: return false;
    case Regex::Kind::Concat: return nullable(r.left()) && nullable(r.right());
    case Regex::Kind::Choice: return nullable(r.left()) || nullable(r.right());
    case Regex::Kind::Star: return true;
  }
  return false;
}

/// a abbreviates a(eps) and counts as one.
inline std::size_t size(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Eps: return 1;
    case Regex::Kind::Sym: return r.body().is_eps() ? 1 : 1 + size(r.body());
    case Regex::Kind::Concat:
    case Regex::Kind::Choice: return 1 + size(r.left()) + size(r.right());
    case Regex::Kind::Star: return 1 + size(r.body());
  }
  return 0;
}

inline void collect_symbols(const Regex& r, std::set<std::string>& out) {
  if (r.kind == Regex::Kind::Sym) out.insert(r.sym);
  for (const auto& k : r.kids) collect_symbols(k, out);
}

// ---------------------------------------------------------------------------
// Linear forms

/// Pairs (f(ρ1), ρ2); heads are always Sym nodes. Kept in first-insertion
/// order without duplicates.
struct LinearForm {
  std::vector<std::pair<Regex, Regex>> pairs;

  void add(Regex head, Regex tail) {
    for (const auto& p : pairs)
      if (p.first == head && p.second == tail) return;
    pairs.emplace_back(std::move(head), std::move(tail));
  }
  void add_all(const LinearForm& o) {
    for (const auto& p : o.pairs) add(p.first, p.second);
  }
  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  bool contains(const Regex& head, const Regex& tail) const {
    for (const auto& p : pairs)
      if (p.first == head && p.second == tail) return true;
    return false;
  }
};

inline LinearForm odot(const LinearForm& l, const Regex& r) {
  if (r.is_eps()) return l;
  LinearForm out;
  for (const auto& [head, tail] : l.pairs)
    out.add(head, tail.is_eps() ? r : Regex::concat(tail, r));
  return out;
}

inline LinearForm lf(const Regex& r) {
  LinearForm out;
  switch (r.kind) {
    case Regex::Kind::Eps: break;
    case Regex::Kind::Sym: out.add(r, Regex::eps()); break;
    case Regex::Kind::Choice:
      out = lf(r.left());
      out.add_all(lf(r.right()));
      break;
    case Regex::Kind::Concat:
      out = odot(lf(r.left()), r.right());
      if (nullable(r.left())) out.add_all(lf(r.right()));
      break;
    case Regex::Kind::Star: out = odot(lf(r.body()), r); break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground membership through linear forms

inline bool ground_member(const Hedge& h, const Regex& r, const Signature& sig,
                          std::size_t from = 0);

inline bool ground_member_tree(const Term& t, const Regex& head, const Signature& sig) {
  if (!t.is_app() || t.head_is_var || t.name != head.sym) return false;
  if (!sig.is_unordered(t.name)) return ground_member(t.args, head.body(), sig);
  for (const auto& p : perms(t.args))
    if (ground_member(p, head.body(), sig)) return true;
  return false;
}

/// Decides h[from..] ∈ ⟦r⟧ for ground h.
inline bool ground_member(const Hedge& h, const Regex& r, const Signature& sig, std::size_t from) {
  if (from == 0 && !is_ground(h)) throw std::invalid_argument("ground_member: hedge is not ground");
  if (from >= h.size()) return nullable(r);
  for (const auto& [head, tail] : lf(r).pairs)
    if (ground_member_tree(h[from], head, sig) && ground_member(h, tail, sig, from + 1))
      return true;
  return false;
}

}  // namespace clph
