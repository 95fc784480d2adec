#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clph/regex.hpp"

namespace clph {

/// Hedge automaton in nested form: a horizontal NFA whose letters are pairs
/// (symbol, inner automaton for the argument hedge).
struct HedgeAutomaton {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::string symbol;
    std::size_t inner = 0;
  };

  std::size_t num_states = 0;
  std::vector<std::size_t> initial;
  std::vector<bool> accepting;
  std::vector<Edge> edges;
  std::vector<HedgeAutomaton> inners;
};

namespace detail {

struct ThompsonBuilder {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> eps;
  std::vector<HedgeAutomaton::Edge> edges;
  std::vector<HedgeAutomaton> inners;

  std::size_t add() { return n++; }
};

}  // namespace detail

inline bool is_empty(const HedgeAutomaton& a);
inline HedgeAutomaton trim(const HedgeAutomaton& a);
inline HedgeAutomaton to_automaton(const Regex& r);

namespace detail {

inline std::pair<std::size_t, std::size_t> thompson(const Regex& r, ThompsonBuilder& b) {
  std::size_t s = b.add();
  std::size_t e = b.add();
  switch (r.kind) {
    case Regex::Kind::Eps: b.eps.emplace_back(s, e); break;
    case Regex::Kind::Sym:
      b.inners.push_back(to_automaton(r.body()));
      b.edges.push_back({s, e, r.sym, b.inners.size() - 1});
      break;
    case Regex::Kind::Concat: {
      auto [s1, e1] = thompson(r.left(), b);
      auto [s2, e2] = thompson(r.right(), b);
      b.eps.emplace_back(s, s1);
      b.eps.emplace_back(e1, s2);
      b.eps.emplace_back(e2, e);
      break;
    }
    case Regex::Kind::Choice: {
      auto [s1, e1] = thompson(r.left(), b);
      auto [s2, e2] = thompson(r.right(), b);
      b.eps.emplace_back(s, s1);
      b.eps.emplace_back(s, s2);
      b.eps.emplace_back(e1, e);
      b.eps.emplace_back(e2, e);
      break;
    }
    case Regex::Kind::Star: {
      auto [s1, e1] = thompson(r.body(), b);
      b.eps.emplace_back(s, e);
      b.eps.emplace_back(s, s1);
      b.eps.emplace_back(e1, s1);
      b.eps.emplace_back(e1, e);
      break;
    }
  }
  return {s, e};
}

inline std::vector<bool> nonempty_inners(const HedgeAutomaton& a) {
  std::vector<bool> ok(a.inners.size());
  for (std::size_t i = 0; i < a.inners.size(); ++i) ok[i] = !is_empty(a.inners[i]);
  return ok;
}

inline std::vector<bool> forward_reach(const HedgeAutomaton& a, const std::vector<bool>& usable) {
  std::vector<bool> seen(a.num_states);
  std::vector<std::size_t> work(a.initial.begin(), a.initial.end());
  for (auto q : work) seen[q] = true;
  while (!work.empty()) {
    auto q = work.back();
    work.pop_back();
    for (const auto& e : a.edges)
      if (e.from == q && usable[e.inner] && !seen[e.to]) {
        seen[e.to] = true;
        work.push_back(e.to);
      }
  }
  return seen;
}

}  // namespace detail

inline HedgeAutomaton to_automaton(const Regex& r) {
  detail::ThompsonBuilder b;
  auto [start, end] = detail::thompson(r, b);

  std::vector<std::vector<std::size_t>> eps_out(b.n);
  for (auto [p, q] : b.eps) eps_out[p].push_back(q);
  auto closure = [&](std::size_t p) {
    std::vector<bool> seen(b.n);
    std::vector<std::size_t> work{p}, out;
    seen[p] = true;
    while (!work.empty()) {
      auto q = work.back();
      work.pop_back();
      out.push_back(q);
      for (auto x : eps_out[q])
        if (!seen[x]) {
          seen[x] = true;
          work.push_back(x);
        }
    }
    return out;
  };

  HedgeAutomaton a;
  a.num_states = b.n;
  a.initial = {start};
  a.accepting.assign(b.n, false);
  a.inners = std::move(b.inners);
  for (std::size_t p = 0; p < b.n; ++p)
    for (auto q : closure(p)) {
      if (q == end) a.accepting[p] = true;
      for (const auto& e : b.edges)
        if (e.from == q) a.edges.push_back({p, e.to, e.symbol, e.inner});
    }
  return trim(a);
}

inline bool is_empty(const HedgeAutomaton& a) {
  auto usable = detail::nonempty_inners(a);
  auto seen = detail::forward_reach(a, usable);
  for (std::size_t q = 0; q < a.num_states; ++q)
    if (seen[q] && a.accepting[q]) return false;
  return true;
}

/// Keeps only states on some accepting path and edges whose inner language
/// is non-empty.
inline HedgeAutomaton trim(const HedgeAutomaton& a) {
  auto usable = detail::nonempty_inners(a);
  auto fwd = detail::forward_reach(a, usable);
  std::vector<bool> bwd(a.num_states);
  std::vector<std::size_t> work;
  for (std::size_t q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) {
      bwd[q] = true;
      work.push_back(q);
    }
  while (!work.empty()) {
    auto q = work.back();
    work.pop_back();
    for (const auto& e : a.edges)
      if (e.to == q && usable[e.inner] && !bwd[e.from]) {
        bwd[e.from] = true;
        work.push_back(e.from);
      }
  }
  std::vector<std::size_t> id(a.num_states, std::numeric_limits<std::size_t>::max());
  HedgeAutomaton out;
  for (std::size_t q = 0; q < a.num_states; ++q)
    if (fwd[q] && bwd[q]) {
      id[q] = out.num_states++;
      out.accepting.push_back(a.accepting[q]);
    }
  for (auto q : a.initial)
    if (fwd[q] && bwd[q]) out.initial.push_back(id[q]);
  std::map<std::size_t, std::size_t> inner_id;
  for (const auto& e : a.edges) {
    if (!usable[e.inner] || !(fwd[e.from] && bwd[e.from]) || !(fwd[e.to] && bwd[e.to])) continue;
    auto [it, fresh] = inner_id.emplace(e.inner, out.inners.size());
    if (fresh) out.inners.push_back(a.inners[e.inner]);
    HedgeAutomaton::Edge ne{id[e.from], id[e.to], e.symbol, it->second};
    bool dup = std::any_of(out.edges.begin(), out.edges.end(), [&](const auto& x) {
      return x.from == ne.from && x.to == ne.to && x.symbol == ne.symbol && x.inner == ne.inner;
    });
    if (!dup) out.edges.push_back(ne);
  }
  return out;
}

/// Accepts exactly the intersection of the two languages, comparing
/// symbols syntactically.
inline HedgeAutomaton product(const HedgeAutomaton& a, const HedgeAutomaton& b) {
  HedgeAutomaton out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::map<std::pair<std::size_t, std::size_t>, std::optional<std::size_t>> inner_cache;
  std::queue<std::pair<std::size_t, std::size_t>> work;
  auto state = [&](std::size_t p, std::size_t q) {
    auto [it, fresh] = ids.emplace(std::make_pair(p, q), out.num_states);
    if (fresh) {
      ++out.num_states;
      out.accepting.push_back(a.accepting[p] && b.accepting[q]);
      work.emplace(p, q);
    }
    return it->second;
  };
  for (auto p : a.initial)
    for (auto q : b.initial) out.initial.push_back(state(p, q));
  while (!work.empty()) {
    auto [p, q] = work.front();
    work.pop();
    std::size_t from = ids.at({p, q});
    for (const auto& ea : a.edges) {
      if (ea.from != p) continue;
      for (const auto& eb : b.edges) {
        if (eb.from != q || eb.symbol != ea.symbol) continue;
        auto key = std::make_pair(ea.inner, eb.inner);
        auto it = inner_cache.find(key);
        if (it == inner_cache.end()) {
          HedgeAutomaton inner = product(a.inners[ea.inner], b.inners[eb.inner]);
          std::optional<std::size_t> slot;
          if (!is_empty(inner)) {
            out.inners.push_back(std::move(inner));
            slot = out.inners.size() - 1;
          }
          it = inner_cache.emplace(key, slot).first;
        }
        if (!it->second) continue;
        std::size_t to = state(ea.to, eb.to);
        out.edges.push_back({from, to, ea.symbol, *it->second});
      }
    }
  }
  return trim(out);
}

namespace detail {

inline Regex mk_concat(Regex a, Regex b) {
  if (a.is_eps()) return b;
  if (b.is_eps()) return a;
  return Regex::concat(std::move(a), std::move(b));
}

inline Regex mk_choice(Regex a, Regex b) {
  if (a == b) return a;
  if (a.is_eps() && nullable(b)) return b;
  if (b.is_eps() && nullable(a)) return a;
  // eps | r.r*  ->  r*
  auto plus_of = [](const Regex& r) {
    return r.kind == Regex::Kind::Concat && r.right().kind == Regex::Kind::Star &&
           r.right().body() == r.left();
  };
  if (a.is_eps() && plus_of(b)) return b.right();
  if (b.is_eps() && plus_of(a)) return a.right();
  return Regex::choice(std::move(a), std::move(b));
}

inline Regex mk_star(Regex a) {
  if (a.is_eps() || a.kind == Regex::Kind::Star) return a;
  if (a.kind == Regex::Kind::Choice && a.left().is_eps()) return mk_star(a.right());
  if (a.kind == Regex::Kind::Choice && a.right().is_eps()) return mk_star(a.left());
  return Regex::star(std::move(a));
}

}  // namespace detail

/// State elimination, applied recursively to inner automata.
inline MaybeRegex automaton_to_regex(const HedgeAutomaton& input) {
  HedgeAutomaton a = trim(input);
  if (a.initial.empty()) return std::nullopt;
  const std::size_t n = a.num_states;
  const std::size_t S = n, F = n + 1;
  std::vector<std::vector<MaybeRegex>> R(n + 2, std::vector<MaybeRegex>(n + 2));
  auto add = [&](std::size_t i, std::size_t j, Regex r) {
    R[i][j] = R[i][j] ? detail::mk_choice(*R[i][j], std::move(r)) : std::move(r);
  };
  for (auto q : a.initial) add(S, q, Regex::eps());
  for (std::size_t q = 0; q < n; ++q)
    if (a.accepting[q]) add(q, F, Regex::eps());
  std::vector<MaybeRegex> inner_re(a.inners.size());
  for (std::size_t i = 0; i < a.inners.size(); ++i) inner_re[i] = automaton_to_regex(a.inners[i]);
  for (const auto& e : a.edges)
    if (inner_re[e.inner]) add(e.from, e.to, Regex::symbol(e.symbol, *inner_re[e.inner]));

  std::vector<bool> gone(n + 2, false);
  for (std::size_t round = 0; round < n; ++round) {
    // eliminate the state with the fewest in/out combinations
    std::size_t best = n, best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < n; ++k) {
      if (gone[k]) continue;
      std::size_t in = 0, out = 0;
      for (std::size_t i = 0; i < n + 2; ++i) {
        if (gone[i] || i == k) continue;
        in += R[i][k].has_value();
        out += R[k][i].has_value();
      }
      if (in * out < best_cost) {
        best_cost = in * out;
        best = k;
      }
    }
    std::size_t k = best;
    gone[k] = true;
    std::optional<Regex> loop;
    if (R[k][k]) loop = detail::mk_star(*R[k][k]);
    for (std::size_t i = 0; i < n + 2; ++i) {
      if (gone[i] || !R[i][k]) continue;
      for (std::size_t j = 0; j < n + 2; ++j) {
        if (gone[j] || !R[k][j]) continue;
        Regex path = loop ? detail::mk_concat(detail::mk_concat(*R[i][k], *loop), *R[k][j])
                          : detail::mk_concat(*R[i][k], *R[k][j]);
        add(i, j, std::move(path));
      }
    }
    for (std::size_t i = 0; i < n + 2; ++i) {
      R[i][k].reset();
      R[k][i].reset();
    }
  }
  return R[S][F];
}

// ---------------------------------------------------------------------------
// Unordered symbols
//
// Under unordered semantics f(ρ) denotes trees f(H) up to argument
// permutation. The product above compares hedges positionally, which is
// exact only when every unordered node's argument language is closed under
// permutation. symmetrize rewrites a regex into such a form when it can.

namespace detail {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

inline std::size_t max_word_len(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Eps: return 0;
    case Regex::Kind::Sym: return 1;
    case Regex::Kind::Concat: {
      auto a = max_word_len(r.left()), b = max_word_len(r.right());
      return (a == kUnbounded || b == kUnbounded) ? kUnbounded : a + b;
    }
    case Regex::Kind::Choice: return std::max(max_word_len(r.left()), max_word_len(r.right()));
    case Regex::Kind::Star: return max_word_len(r.body()) == 0 ? 0 : kUnbounded;
  }
  return 0;
}

inline bool perm_closed(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Eps:
    case Regex::Kind::Sym: return true;
    case Regex::Kind::Choice: return perm_closed(r.left()) && perm_closed(r.right());
    case Regex::Kind::Star: return max_word_len(r.body()) <= 1;
    case Regex::Kind::Concat:
      return (max_word_len(r.left()) == 0 && perm_closed(r.right())) ||
             (max_word_len(r.right()) == 0 && perm_closed(r.left()));
  }
  return false;
}

using Word = std::vector<Regex>;

struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Top-level words over Sym letters, or nothing when infinite or too many.
inline std::optional<std::set<Word, WordLess>> words(const Regex& r, std::size_t limit) {
  using Out = std::set<Word, WordLess>;
  switch (r.kind) {
    case Regex::Kind::Eps: return Out{Word{}};
    case Regex::Kind::Sym: return Out{Word{r}};
    case Regex::Kind::Choice: {
      auto a = words(r.left(), limit), b = words(r.right(), limit);
      if (!a || !b) return std::nullopt;
      a->insert(b->begin(), b->end());
      if (a->size() > limit) return std::nullopt;
      return a;
    }
    case Regex::Kind::Concat: {
      auto a = words(r.left(), limit), b = words(r.right(), limit);
      if (!a || !b) return std::nullopt;
      Out out;
      for (const auto& x : *a)
        for (const auto& y : *b) {
          Word w = x;
          w.insert(w.end(), y.begin(), y.end());
          out.insert(std::move(w));
          if (out.size() > limit) return std::nullopt;
        }
      return out;
    }
    case Regex::Kind::Star:
      if (max_word_len(r.body()) == 0) return Out{Word{}};
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// Rewrites r so that unordered argument languages are permutation-closed.
/// Returns nothing when that is out of reach (infinite, non-closed
/// argument languages).
inline std::optional<Regex> symmetrize(const Regex& r, const Signature& sig) {
  constexpr std::size_t kLimit = 720;
  switch (r.kind) {
    case Regex::Kind::Eps: return r;
    case Regex::Kind::Sym: {
      auto body = symmetrize(r.body(), sig);
      if (!body) return std::nullopt;
      if (!sig.is_unordered(r.sym) || detail::perm_closed(*body)) return Regex::symbol(r.sym, *body);
      auto ws = detail::words(*body, kLimit);
      if (!ws) return std::nullopt;
      std::set<detail::Word, detail::WordLess> all;
      for (auto w : *ws) {
        std::sort(w.begin(), w.end());
        do {
          all.insert(w);
          if (all.size() > kLimit) return std::nullopt;
        } while (std::next_permutation(w.begin(), w.end()));
      }
      std::optional<Regex> acc;
      for (const auto& w : all) {
        Regex seq = Regex::eps();
        for (auto it = w.rbegin(); it != w.rend(); ++it) seq = detail::mk_concat(*it, std::move(seq));
        acc = acc ? Regex::choice(std::move(*acc), std::move(seq)) : std::move(seq);
      }
      return Regex::symbol(r.sym, *acc);
    }
    default: {
      Regex out = r;
      for (auto& k : out.kids) {
        auto s = symmetrize(k, sig);
        if (!s) return std::nullopt;
        k = std::move(*s);
      }
      return out;
    }
  }
}

inline bool uses_unordered(const Regex& r, const Signature& sig) {
  std::set<std::string> syms;
  collect_symbols(r, syms);
  for (const auto& s : syms)
    if (sig.is_unordered(s)) return true;
  return false;
}

inline bool intersect_supported(const Regex& a, const Regex& b, const Signature& sig) {
  if (!uses_unordered(a, sig) && !uses_unordered(b, sig)) return true;
  return symmetrize(a, sig).has_value() && symmetrize(b, sig).has_value();
}

namespace detail {

inline void top_trees(const Regex& r, std::vector<Regex>& out) {
  if (r.kind == Regex::Kind::Sym) {
    out.push_back(r);
    return;
  }
  for (const auto& k : r.kids) top_trees(k, out);
}

}  // namespace detail

/// A superset of ⟦r⟧ whose unordered argument languages are
/// permutation-closed: each such body becomes a star over the trees it can
/// contain.
inline Regex perm_hull(const Regex& r, const Signature& sig) {
  if (r.kind != Regex::Kind::Sym) {
    Regex out = r;
    for (auto& k : out.kids) k = perm_hull(k, sig);
    return out;
  }
  Regex body = perm_hull(r.body(), sig);
  if (!sig.is_unordered(r.sym) || detail::perm_closed(body)) return Regex::symbol(r.sym, body);
  std::vector<Regex> trees;
  detail::top_trees(body, trees);
  std::optional<Regex> any;
  for (auto& t : trees) any = any ? Regex::choice(std::move(*any), std::move(t)) : std::move(t);
  return Regex::symbol(r.sym, any ? Regex::star(std::move(*any)) : Regex::eps());
}

/// True when ⟦a⟧ ∩ ⟦b⟧ is certainly empty. Exact when intersect_supported,
/// otherwise decided on the permutation hulls, which may miss emptiness.
inline bool intersection_certainly_empty(const Regex& a, const Regex& b, const Signature& sig) {
  auto ha = perm_hull(a, sig), hb = perm_hull(b, sig);
  return is_empty(product(to_automaton(ha), to_automaton(hb)));
}

/// ⟦a⟧ ∩ ⟦b⟧, or nothing when the intersection is empty.
inline MaybeRegex intersect(const Regex& a, const Regex& b, const Signature& sig) {
  if (a == b) return a;
  Regex x = a, y = b;
  if (uses_unordered(a, sig) || uses_unordered(b, sig)) {
    auto sa = symmetrize(a, sig), sb = symmetrize(b, sig);
    if (!sa || !sb) throw std::domain_error("intersect: unordered argument language not supported");
    x = std::move(*sa);
    y = std::move(*sb);
  }
  return automaton_to_regex(product(to_automaton(x), to_automaton(y)));
}

}  // namespace clph
