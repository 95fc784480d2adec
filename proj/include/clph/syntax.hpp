#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clph {

enum class VarKind : std::uint8_t { Term, Hedge, Func };

struct Var {
  VarKind kind = VarKind::Term;
  std::string name;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

using VarSet = std::set<Var>;

/// A function symbol or a function variable.
struct Functor {
  bool is_var = false;
  std::string name;

  static Functor sym(std::string n) { return {false, std::move(n)}; }
  static Functor var(std::string n) { return {true, std::move(n)}; }

  friend bool operator==(const Functor&, const Functor&) = default;
  friend auto operator<=>(const Functor&, const Functor&) = default;
};

/// One element of a hedge: a term variable, a hedge variable, or an
/// application. Hedge variables are only meaningful inside a hedge.
struct Term {
  enum class Kind : std::uint8_t { TermVar, HedgeVar, App };

  Kind kind = Kind::App;
  std::string name;          // variable name, or functor name for App
  bool head_is_var = false;  // App whose functor is a function variable
  std::vector<Term> args;

  static Term tvar(std::string n) { return {Kind::TermVar, std::move(n), false, {}}; }
  static Term hvar(std::string n) { return {Kind::HedgeVar, std::move(n), false, {}}; }
  static Term app(const Functor& f, std::vector<Term> a = {}) {
    return {Kind::App, f.name, f.is_var, std::move(a)};
  }
  static Term sym(std::string f, std::vector<Term> a = {}) {
    return {Kind::App, std::move(f), false, std::move(a)};
  }
  static Term of_var(const Var& v) {
    switch (v.kind) {
      case VarKind::Term: return tvar(v.name);
      case VarKind::Hedge: return hvar(v.name);
      case VarKind::Func: return app(Functor::var(v.name));
    }
    return tvar(v.name);
  }

  bool is_tvar() const { return kind == Kind::TermVar; }
  bool is_hvar() const { return kind == Kind::HedgeVar; }
  bool is_app() const { return kind == Kind::App; }
  bool is_term() const { return kind != Kind::HedgeVar; }
  Functor functor() const { return {head_is_var, name}; }
  Var as_var() const {
    return {kind == Kind::TermVar ? VarKind::Term : VarKind::Hedge, name};
  }
};

using Hedge = std::vector<Term>;

inline int compare(const Term& a, const Term& b);

inline int compare(const Hedge& a, const Hedge& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(a[i], b[i])) return c;
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

inline int compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.head_is_var != b.head_is_var) return a.head_is_var ? 1 : -1;
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  return compare(a.args, b.args);
}

inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

struct HedgeLess {
  bool operator()(const Hedge& a, const Hedge& b) const { return compare(a, b) < 0; }
};

inline bool is_term_sequence(const Hedge& h) {
  return std::all_of(h.begin(), h.end(), [](const Term& t) { return t.is_term(); });
}

// ---------------------------------------------------------------------------
// Signature

struct Signature {
  std::set<std::string> ordered;
  std::set<std::string> unordered;
  std::set<std::pair<std::string, std::size_t>> predicates;

  bool is_unordered(const std::string& f) const { return unordered.count(f) != 0; }
  bool has_symbol(const std::string& f) const {
    return ordered.count(f) != 0 || unordered.count(f) != 0;
  }

  /// Adds f with the given ordering. Returns false on a conflicting
  /// earlier declaration.
  bool declare(const std::string& f, bool is_unord) {
    auto& mine = is_unord ? unordered : ordered;
    auto& other = is_unord ? ordered : unordered;
    if (other.count(f)) return false;
    mine.insert(f);
    return true;
  }

  /// Uses f, making it ordered unless it is already known.
  void use(const std::string& f) {
    if (!has_symbol(f)) ordered.insert(f);
  }

  std::vector<std::string> symbols() const {
    std::vector<std::string> out(ordered.begin(), ordered.end());
    out.insert(out.end(), unordered.begin(), unordered.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

// ---------------------------------------------------------------------------
// Free variables

inline void collect_vars(const Term& t, VarSet& out) {
  switch (t.kind) {
    case Term::Kind::TermVar: out.insert({VarKind::Term, t.name}); return;
    case Term::Kind::HedgeVar: out.insert({VarKind::Hedge, t.name}); return;
    case Term::Kind::App:
      if (t.head_is_var) out.insert({VarKind::Func, t.name});
      for (const auto& a : t.args) collect_vars(a, out);
      return;
  }
}

inline void collect_vars(const Hedge& h, VarSet& out) {
  for (const auto& t : h) collect_vars(t, out);
}

inline void collect_vars(const Functor& f, VarSet& out) {
  if (f.is_var) out.insert({VarKind::Func, f.name});
}

template <class T>
VarSet free_vars(const T& x) {
  VarSet out;
  collect_vars(x, out);
  return out;
}

inline bool occurs(const Var& v, const Term& t) {
  switch (t.kind) {
    case Term::Kind::TermVar: return v.kind == VarKind::Term && v.name == t.name;
    case Term::Kind::HedgeVar: return v.kind == VarKind::Hedge && v.name == t.name;
    case Term::Kind::App:
      if (t.head_is_var && v.kind == VarKind::Func && v.name == t.name) return true;
      for (const auto& a : t.args)
        if (occurs(v, a)) return true;
      return false;
  }
  return false;
}

inline bool occurs(const Var& v, const Hedge& h) {
  for (const auto& t : h)
    if (occurs(v, t)) return true;
  return false;
}

inline bool is_ground(const Term& t) { return free_vars(t).empty(); }
inline bool is_ground(const Hedge& h) { return free_vars(h).empty(); }

// ---------------------------------------------------------------------------
// Substitutions

struct Substitution {
  std::map<std::string, Term> terms;
  std::map<std::string, Hedge> hedges;
  std::map<std::string, Functor> functors;

  bool empty() const { return terms.empty() && hedges.empty() && functors.empty(); }

  static Substitution single(const Var& v, const Hedge& image) {
    Substitution s;
    if (v.kind == VarKind::Term) {
      if (image.size() != 1) throw std::invalid_argument("term variable needs a single term");
      s.terms.emplace(v.name, image.front());
    } else if (v.kind == VarKind::Hedge) {
      s.hedges.emplace(v.name, image);
    } else {
      if (image.size() != 1 || !image.front().is_app() || !image.front().args.empty())
        throw std::invalid_argument("function variable needs a functor");
      s.functors.emplace(v.name, image.front().functor());
    }
    return s;
  }
};

inline Functor substitute(const Functor& f, const Substitution& s) {
  if (!f.is_var) return f;
  auto it = s.functors.find(f.name);
  return it == s.functors.end() ? f : it->second;
}

inline void apply_into(const Term& t, const Substitution& s, Hedge& out);

inline Hedge substitute(const Hedge& h, const Substitution& s) {
  Hedge out;
  out.reserve(h.size());
  for (const auto& t : h) apply_into(t, s, out);
  return out;
}

inline void apply_into(const Term& t, const Substitution& s, Hedge& out) {
  switch (t.kind) {
    case Term::Kind::TermVar: {
      auto it = s.terms.find(t.name);
      out.push_back(it == s.terms.end() ? t : it->second);
      return;
    }
    case Term::Kind::HedgeVar: {
      auto it = s.hedges.find(t.name);
      if (it == s.hedges.end()) out.push_back(t);
      else out.insert(out.end(), it->second.begin(), it->second.end());
      return;
    }
    case Term::Kind::App:
      out.push_back(Term::app(substitute(t.functor(), s), substitute(t.args, s)));
      return;
  }
}

/// Applies s to a term. A hedge-variable element is rejected because its
/// image need not be a single term.
inline Term substitute(const Term& t, const Substitution& s) {
  if (t.is_hvar()) throw std::invalid_argument("apply: hedge variable is not a term");
  Hedge out;
  apply_into(t, s, out);
  return out.front();
}

/// e (a ∘ b) = (e a) b
inline Substitution compose(const Substitution& a, const Substitution& b) {
  Substitution r;
  for (const auto& [k, v] : a.terms) r.terms.emplace(k, substitute(v, b));
  for (const auto& [k, v] : a.hedges) r.hedges.emplace(k, substitute(v, b));
  for (const auto& [k, v] : a.functors) r.functors.emplace(k, substitute(v, b));
  for (const auto& [k, v] : b.terms) r.terms.emplace(k, v);
  for (const auto& [k, v] : b.hedges) r.hedges.emplace(k, v);
  for (const auto& [k, v] : b.functors) r.functors.emplace(k, v);
  // drop identity bindings
  std::erase_if(r.terms, [](const auto& kv) {
    return kv.second.is_tvar() && kv.second.name == kv.first;
  });
  std::erase_if(r.hedges, [](const auto& kv) {
    return kv.second.size() == 1 && kv.second[0].is_hvar() && kv.second[0].name == kv.first;
  });
  std::erase_if(r.functors,
                [](const auto& kv) { return kv.second.is_var && kv.second.name == kv.first; });
  return r;
}

// ---------------------------------------------------------------------------
// Size and permutations

inline std::size_t size(const Hedge& h);

inline std::size_t size(const Term& t) {
  return t.is_app() ? 1 + size(t.args) : 1;
}

inline std::size_t size(const Hedge& h) {
  std::size_t n = 0;
  for (const auto& t : h) n += size(t);
  return n;
}

inline std::size_t depth(const Term& t) {
  std::size_t d = 0;
  if (t.is_app())
    for (const auto& a : t.args) d = std::max(d, depth(a));
  return d + 1;
}

/// Distinct permutations of a term sequence, identity first, then in
/// lexicographic order of index permutations.
inline std::vector<Hedge> perms(const Hedge& ts) {
  if (!is_term_sequence(ts)) throw std::invalid_argument("perms: hedge variable in argument");
  std::vector<std::size_t> idx(ts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Hedge> out;
  std::set<Hedge, HedgeLess> seen;
  do {
    Hedge h;
    h.reserve(ts.size());
    for (auto i : idx) h.push_back(ts[i]);
    if (seen.insert(h).second) out.push_back(std::move(h));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Fresh variables

class FreshSupply {
 public:
  void reserve(const Var& v) { reserved_.insert(v); }
  void reserve(const VarSet& vs) { reserved_.insert(vs.begin(), vs.end()); }
  void reset() {
    counter_ = 0;
    reserved_.clear();
  }

  Var fresh(VarKind kind, std::string hint) {
    if (auto p = hint.find('#'); p != std::string::npos) hint.resize(p);
    if (hint.empty()) hint = "v";
    for (;;) {
      Var v{kind, hint + "#" + std::to_string(++counter_)};
      if (reserved_.insert(v).second) return v;
    }
  }

 private:
  std::size_t counter_ = 0;
  VarSet reserved_;
};

}  // namespace clph
