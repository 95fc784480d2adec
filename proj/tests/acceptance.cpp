// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clph/modes.hpp"
#include "clph/oracle.hpp"
#include "clph/parse.hpp"
#include "clph/print.hpp"
#include "clph/solver.hpp"
#include "support/generators.hpp"

using namespace clph;
using clph::testing::Gen;
using clph::testing::GenConfig;

namespace {

using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Program load(const std::string& name) { return parse_program(slurp(std::string(CLPH_CORPUS_DIR) + "/" + name)); }

struct Result {
  bool ok = false;
  std::string detail;
};

// Equations compared without regard to orientation.
std::multiset<std::string> literal_keys(const Conjunction& d) {
  std::multiset<std::string> out;
  for (const auto& l : d.lits) {
    std::string k = to_string(l);
    if (l.is_equation()) {
      Literal flip = l;
      std::swap(flip.lhs, flip.rhs);
      std::swap(flip.flhs, flip.frhs);
      k = std::min(k, to_string(flip));
    }
    out.insert(k);
  }
  return out;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Substitution complete(Substitution s, const VarSet& vars, const Signature& sig) {
  std::string dflt = sig.symbols().front();
  for (const auto& v : vars) {
    switch (v.kind) {
      case VarKind::Term: s.terms.emplace(v.name, Term::sym(dflt)); break;
      case VarKind::Hedge: s.hedges.emplace(v.name, Hedge{}); break;
      case VarKind::Func: s.functors.emplace(v.name, Functor::sym(dflt)); break;
    }
  }
  return s;
}

Result c1_worked_solve() {
  auto t0 = Clock::now();
  Signature sig;
  Formula f = parse_constraint("f(@X, a, @Y) = f(a, b, a, c, c) & f(@Z, a, ?x) = f(@Y, @X) & @Y in c(eps)*", sig);
  SolveOptions opt;
  opt.check_measure = true;
  Constraint out = sol(f, sig, opt);
  Signature s2 = sig;
  Constraint want = dnf(parse_constraint("@X = (a, b) & @Y = (c, c) & @Z = (c, c) & ?x = b", s2));
  bool ok = out.disjuncts.size() == 1 && literal_keys(out.disjuncts[0]) == literal_keys(want.disjuncts[0]);
  double t = seconds_since(t0);
  return {ok && t < 1.0, to_string(out) + " in " + std::to_string(t) + "s"};
}

Result c2_kif_example() {
  auto t0 = Clock::now();
  Signature sig;
  Formula f = parse_constraint("f(?x, @X) = f(g(@Y), a, @Y) & @X in a* & @Y in a . (a(b*))*", sig);
  SolveOptions opt;
  opt.check_measure = true;
  Constraint out = sol(f, sig, opt);
  bool ok = out.disjuncts.size() == 1;
  std::multiset<std::string> eqs;
  const Regex* rho = nullptr;
  if (ok) {
    for (const auto& l : out.disjuncts[0].lits) {
      if (l.is_member() && l.lhs.size() == 1 && l.lhs[0].is_hvar() && l.lhs[0].name == "Y") rho = &l.re;
      else eqs.insert(literal_keys(Conjunction::of({l})).begin()->c_str());
    }
    Signature s2 = sig;
    auto want = literal_keys(dnf(parse_constraint("?x = g(@Y) & @X = (a, @Y)", s2)).disjuncts[0]);
    ok = rho && eqs == want && out.disjuncts[0].lits.size() == 3;
  }
  if (ok) ok = lang_enumerate(*rho, sig, 6) == lang_enumerate(parse_regex("a . a*"), sig, 6);
  double t = seconds_since(t0);
  return {ok && t < 1.0, to_string(out) + " in " + std::to_string(t) + "s"};
}

Result c3_rewrite() {
  auto t0 = Clock::now();
  Program p = load("rewrite.clph");
  Goal g = parse_query("rewrite(f(f(f(a, a), b)), ?x)", p.sig);
  std::multiset<std::string> got;
  bool depth = false;
  for (const auto& o : solve(p, g)) {
    if (o.kind == Outcome::Kind::DepthExceeded) {
      depth = true;
      continue;
    }
    for (const auto& b : o.answer.bindings)
      if (b.var.name == "x") got.insert(b.value ? to_string(*b.value) : std::string("?"));
  }
  std::multiset<std::string> want{"f(f(f(a, a), f))", "f(f(f(a, a), f(b)))"};
  double t = seconds_since(t0);
  std::string d;
  for (const auto& s : got) d += s + "; ";
  return {got == want && !depth && t < 5.0, d + "in " + std::to_string(t) + "s"};
}

Result c4_append_dl() {
  auto t0 = Clock::now();
  Program p = load("append_dl.clph");
  Goal g = parse_query("append_dl(dl(f1(a, b, @x), f2(@x)), dl(f2(c, d, e, @y), f3(@y)), dl(?x, f3))", p.sig);
  auto outs = solve(p, g);
  bool ok = outs.size() == 1 && outs[0].kind == Outcome::Kind::Answer;
  std::string d;
  if (ok) {
    const Conjunction& store = outs[0].answer.store;
    d = to_string(store);
    ok = classify(store, p.sig) == Classification::Solved;
    Signature s2 = p.sig;
    auto want = literal_keys(dnf(parse_constraint("?x = f1(a, b, c, d, e)", s2)).disjuncts[0]);
    auto have = literal_keys(store);
    ok = ok && have.count(*want.begin()) == 1;
  }
  double t = seconds_since(t0);
  return {ok && t < 1.0, d + " in " + std::to_string(t) + "s"};
}

// Criteria 5 and 6 share the corpus of random constraints.
std::vector<Constraint> random_corpus(const Signature*& sig_out) {
  static Gen g(20240601, GenConfig{});
  static std::vector<Constraint> cs;
  if (cs.empty())
    for (int i = 0; i < 1000; ++i) cs.push_back(g.constraint());
  sig_out = &g.sig();
  return cs;
}

struct RandomRun {
  std::size_t violations = 0, active = 0, errors = 0;
  double seconds = 0;
  std::string first_violation, first_active;
};

const RandomRun& random_run() {
  static RandomRun r;
  static bool done = false;
  if (done) return r;
  done = true;
  const Signature* sig = nullptr;
  auto cs = random_corpus(sig);
  auto t0 = Clock::now();
  for (const auto& c : cs) {
    SolveOptions opt;
    opt.check_measure = true;
    try {
      Constraint out = sol(c, *sig, opt);
      if (classify(out, *sig) == Classification::Active) {
        ++r.active;
        if (r.first_active.empty()) r.first_active = to_string(c) + "  ==>  " + to_string(out);
      }
    } catch (const MeasureViolation& e) {
      ++r.violations;
      if (r.first_violation.empty()) r.first_violation = to_string(c) + "  :  " + e.what();
    } catch (const std::exception& e) {
      ++r.errors;
      if (r.first_violation.empty()) r.first_violation = to_string(c) + "  :  " + e.what();
    }
  }
  r.seconds = seconds_since(t0);
  return r;
}

Result c5_measure() {
  const auto& r = random_run();
  return {r.violations == 0 && r.errors == 0 && r.seconds < 60.0,
          std::to_string(r.violations) + " violations, " + std::to_string(r.errors) + " errors, " +
              std::to_string(r.seconds) + "s" +
              (r.first_violation.empty() ? "" : "; first: " + r.first_violation)};
}

Result c6_no_active() {
  const auto& r = random_run();
  return {r.active == 0 && r.errors == 0,
          std::to_string(r.active) + " active outputs" +
              (r.first_active.empty() ? "" : "; first: " + r.first_active)};
}

Result c7_equivalence() {
  GenConfig cfg;
  cfg.term_vars = {"x", "y"};
  cfg.hedge_vars = {"X", "Y"};
  cfg.max_literals = 3;
  cfg.max_term_size = 5;
  cfg.max_regex_size = 4;
  Gen g(7, cfg);
  Bounds b{2, 2, 4};
  auto t0 = Clock::now();
  std::size_t bad = 0, tested = 0;
  std::string first;
  while (tested < 200) {
    Constraint c = g.constraint();
    VarSet vs = free_vars(c);
    if (vs.size() > 3) continue;
    ++tested;
    Constraint out = sol(c, g.sig());
    auto before = brute_solutions(c, g.sig(), b, vs);
    auto after = brute_solutions(out, g.sig(), b, vs);
    if (before != after) {
      ++bad;
      if (first.empty())
        first = to_string(c) + "  ==>  " + to_string(out) + " (" + std::to_string(before.size()) +
                " vs " + std::to_string(after.size()) + ")";
    }
  }
  double t = seconds_since(t0);
  return {bad == 0 && t < 120.0, std::to_string(bad) + " mismatches of " + std::to_string(tested) + ", " +
                                     std::to_string(t) + "s" + (first.empty() ? "" : "; first: " + first)};
}

struct FragmentRun {
  std::size_t unsolved = 0, unsatisfied = 0, kif_violations = 0, not_in_fragment = 0;
  std::string first, first_kif;
};

const FragmentRun& fragment_run() {
  static FragmentRun r;
  static bool done = false;
  if (done) return r;
  done = true;
  Gen wm(8, GenConfig{});
  Gen kif(11, GenConfig{});
  auto check = [&](const Constraint& c, const Signature& sig, bool track_kif) {
    SolveOptions opt;
    opt.observer = [&](const TraceEvent& e) {
      if (track_kif && !is_kif_constraint(e.after, sig)) {
        ++r.kif_violations;
        if (r.first_kif.empty()) r.first_kif = to_string(c) + " at " + std::string(rule_name(e.rule)) + " -> " + to_string(e.after);
      }
    };
    Constraint out = sol(c, sig, opt);
    for (const auto& d : out.disjuncts) {
      if (d.is_false()) continue;
      if (classify(d, sig) != Classification::Solved) {
        ++r.unsolved;
        if (r.first.empty()) r.first = to_string(c) + "  ==>  " + to_string(d);
        continue;
      }
      Substitution th = complete(solved_grounding(d, sig), free_vars(c), sig);
      if (!eval_ground(c, th, sig)) {
        ++r.unsatisfied;
        if (r.first.empty()) r.first = to_string(c) + "  ==>  " + to_string(d) + " under " + to_string(th);
      }
    }
  };
  for (int i = 0; i < 100; ++i) {
    Constraint c = clph::testing::wellmoded_constraint(wm);
    if (!check_wellmoded_constraint(c).ok) ++r.not_in_fragment;
    check(c, wm.sig(), false);
  }
  for (int i = 0; i < 100; ++i) {
    Constraint c = clph::testing::kif_constraint(kif);
    if (!is_kif_constraint(c, kif.sig())) ++r.not_in_fragment;
    check(c, kif.sig(), true);
  }
  return r;
}

Result c8_fragments() {
  const auto& r = fragment_run();
  return {r.unsolved == 0 && r.unsatisfied == 0 && r.not_in_fragment == 0,
          std::to_string(r.unsolved) + " unsolved, " + std::to_string(r.unsatisfied) + " unsatisfied, " +
              std::to_string(r.not_in_fragment) + " generator misses" + (r.first.empty() ? "" : "; first: " + r.first)};
}

Result c9_lemma6() {
  std::size_t violations = 0, states = 0;
  std::string first;
  auto run = [&](const Program& p, const std::string& q) {
    Goal g = parse_query(q, const_cast<Signature&>(p.sig));
    EngineOptions opt;
    opt.on_reduce = [&](const State* from, const State& to) {
      ++states;
      if (!from || !check_wellmoded_state(*from, p.modes).ok) return;
      if (!check_wellmoded_state(to, p.modes).ok) {
        ++violations;
        if (first.empty()) first = to_string(*from) + " -> " + to_string(to);
      }
    };
    solve(p, g, opt);
  };
  Program rw = load("rewrite.clph");
  run(rw, "rewrite(f(f(f(a, a), b)), ?x)");
  run(rw, "rewrite(g(f(a), f(b, b)), ?x)");
  Program rpo = load("rpo.clph");
  for (const char* q : {"rpo(f(a, b), g(a, b))", "rpo(g(a, b), g(b, h(a)))", "rpo(f(g(a, b), a), f(g(a, a), b))",
                        "rpo(h(a), h(b))", "rpo(g(b, a), g(a, a))"})
    run(rpo, q);
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(states) + " states" +
                               (first.empty() ? "" : "; first: " + first)};
}

Result c10_lf() {
  GenConfig cfg;
  Gen g(10, cfg);
  std::size_t bad = 0;
  std::string first;
  for (int i = 0; i < 50; ++i) {
    Regex r = g.regex(1 + g.below(8));
    auto lhs = lang_enumerate(r, g.sig(), 6);
    std::set<Hedge, HedgeLess> rhs;
    if (nullable(r)) rhs.insert(Hedge{});
    for (const auto& [head, tail] : lf(r).pairs)
      for (auto& h : lang_enumerate(Regex::concat(head, tail), g.sig(), 6)) rhs.insert(h);
    std::vector<Hedge> rv(rhs.begin(), rhs.end());
    if (lhs != rv) {
      ++bad;
      if (first.empty()) first = to_string(r);
    }
  }
  return {bad == 0, std::to_string(bad) + " of 50 regexes differ" + (first.empty() ? "" : "; first: " + first)};
}

Result c11_rpo() {
  auto t0 = Clock::now();
  Program p = load("rpo.clph");
  RpoTable tab;
  tab.prec = {{"f", 5}, {"g", 4}, {"h", 3}, {"a", 2}, {"b", 1}};
  tab.status = {{"f", Status::Lex}, {"g", Status::Mul}, {"h", Status::Lex}, {"a", Status::Lex}, {"b", Status::Lex}};
  std::vector<clph::testing::RankedSymbol> syms{{"f", 2}, {"g", 2}, {"h", 1}, {"a", 0}, {"b", 0}};
  Gen g(11, GenConfig{});
  std::size_t bad = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    Term s = clph::testing::ranked_term(g, syms, 1 + g.below(6));
    Term t = clph::testing::ranked_term(g, syms, 1 + g.below(6));
    Goal goal{BodyLiteral::of(Atom{"rpo", {s, t}})};
    EngineOptions opt;
    opt.max_answers = 1;
    bool clp = false;
    for (const auto& o : solve(p, goal, opt))
      if (o.kind == Outcome::Kind::Answer) clp = true;
    bool ref = rpo_reference(s, t, tab);
    if (clp != ref) {
      ++bad;
      if (first.empty())
        first = to_string(s) + " > " + to_string(t) + ": program " + (clp ? "yes" : "no") + ", reference " +
                (ref ? "yes" : "no");
    }
  }
  double t = seconds_since(t0);
  return {bad == 0 && t < 60.0, std::to_string(bad) + " disagreements, " + std::to_string(t) + "s" +
                                    (first.empty() ? "" : "; first: " + first)};
}

Result c12_kif_closure() {
  const auto& r = fragment_run();
  return {r.kif_violations == 0,
          std::to_string(r.kif_violations) + " non-KIF intermediate constraints" +
              (r.first_kif.empty() ? "" : "; first: " + r.first_kif)};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Result()>>> checks{
      {"worked solve example", c1_worked_solve},
      {"KIF solve example", c2_kif_example},
      {"rewriting program answers", c3_rewrite},
      {"append_dl answer", c4_append_dl},
      {"termination measure", c5_measure},
      {"no active outputs", c6_no_active},
      {"step equivalence", c7_equivalence},
      {"fragment completeness", c8_fragments},
      {"well-modedness preservation", c9_lemma6},
      {"linear form property", c10_lf},
      {"rpo agreement", c11_rpo},
      {"KIF closure", c12_kif_closure},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Result r;
    try {
      r = checks[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.ok) ++failed;
    std::cout << (r.ok ? "PASS " : "FAIL ") << (i + 1) << " " << checks[i].first << ": " << r.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
