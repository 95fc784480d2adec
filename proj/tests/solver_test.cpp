#include <gtest/gtest.h>

#include <set>

#include "clph/oracle.hpp"
#include "clph/parse.hpp"
#include "clph/print.hpp"
#include "clph/solver.hpp"
#include "support/generators.hpp"

using namespace clph;

namespace {

Constraint C(const char* text, Signature& sig) { return dnf(parse_constraint(text, sig)); }

// Disjuncts as sets of printed literals, equations read in either direction.
std::set<std::multiset<std::string>> shape(const Constraint& c) {
  std::set<std::multiset<std::string>> out;
  for (const auto& d : c.disjuncts) {
    std::multiset<std::string> ls;
    for (const auto& l : d.lits) {
      std::string k = to_string(l);
      if (l.is_equation()) {
        Literal f = l;
        std::swap(f.lhs, f.rhs);
        std::swap(f.flhs, f.frhs);
        k = std::min(k, to_string(f));
      }
      ls.insert(k);
    }
    out.insert(ls);
  }
  return out;
}

std::optional<Constraint> apply_rule(RuleId r, const Constraint& c, const Signature& sig) {
  FreshSupply fs;
  fs.reserve(free_vars(c));
  SolverContext cx{sig, &fs};
  auto res = try_rule(r, c, cx);
  if (!res) return std::nullopt;
  EXPECT_EQ(res->second.rule, r);
  return res->first;
}

SolveOptions checked() {
  SolveOptions o;
  o.check_measure = true;
  return o;
}

}  // namespace

TEST(Rules, NamesRoundTrip) {
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    auto r = static_cast<RuleId>(i);
    EXPECT_EQ(rule_from_name(rule_name(r)), r);
  }
}

TEST(Rules, F3HeadClash) {
  Signature sig;
  auto r = apply_rule(RuleId::F3, C("f(a) = g(a)", sig), sig);
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->is_false());
}

TEST(Rules, D1UnorderedDecomposition) {
  Signature sig;
  sig.declare("h", true);
  auto r = apply_rule(RuleId::D1, C("h(a, b) = h(?x, ?y)", sig), sig);
  ASSERT_TRUE(r);
  Constraint want = C("(a, b) = (?x, ?y) \\/ (a, b) = (?y, ?x)", sig);
  EXPECT_EQ(shape(*r), shape(want)) << to_string(*r);
}

TEST(Rules, E3SplitsHedge) {
  Signature sig;
  Constraint in = C("(@X, @Y) = (a, b)", sig);
  auto r = apply_rule(RuleId::E3, in, sig);
  ASSERT_TRUE(r);
  // every disjunct is a solution of the input and together they cover it
  auto sols = brute_solutions(*r, sig, Bounds{1, 2, 2});
  EXPECT_EQ(sols, brute_solutions(in, sig, Bounds{1, 2, 2}));
  EXPECT_EQ(sols.size(), 3u);
}

TEST(Rules, M1EmptyLanguage) {
  Signature sig;
  auto r = apply_rule(RuleId::M1, C("(@X1, @X2) in eps", sig), sig);
  ASSERT_TRUE(r);
  EXPECT_EQ(shape(*r), shape(C("@X1 = () & @X2 = ()", sig))) << to_string(*r);
}

TEST(Step, NormalFormHasNoStep) {
  Signature sig;
  FreshSupply fs;
  SolverContext cx{sig, &fs};
  EXPECT_FALSE(step(C("(@X, a) = (@Y, b)", sig), cx));
  EXPECT_FALSE(step(C("?x = f(a) & @Y in c*", sig), cx));
}

TEST(Step, TrivialEquation) {
  Signature sig;
  FreshSupply fs;
  SolverContext cx{sig, &fs};
  Constraint c = C("f(a) = f(a)", sig);
  for (int i = 0; i < 10 && !c.is_true(); ++i) {
    auto r = step(c, cx);
    ASSERT_TRUE(r);
    c = r->first;
  }
  EXPECT_TRUE(c.is_true());
}

TEST(Sol, FirstWorkedExample) {
  Signature sig;
  Constraint out =
      sol(parse_constraint("f(@X, a, @Y) = f(a, b, a, c, c) & f(@Z, a, ?x) = f(@Y, @X) & @Y in c(eps)*", sig),
          sig, checked());
  EXPECT_EQ(shape(out), shape(C("@X = (a, b) & @Y = (c, c) & @Z = (c, c) & ?x = b", sig))) << to_string(out);
}

TEST(Sol, SecondWorkedExample) {
  Signature sig;
  Constraint out = sol(parse_constraint("f(?x, @X) = f(g(@Y), a, @Y) & @X in a(eps)* & @Y in a(eps) . a(b(eps)*)*", sig),
                       sig, checked());
  ASSERT_EQ(out.disjuncts.size(), 1u) << to_string(out);
  EXPECT_EQ(classify(out, sig), Classification::Solved);
  const Regex* rho = nullptr;
  for (const auto& l : out.disjuncts[0].lits)
    if (l.is_member()) rho = &l.re;
  ASSERT_TRUE(rho);
  EXPECT_EQ(lang_enumerate(*rho, sig, 6), lang_enumerate(parse_regex("a . a*"), sig, 6));
}

TEST(Sol, Bottom) {
  Signature sig;
  EXPECT_TRUE(sol(Formula::bottom(), sig).is_false());
}

TEST(Sol, OccursCheckFails) {
  Signature sig;
  EXPECT_TRUE(sol(parse_constraint("@X = (a, @X)", sig), sig, checked()).is_false());
}

TEST(Sol, TraceReportsEveryStep) {
  Signature sig;
  std::size_t n = 0;
  SolveOptions o;
  o.observer = [&](const TraceEvent& e) {
    ++n;
    EXPECT_FALSE(rule_name(e.rule).empty());
  };
  sol(parse_constraint("f(@X, a) = f(b, a)", sig), sig, o);
  EXPECT_GT(n, 0u);
}

TEST(Sol, MeasureDecreasesOnRandomInput) {
  clph::testing::Gen g(41, {});
  for (int i = 0; i < 200; ++i) {
    Constraint c = g.constraint();
    EXPECT_NO_THROW(sol(c, g.sig(), checked())) << to_string(c);
  }
}

TEST(Sol, PreservesSolutionsOnSmallInput) {
  clph::testing::GenConfig cfg;
  cfg.term_vars = {"x", "y"};
  cfg.hedge_vars = {"X", "Y"};
  cfg.max_literals = 3;
  cfg.max_term_size = 5;
  clph::testing::Gen g(43, cfg);
  Bounds b{2, 2, 4};
  for (int i = 0; i < 30; ++i) {
    Constraint c = g.constraint();
    VarSet vs = free_vars(c);
    Constraint out = sol(c, g.sig());
    EXPECT_EQ(brute_solutions(out, g.sig(), b, vs), brute_solutions(c, g.sig(), b, vs)) << to_string(c);
  }
}
