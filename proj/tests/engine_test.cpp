#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "clph/engine.hpp"
#include "clph/parse.hpp"
#include "clph/print.hpp"

using namespace clph;

namespace {

Program load(const std::string& name) {
  std::ifstream in(std::string(CLPH_CORPUS_DIR) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return parse_program(s.str());
}

std::vector<std::string> values_of(const std::vector<Outcome>& outs, const std::string& var) {
  std::vector<std::string> got;
  for (const auto& o : outs)
    for (const auto& b : o.answer.bindings)
      if (b.var == Var{VarKind::Term, var} && b.value) got.push_back(to_string(*b.value));
  return got;
}

}  // namespace

TEST(Defn, RewriteHasTwoClausesInOrder) {
  Program p = load("rewrite.clph");
  Goal g = parse_query("rewrite(a, ?x)", p.sig);
  FreshSupply fs;
  fs.reserve(free_vars(p));
  auto cs = defn(p, g[0].atom, fs);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_TRUE(cs[0].body.size() == 1 && cs[0].body[0].atom.pred == "rule");
  EXPECT_EQ(cs[1].body[0].atom.pred, "rewrite");
  VarSet orig = free_vars(p), renamed;
  collect_vars(cs[0], renamed);
  collect_vars(cs[1], renamed);
  for (const auto& v : renamed) EXPECT_FALSE(orig.count(v)) << v.name;
}

TEST(Defn, UndeclaredPredicate) {
  Program p = load("rewrite.clph");
  FreshSupply fs;
  EXPECT_TRUE(defn(p, Atom{"nothing", {}}, fs).empty());
}

TEST(Reduce, ConstraintLiteralDischarged) {
  Program p;
  State s{parse_query("a = a", p.sig), Constraint::top()};
  State t = reduce(s, p, 0, {}, 0);
  EXPECT_TRUE(t.goal.empty());
  EXPECT_TRUE(t.store.is_true());
}

TEST(Reduce, NoClausesFails) {
  Program p = parse_program("q(a).\n");
  State s{parse_query("p(a)", p.sig), Constraint::top()};
  State t = reduce(s, p, 0, {}, 0);
  EXPECT_TRUE(t.goal.empty());
  EXPECT_TRUE(t.store.is_false());
}

TEST(Reduce, AppendDlFirstStep) {
  Program p = load("append_dl.clph");
  Goal g = parse_query("append_dl(dl(f1(a, b, @x), f2(@x)), dl(f2(c, d, e, @y), f3(@y)), dl(?x, f3))", p.sig);
  FreshSupply fs;
  fs.reserve(free_vars(p));
  fs.reserve(free_vars(g));
  auto cs = defn(p, g[0].atom, fs);
  ASSERT_EQ(cs.size(), 1u);
  State t = reduce(State{g, Constraint::top()}, p, 0, cs, 0);
  ASSERT_EQ(t.goal.size(), 3u);
  for (const auto& l : t.goal) EXPECT_TRUE(!l.is_atom() && l.lit.is_eq());
  EXPECT_TRUE(t.store.is_true());
}

TEST(Solve, RewriteTwoAnswers) {
  Program p = load("rewrite.clph");
  auto outs = solve(p, parse_query("rewrite(f(f(f(a, a), b)), ?x)", p.sig));
  EXPECT_EQ(values_of(outs, "x"), (std::vector<std::string>{"f(f(f(a, a), f))", "f(f(f(a, a), f(b)))"}));
}

TEST(Solve, AppendDl) {
  Program p = load("append_dl.clph");
  auto outs = solve(p, parse_query("append_dl(dl(f1(a, b, @x), f2(@x)), dl(f2(c, d, e, @y), f3(@y)), dl(?x, f3))", p.sig));
  ASSERT_EQ(outs.size(), 1u);
  EXPECT_EQ(values_of(outs, "x"), std::vector<std::string>{"f1(a, b, c, d, e)"});
}

TEST(Solve, EmptyGoal) {
  Program p;
  auto outs = solve(p, Goal{});
  ASSERT_EQ(outs.size(), 1u);
  EXPECT_EQ(outs[0].kind, Outcome::Kind::Answer);
  EXPECT_TRUE(outs[0].answer.store.is_true());
}

TEST(Solve, DepthLimit) {
  Program p = parse_program("loop(?x) :- loop(?x).\n");
  EngineOptions o;
  o.max_depth = 20;
  auto outs = solve(p, parse_query("loop(a)", p.sig), o);
  ASSERT_FALSE(outs.empty());
  EXPECT_EQ(outs[0].kind, Outcome::Kind::DepthExceeded);
}

TEST(Solve, RpoQueries) {
  Program p = load("rpo.clph");
  EXPECT_FALSE(solve(p, parse_query("rpo(f(a), a)", p.sig)).empty());
  EXPECT_TRUE(solve(p, parse_query("rpo(a, a)", p.sig)).empty());
  EXPECT_FALSE(solve(p, parse_query("rpo(f(a), g(a))", p.sig)).empty());
}

TEST(Project, BindingAndResidual) {
  Signature sig;
  Constraint c = dnf(parse_constraint("?x = f(a) & @Y in a*", sig));
  auto bs = project(c.disjuncts[0], VarSet{{VarKind::Term, "x"}, {VarKind::Hedge, "Y"}});
  ASSERT_EQ(bs.size(), 2u);
  for (const auto& b : bs) {
    if (b.var.name == "x") {
      ASSERT_TRUE(b.value);
      EXPECT_EQ(to_string(*b.value), "f(a)");
    } else {
      EXPECT_FALSE(b.value);
      ASSERT_EQ(b.residual.size(), 1u);
      EXPECT_EQ(to_string(b.residual[0]), "@Y in a*");
    }
  }
}

TEST(Project, TopLeavesVariablesFree) {
  auto bs = project(Conjunction::top(), VarSet{{VarKind::Term, "x"}});
  ASSERT_EQ(bs.size(), 1u);
  EXPECT_FALSE(bs[0].value);
  EXPECT_TRUE(bs[0].residual.empty());
}
