#include <gtest/gtest.h>

#include <algorithm>

#include "clph/automaton.hpp"
#include "clph/oracle.hpp"
#include "clph/parse.hpp"
#include "clph/print.hpp"
#include "clph/regex.hpp"
#include "support/generators.hpp"

using namespace clph;

namespace {

Regex R(const char* s) { return parse_regex(s); }
Hedge H(const char* s) { return parse_hedge(s); }

Signature abc() {
  Signature s;
  for (const char* f : {"a", "b", "c", "f", "g"}) s.declare(f, false);
  return s;
}

bool same_language(const Regex& x, const Regex& y, const Signature& sig, std::size_t k) {
  return lang_enumerate(x, sig, k) == lang_enumerate(y, sig, k);
}

}  // namespace

TEST(Nullable, Eps) { EXPECT_TRUE(nullable(R("eps"))); }
TEST(Nullable, SymbolThenStar) { EXPECT_FALSE(nullable(R("f(a*) . b*"))); }
TEST(Nullable, StarOfSymbol) { EXPECT_TRUE(nullable(R("(f(eps))*"))); }
TEST(Nullable, Choice) {
  EXPECT_TRUE(nullable(R("a | eps")));
  EXPECT_FALSE(nullable(R("a | b")));
}

TEST(LinearForm, OfEpsIsEmpty) { EXPECT_TRUE(lf(R("eps")).empty()); }

TEST(LinearForm, OfSymbol) {
  LinearForm l = lf(R("f(a*)"));
  ASSERT_EQ(l.size(), 1u);
  EXPECT_TRUE(l.contains(R("f(a*)"), R("eps")));
}

TEST(LinearForm, NonNullablePrefix) {
  LinearForm l = lf(R("f(a) . b*"));
  ASSERT_EQ(l.size(), 1u);
  EXPECT_TRUE(l.contains(R("f(a)"), R("b*")));
}

TEST(LinearForm, NullablePrefixAddsRight) {
  LinearForm l = lf(R("a* . b"));
  EXPECT_EQ(l.size(), 2u);
  EXPECT_TRUE(l.contains(R("b"), R("eps")));
  EXPECT_TRUE(l.contains(R("a"), Regex::concat(R("a*"), R("b"))));
}

TEST(LinearForm, HeadsAreSymbols) {
  clph::testing::Gen g(5, {});
  for (int i = 0; i < 300; ++i)
    for (const auto& [h, t] : lf(g.regex(7)).pairs) EXPECT_EQ(h.kind, Regex::Kind::Sym);
}

TEST(Odot, EpsTail) {
  LinearForm l;
  l.add(R("f(a)"), R("eps"));
  LinearForm o = odot(l, R("b*"));
  ASSERT_EQ(o.size(), 1u);
  EXPECT_TRUE(o.contains(R("f(a)"), R("b*")));
}

TEST(Odot, GeneralTail) {
  LinearForm l;
  l.add(R("f(a)"), R("c"));
  LinearForm o = odot(l, R("b*"));
  ASSERT_EQ(o.size(), 1u);
  EXPECT_TRUE(o.contains(R("f(a)"), Regex::concat(R("c"), R("b*"))));
}

TEST(Odot, EpsIsIdentity) {
  LinearForm l;
  l.add(R("f(a)"), R("c"));
  l.add(R("g"), R("eps"));
  LinearForm o = odot(l, R("eps"));
  EXPECT_EQ(o.pairs, l.pairs);
}

TEST(GroundMember, ExampleLanguage) {
  Signature sig = abc();
  EXPECT_TRUE(ground_member(H("(f, b)"), R("f(a*) . b*"), sig));
  EXPECT_TRUE(ground_member(H("(f(a, a), b, b)"), R("f(a*) . b*"), sig));
  EXPECT_FALSE(ground_member(H("(b, f)"), R("f(a*) . b*"), sig));
}

TEST(GroundMember, EmptyHedgeInEps) { EXPECT_TRUE(ground_member(Hedge{}, R("eps"), abc())); }

TEST(GroundMember, WrongHead) { EXPECT_FALSE(ground_member(H("b"), R("f(a*)"), abc())); }

TEST(GroundMember, RejectsVariables) {
  EXPECT_THROW(ground_member(H("(a, @X)"), R("a*"), abc()), std::invalid_argument);
}

TEST(GroundMember, UnorderedPermutation) {
  Signature sig = abc();
  sig.declare("h", true);
  EXPECT_TRUE(ground_member(H("h(b, a)"), R("h(a . b)"), sig));
  EXPECT_FALSE(ground_member(H("h(b, b)"), R("h(a . b)"), sig));
}

TEST(Intersect, ExampleStore) {
  Signature sig = abc();
  MaybeRegex r = intersect(R("a*"), R("a . (a(b*))*"), sig);
  ASSERT_TRUE(r);
  EXPECT_TRUE(same_language(*r, R("a . a*"), sig, 6)) << to_string(*r);
}

TEST(Intersect, Idempotent) {
  Signature sig = abc();
  Regex r = R("f(a*) . b*");
  MaybeRegex i = intersect(r, r, sig);
  ASSERT_TRUE(i);
  EXPECT_TRUE(same_language(*i, r, sig, 5));
}

TEST(Intersect, DisjointSingletons) { EXPECT_FALSE(intersect(R("f(eps)"), R("g(eps)"), abc())); }

TEST(Intersect, StarsOfDifferentSymbols) {
  Signature sig = abc();
  MaybeRegex r = intersect(R("a*"), R("b*"), sig);
  ASSERT_TRUE(r);
  EXPECT_EQ(lang_enumerate(*r, sig, 4), std::vector<Hedge>{Hedge{}});
}

TEST(Intersect, AgreesWithEnumeration) {
  clph::testing::GenConfig cfg;
  cfg.symbols = {"a", "b", "f"};
  cfg.unordered = {};
  clph::testing::Gen g(17, cfg);
  for (int i = 0; i < 150; ++i) {
    Regex x = g.regex(5), y = g.regex(5);
    auto lx = lang_enumerate(x, g.sig(), 4), ly = lang_enumerate(y, g.sig(), 4);
    std::vector<Hedge> both;
    std::set_intersection(lx.begin(), lx.end(), ly.begin(), ly.end(), std::back_inserter(both), HedgeLess{});
    MaybeRegex r = intersect(x, y, g.sig());
    if (!r) {
      EXPECT_TRUE(both.empty()) << to_string(x) << " & " << to_string(y);
      continue;
    }
    EXPECT_EQ(lang_enumerate(*r, g.sig(), 4), both) << to_string(x) << " & " << to_string(y);
  }
}

TEST(Automaton, RoundTrip) {
  clph::testing::GenConfig cfg;
  cfg.symbols = {"a", "b", "f"};
  cfg.unordered = {};
  clph::testing::Gen g(23, cfg);
  for (int i = 0; i < 150; ++i) {
    Regex r = g.regex(6);
    MaybeRegex back = automaton_to_regex(to_automaton(r));
    ASSERT_TRUE(back) << to_string(r);
    EXPECT_TRUE(same_language(*back, r, g.sig(), 4)) << to_string(r) << " vs " << to_string(*back);
  }
}

TEST(Automaton, NeverEmpty) {
  clph::testing::Gen g(29, {});
  for (int i = 0; i < 300; ++i) EXPECT_FALSE(is_empty(to_automaton(g.regex(7))));
}

TEST(Automaton, ProductOfDisjointStarsIsEps) {
  Signature sig = abc();
  auto p = product(to_automaton(R("a*")), to_automaton(R("b*")));
  EXPECT_FALSE(is_empty(p));
  MaybeRegex r = automaton_to_regex(p);
  ASSERT_TRUE(r);
  EXPECT_EQ(lang_enumerate(*r, sig, 5), std::vector<Hedge>{Hedge{}});
}

TEST(LangEnumerate, Eps) { EXPECT_EQ(lang_enumerate(R("eps"), abc(), 5), std::vector<Hedge>{Hedge{}}); }

TEST(LangEnumerate, ExampleMembers) {
  Signature sig = abc();
  auto l = lang_enumerate(R("f(a*) . b*"), sig, 4);
  for (const char* s : {"f", "f(a)", "(f, b)", "(f(a), b)"})
    EXPECT_TRUE(std::binary_search(l.begin(), l.end(), H(s), HedgeLess{})) << s;
}

TEST(LangEnumerate, ChoiceIsUnion) {
  Signature sig = abc();
  auto l1 = lang_enumerate(R("f(a*)"), sig, 4), l2 = lang_enumerate(R("b . c*"), sig, 4);
  std::vector<Hedge> u;
  std::set_union(l1.begin(), l1.end(), l2.begin(), l2.end(), std::back_inserter(u), HedgeLess{});
  EXPECT_EQ(lang_enumerate(R("f(a*) | b . c*"), sig, 4), u);
}

TEST(Properties, NullableMatchesEnumeration) {
  clph::testing::Gen g(31, {});
  for (int i = 0; i < 300; ++i) {
    Regex r = g.regex(6);
    auto l = lang_enumerate(r, g.sig(), 0);
    EXPECT_EQ(nullable(r), !l.empty() && l.front().empty()) << to_string(r);
  }
}

TEST(Properties, MembershipMatchesEnumeration) {
  clph::testing::Gen g(37, {});
  for (int i = 0; i < 60; ++i) {
    Regex r = g.regex(5);
    auto l = lang_enumerate(r, g.sig(), 3);
    for (const auto& h : enum_ground(g.sig(), Bounds{2, 2, 3}))
      EXPECT_EQ(ground_member(h, r, g.sig()), std::binary_search(l.begin(), l.end(), h, HedgeLess{}))
          << to_string(r) << " / " << to_string(h);
  }
}
