#include <gtest/gtest.h>

#include <random>

#include "random_terms.hpp"
#include "ttalign/term.hpp"
#include "ttalign/tt_parser.hpp"

using namespace ttalign;

namespace {

TermPtr fig4_t1() {
  // forall x : num. x + 0 = x
  auto x = Term::var("x");
  auto plus = Term::comb(Term::id("+"), Term::comb(x, Term::id("0")));
  auto eq = Term::comb(Term::id("="), Term::comb(plus, x));
  return Term::comb(Term::id("!"), Term::abs("x", Term::id("num"), eq));
}

}  // namespace

TEST(Term, FactoriesRejectEmptyParts) {
  EXPECT_THROW(Term::id(""), std::invalid_argument);
  EXPECT_THROW(Term::comb(nullptr, Term::id("a")), std::invalid_argument);
  EXPECT_THROW(Term::abs("", Term::id("T"), Term::id("a")), std::invalid_argument);
  EXPECT_THROW(Term::abs("x", Term::id("T"), nullptr), std::invalid_argument);
}

TEST(Term, EqualityComparesConstantFlag) {
  EXPECT_EQ(*Term::id("a"), *Term::id("a"));
  EXPECT_NE(*Term::id("a"), *Term::var("a"));
  EXPECT_NE(*Term::abs("x", Term::id("T"), Term::var("x")),
            *Term::abs("y", Term::id("T"), Term::var("y")));
  EXPECT_EQ(*fig4_t1(), *fig4_t1());
}

TEST(Term, Counts) {
  auto t = fig4_t1();
  EXPECT_EQ(node_count(*t), 13u);
  EXPECT_EQ(leaf_count(*t), 7u);
  EXPECT_EQ(depth(*t), 7u);
  EXPECT_EQ(node_count(*Term::id("c")), 1u);
  EXPECT_EQ(depth(*Term::id("c")), 1u);
}

TEST(Term, ConstantsOfFig4) {
  auto cs = constants_of(*fig4_t1(), NameSet{"!", "="});
  EXPECT_EQ(cs, (std::vector<std::string>{"num", "+", "0"}));
}

TEST(Term, ConstantsOfVariableIsEmpty) {
  EXPECT_TRUE(constants_of(*Term::var("x"), {}).empty());
}

TEST(Term, ConstantsOfCollapsesDuplicates) {
  auto c = Term::id("c");
  auto t = Term::comb(c, Term::comb(Term::id("d"), c));
  EXPECT_EQ(constants_of(*t, {}), (std::vector<std::string>{"c", "d"}));
}

TEST(Term, ConstantsOfInvariantUnderBoundRenaming) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto t = ttalign::testing::random_term(rng);
    auto renamed = rename_bound(t, [](const std::string& s) { return s + "'"; });
    EXPECT_EQ(constants_of(*t, default_logical_names()),
              constants_of(*renamed, default_logical_names()));
    EXPECT_EQ(node_count(*t), node_count(*renamed));
  }
}

TEST(Term, RenameBoundLeavesFreeOccurrences) {
  auto t = Term::comb(Term::var("x"), Term::abs("x", Term::id("T"), Term::var("x")));
  auto r = rename_bound(t, [](const std::string&) { return "z"; });
  auto expected = Term::comb(Term::var("x"), Term::abs("z", Term::id("T"), Term::var("z")));
  EXPECT_EQ(*r, *expected);
}

TEST(Term, RenameConstantsTouchesOnlyConstants) {
  auto t = Term::comb(Term::id("a"), Term::comb(Term::var("a"), Term::id("b")));
  auto r = rename_constants(t, [](const std::string& s) { return "k:" + s; });
  auto expected = Term::comb(Term::id("k:a"), Term::comb(Term::var("a"), Term::id("k:b")));
  EXPECT_EQ(*r, *expected);
}
