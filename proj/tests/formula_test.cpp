#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "topologic/error.hpp"
#include "topologic/formula.hpp"

namespace topologic {
namespace {

Formula A = Formula::atom("A");
Formula B = Formula::atom("B");

TEST(Parse, ImplicationOfKnowledge) {
  EXPECT_EQ(parse("K A -> A"), Formula::implies(Formula::knows(A), A));
}

TEST(Parse, UnaryBindsTighterThanAnd) {
  auto p = Formula::atom("p"), q = Formula::atom("q");
  EXPECT_EQ(parse("<> K p & L q"), Formula::conj(Formula::diamond(Formula::knows(p)), Formula::possible(q)));
}

TEST(Parse, ClosednessScheme) {
  auto i1 = Formula::atom("I1");
  EXPECT_EQ(parse("[] L I1 -> I1"), Formula::implies(Formula::box(Formula::possible(i1)), i1));
}

TEST(Parse, Associativity) {
  auto a = Formula::atom("a"), b = Formula::atom("b"), c = Formula::atom("c");
  EXPECT_EQ(parse("a & b & c"), Formula::conj(Formula::conj(a, b), c));
  EXPECT_EQ(parse("a | b | c"), Formula::disj(Formula::disj(a, b), c));
  EXPECT_EQ(parse("a -> b -> c"), Formula::implies(a, Formula::implies(b, c)));
  EXPECT_EQ(parse("a <-> b <-> c"), Formula::iff(Formula::iff(a, b), c));
  EXPECT_EQ(parse("a | b & c -> a <-> c"),
            Formula::iff(Formula::implies(Formula::disj(a, Formula::conj(b, c)), a), c));
}

TEST(Parse, Constants) {
  EXPECT_EQ(parse("top"), Formula::top());
  EXPECT_EQ(parse("~bot"), Formula::negation(Formula::bot()));
  EXPECT_EQ(parse("topx"), Formula::atom("topx"));
  EXPECT_EQ(parse("KA"), Formula::atom("KA"));
}

TEST(Parse, ErrorsCarryOffsets) {
  auto offset_of = [](const char* text) -> long {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  EXPECT_EQ(offset_of("A & $"), 4);
  EXPECT_EQ(offset_of("(A & B"), 0);
  EXPECT_EQ(offset_of("A & B)"), 5);
  EXPECT_EQ(offset_of("A & K"), 4);
  EXPECT_EQ(offset_of(""), 0);
  EXPECT_EQ(offset_of("A B"), 2);
  EXPECT_THROW(parse("L -> A"), ParseError);
}

TEST(Print, Examples) {
  EXPECT_EQ(print(Formula::implies(Formula::knows(A), A)), "K A -> A");
  auto a = Formula::atom("a"), b = Formula::atom("b"), c = Formula::atom("c");
  EXPECT_EQ(print(Formula::conj(Formula::conj(a, b), c)), "a & b & c");
  EXPECT_EQ(print(Formula::conj(a, Formula::conj(b, c))), "a & (b & c)");
  EXPECT_EQ(print(Formula::diamond(Formula::knows(A))), "<> K A");
  EXPECT_EQ(print(Formula::implies(Formula::implies(a, b), c)), "(a -> b) -> c");
  EXPECT_EQ(print(Formula::negation(Formula::conj(a, b))), "~(a & b)");
}

TEST(Print, RoundTripProperty) {
  std::mt19937 rng(7);
  for (int i = 0; i < 3000; ++i) {
    Formula f = testing::random_formula(rng, 5, {"A", "B", "c_1"});
    ASSERT_EQ(parse(print(f)), f) << print(f);
  }
}

TEST(Subformulas, Examples) {
  EXPECT_EQ(subformulas(A), std::vector<Formula>{A});
  auto ab = Formula::conj(A, B);
  EXPECT_EQ(subformulas(Formula::knows(ab)), (std::vector<Formula>{A, B, ab, Formula::knows(ab)}));
  auto ka = Formula::knows(A);
  auto nka = Formula::negation(ka);
  auto bnka = Formula::box(nka);
  EXPECT_EQ(subformulas(Formula::diamond(ka)),
            (std::vector<Formula>{A, ka, nka, bnka, Formula::negation(bnka)}));
}

TEST(Desugar, IdempotentAndPreservesAtoms) {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_formula(rng, 4, {"A", "B", "C"});
    Formula d = desugar(f);
    ASSERT_EQ(desugar(d), d);
    ASSERT_EQ(atoms(d), atoms(f));
    for (const auto& s : subformulas(f)) ASSERT_TRUE(is_primitive(s.op()));
  }
}

TEST(Classify, Examples) {
  EXPECT_TRUE(classify(parse("A & ~B")).in_L_prime);
  EXPECT_TRUE(classify(parse("<> K (A & <> K B)")).in_L_prime);
  auto c = classify(parse("K (<> K A)"));
  EXPECT_TRUE(c.in_L_double_prime);
  EXPECT_FALSE(c.in_L_prime);
  EXPECT_FALSE(classify(parse("K A")).in_L_prime);
  EXPECT_FALSE(classify(parse("<> A")).in_L_prime);
  EXPECT_FALSE(classify(parse("[] A")).in_L_prime);
  EXPECT_TRUE(classify(parse("~[]~K A")).in_L_prime);
}

TEST(Classify, PnfAndDnf) {
  EXPECT_TRUE(classify(parse("A & K B & L C")).is_PNF);
  EXPECT_TRUE(classify(parse("top & K A")).is_PNF);
  EXPECT_TRUE(classify(parse("A & K B & L C | top & K B")).is_DNF);
  EXPECT_FALSE(classify(parse("A & K B & L C | top & K B")).is_PNF);
  EXPECT_FALSE(classify(parse("K A")).is_PNF);
  EXPECT_FALSE(classify(parse("A & L C & K B")).is_PNF);
  EXPECT_FALSE(classify(parse("A & K B & K C")).is_PNF);
  EXPECT_FALSE(classify(parse("A & K [] B")).is_DNF);
}

TEST(Classify, LPrimeClosedUnderNegationAndDiamondK) {
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_formula(rng, 3, {"A", "B"});
    if (!classify(f).in_L_prime) continue;
    ASSERT_TRUE(classify(Formula::negation(f)).in_L_prime);
    ASSERT_TRUE(classify(Formula::diamond(Formula::knows(f))).in_L_prime);
  }
  for (int i = 0; i < 500; ++i) {
    Formula f = testing::random_l_prime(rng, 3, {"A", "B"});
    ASSERT_TRUE(in_L_prime(f)) << print(f);
    ASSERT_LE(l_prime_depth(f), 3U) << print(f);
  }
}

TEST(Substitute, ReplacesAtoms) {
  Formula f = parse("K phi -> phi");
  EXPECT_EQ(substitute(f, {{"phi", parse("A & B")}}), parse("K (A & B) -> A & B"));
}

}  // namespace
}  // namespace topologic
