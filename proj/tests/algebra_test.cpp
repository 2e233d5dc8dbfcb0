#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "topologic/algebra.hpp"
#include "topologic/decide.hpp"
#include "topologic/error.hpp"
#include "topologic/semantics.hpp"

namespace topologic {
namespace {

Model chain() { return Model(SubsetSpace({"a", "b"}, {0, 1, 3}), {{"A", 1}}); }

std::vector<Element> identity_table(std::size_t atoms) {
  std::vector<Element> t(std::size_t{1} << atoms);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Element>(i);
  return t;
}

Element truth_set(const Model& m, const ComplexAlgebra& c, const Formula& f) {
  Element out = 0;
  for (std::size_t w = 0; w < c.worlds.size(); ++w)
    if (eval(m, c.worlds[w], f)) out |= Element{1} << w;
  return out;
}

std::vector<Model> small_topological_models() {
  std::vector<Model> out;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::topology))
      for (Model& m : testing::all_models(s, {"A"})) out.push_back(std::move(m));
  return out;
}

TEST(MonadicAlgebra, TrivialAndIdentity) {
  MonadicAlgebra one(1, identity_table(1), identity_table(1));
  EXPECT_TRUE(check_fma(one));
  EXPECT_TRUE(check_gma(one));

  MonadicAlgebra two(2, identity_table(2), identity_table(2));
  EXPECT_TRUE(check_fma(two));
  EXPECT_TRUE(check_gma(two));
  EXPECT_TRUE(check_gma_inequality_naive(two).holds);
  EXPECT_EQ(two.closure(0b01), 0b01U);
  EXPECT_EQ(two.exists(0b10), 0b10U);

  MonadicAlgebra empty(0, {0}, {0});
  EXPECT_TRUE(check_gma(empty));
}

TEST(MonadicAlgebra, RejectsMalformedTables) {
  EXPECT_THROW(MonadicAlgebra(2, identity_table(1), identity_table(2)), InvalidInput);
  EXPECT_THROW(MonadicAlgebra(1, {0, 2}, {0, 1}), InvalidInput);
  EXPECT_THROW(MonadicAlgebra(13, {}, {}), InvalidInput);
}

TEST(MonadicAlgebra, LawViolationsCarryWitnesses) {
  LawCheck inflating = check_fma_laws(MonadicAlgebra(1, {1, 1}, {0, 1}));
  EXPECT_FALSE(inflating.holds);
  EXPECT_EQ(inflating.law, "I a <= a");
  EXPECT_EQ(inflating.witness, (std::vector<Element>{0}));

  EXPECT_EQ(check_fma_laws(MonadicAlgebra(1, {0, 1}, {0, 0})).law, "forall 1 = 1");

  // largest member of {0, {0,1}, {1,2}, X} below a: not closed under meets
  LawCheck meets = check_fma_laws(MonadicAlgebra(3, {0, 0, 0, 3, 0, 0, 6, 7}, identity_table(3)));
  EXPECT_EQ(meets.law, "I(a & b) = I a & I b");
  EXPECT_EQ(meets.witness, (std::vector<Element>{3, 6}));

  // effort w0 -> w1, knowledge classes {w0} and {w1,w2}
  LawCheck cross =
      check_fma_laws(MonadicAlgebra(3, {0, 0, 2, 3, 4, 4, 6, 7}, {0, 1, 0, 1, 0, 1, 6, 7}));
  EXPECT_EQ(cross.law, "forall I a <= I forall a");
  EXPECT_EQ(cross.witness, (std::vector<Element>{3}));
}

TEST(MonadicAlgebra, CrossLawDirection) {
  // effort: w1 -> w0; knowledge relates w1 and w2 (the chain's complex algebra)
  ComplexAlgebra c = complex_algebra(chain());
  const MonadicAlgebra& alg = c.algebra;
  EXPECT_EQ(alg.interior_table(), (std::vector<Element>{0, 1, 0, 3, 4, 5, 4, 7}));
  EXPECT_EQ(alg.forall_table(), (std::vector<Element>{0, 1, 0, 1, 0, 1, 6, 7}));
  // I forall and forall I differ at {w1,w2}: the converse cross law fails there
  EXPECT_EQ(alg.interior(alg.forall(0b110)), 0b100U);
  EXPECT_EQ(alg.forall(alg.interior(0b110)), 0b000U);
  EXPECT_TRUE(check_fma(alg));
}

TEST(ComplexAlgebra, Examples) {
  ComplexAlgebra single = complex_algebra(Model(SubsetSpace({"a"}, {1}), {}));
  EXPECT_EQ(single.algebra.size(), 2U);
  EXPECT_EQ(single.algebra.interior_table(), identity_table(1));
  EXPECT_EQ(single.algebra.forall_table(), identity_table(1));

  ComplexAlgebra ch = complex_algebra(chain());
  EXPECT_EQ(ch.algebra.size(), 8U);
  std::vector<Element> i_forall, forall_i;
  for (Element a = 0; a < 8; ++a) {
    i_forall.push_back(ch.algebra.interior(ch.algebra.forall(a)));
    forall_i.push_back(ch.algebra.forall(ch.algebra.interior(a)));
  }
  EXPECT_EQ(i_forall, (std::vector<Element>{0, 1, 0, 1, 0, 1, 4, 7}));
  EXPECT_EQ(forall_i, (std::vector<Element>{0, 1, 0, 1, 0, 1, 0, 7}));

  // two points sharing one nonempty open: forall of a proper set is 0
  ComplexAlgebra q = complex_algebra(Model(SubsetSpace({"x1", "x2"}, {0, 3}), {{"A", 1}}));
  EXPECT_EQ(q.algebra.forall_table(), (std::vector<Element>{0, 0, 0, 3}));
  EXPECT_EQ(q.algebra.interior_table(), identity_table(2));
}

TEST(ComplexAlgebra, TooManyWorlds) {
  std::vector<PointSet> all;
  for (PointSet s = 0; s < 16; ++s) all.push_back(s);
  EXPECT_THROW(complex_algebra(Model(SubsetSpace::numbered(4, all), {})), BudgetExceeded);
}

TEST(ComplexAlgebra, SmallTopologiesAreGeneratedMonadic) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::topology)) {
      ComplexAlgebra c = complex_algebra(Model(s, {}));
      LawCheck r = check_gma_laws(c.algebra);
      EXPECT_TRUE(r.holds) << r.law;
    }
}

TEST(ComplexAlgebra, GmaReductionMatchesFullLoop) {
  int checked = 0, failing = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::any_subset_space)) {
      ComplexAlgebra c = complex_algebra(Model(s, {}));
      if (c.algebra.atom_count() > 7 || !check_fma(c.algebra)) continue;
      ++checked;
      const bool naive = check_gma_inequality_naive(c.algebra).holds;
      EXPECT_EQ(check_gma_inequality(c.algebra, Execution::serial).holds, naive);
      if (!naive) ++failing;
    }
  EXPECT_GT(checked, 50);
  EXPECT_GT(failing, 0);
}

TEST(ComplexAlgebra, SerialAndParallelAgree) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::any_subset_space)) {
      ComplexAlgebra c = complex_algebra(Model(s, {}));
      LawCheck a = check_gma_laws(c.algebra, Execution::serial);
      LawCheck b = check_gma_laws(c.algebra, Execution::parallel);
      EXPECT_EQ(a.holds, b.holds);
      EXPECT_EQ(a.law, b.law);
      EXPECT_EQ(a.witness, b.witness);
    }
}

TEST(AlgEval, TopIsOne) {
  MonadicAlgebra two(2, identity_table(2), identity_table(2));
  EXPECT_EQ(alg_eval(two, {}, Formula::top()), two.top());
  EXPECT_EQ(alg_eval(two, {}, parse("A")), 0U);
}

TEST(AlgEval, RejectsValuesOutsideFixedSubalgebra) {
  ComplexAlgebra c = complex_algebra(chain());
  EXPECT_THROW(alg_eval(c.algebra, {{"A", 0b010}}, parse("A")), InvalidInput);
  EXPECT_THROW(alg_eval(c.algebra, {{"A", 0b1000}}, parse("A")), InvalidInput);
  EXPECT_NO_THROW(alg_eval(c.algebra, {{"A", 0b011}}, parse("A")));
}

TEST(AlgEval, AtomWorldSetsAreFixed) {
  for (const Model& m : small_topological_models()) {
    ComplexAlgebra c = complex_algebra(m);
    for (const auto& [atom, e] : world_valuation(c, m)) EXPECT_TRUE(c.algebra.in_fixed_subalgebra(e));
  }
}

TEST(AlgEval, AgreesWithSemanticsOnLatticeModels) {
  std::mt19937 rng(12);
  const std::vector<std::string> names{"A", "B"};
  std::vector<SubsetSpace> spaces;
  for (std::size_t n = 1; n <= 3; ++n)
    for (auto& s : testing::all_lattices_bruteforce(n, false)) spaces.push_back(s);
  for (int trial = 0; trial < 400; ++trial) {
    Model m = testing::random_model(rng, spaces[rng() % spaces.size()], names);
    ComplexAlgebra c = complex_algebra(m);
    AlgValuation v = world_valuation(c, m);
    for (int k = 0; k < 5; ++k) {
      Formula f = testing::random_formula(rng, 3, names);
      ASSERT_EQ(alg_eval(c.algebra, v, f), truth_set(m, c, f)) << print(f);
    }
  }
}

TEST(AlgEval, AxiomsEvaluateToOne) {
  std::mt19937 rng(23);
  const std::vector<std::string> names{"A", "B"};
  std::vector<Model> models = small_topological_models();
  for (int trial = 0; trial < 300; ++trial) {
    const Model& base = models[rng() % models.size()];
    Model m = testing::random_model(rng, base.space(), names);
    ComplexAlgebra c = complex_algebra(m);
    AlgValuation v = world_valuation(c, m);
    std::map<std::string, Formula> sub;
    for (const char* var : {"phi", "psi", "chi"}) sub[var] = testing::random_l_prime(rng, 1, names);
    sub["A"] = Formula::atom(rng() % 2 ? "A" : "B");
    for (int ax = 1; ax <= 12; ++ax) {
      Formula f = instantiate({"axiom-" + std::to_string(ax), sub});
      ASSERT_EQ(alg_eval(c.algebra, v, f), c.algebra.top()) << "axiom-" << ax << " " << print(f);
    }
  }
}

TEST(AlgebraJson, RoundTripAndErrors) {
  MonadicAlgebra a = complex_algebra(chain()).algebra;
  nlohmann::json j = algebra_to_json(a);
  EXPECT_EQ(j.at("atoms").get<int>(), 3);
  EXPECT_EQ(algebra_from_json(j), a);
  EXPECT_THROW(algebra_from_json(nlohmann::json::parse(R"({"atoms": 1, "interior": [0], "forall": [0, 1]})")),
               InvalidInput);
  EXPECT_THROW(algebra_from_json(nlohmann::json::parse(R"({"atoms": -1, "interior": [], "forall": []})")),
               InvalidInput);
  EXPECT_THROW(algebra_from_json(nlohmann::json::parse(R"({"atoms": 1})")), InvalidInput);
  EXPECT_EQ(law_check_to_json(check_gma_laws(a)).at("holds").get<bool>(), true);
}

}  // namespace
}  // namespace topologic
