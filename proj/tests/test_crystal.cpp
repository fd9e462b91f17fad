#include <gtest/gtest.h>

#include <random>

#include "quivercrystal/crystal.hpp"

using namespace qc;

namespace {

GraphPtr type_a(int r) { return std::make_shared<QuiverGraph>(QuiverGraph::type_a(r)); }

using Pair = TensorCrystal<BiCrystal, BiCrystal>;
using Triple = TensorCrystal<Pair, BiCrystal>;

// A B_i crystal whose phi is off by one at vertex 1 for the element b_1(3).
class CorruptedBi : public BiCrystal {
 public:
  using BiCrystal::BiCrystal;
  ExtInt phi(const BiElement& b, Vertex j) const {
    ExtInt v = BiCrystal::phi(b, j);
    return (b.i == 0 && b.n == 3 && j == 0) ? v + 1 : v;
  }
};

}  // namespace

TEST(ExtInt, MaxPlusConventions) {
  ExtInt n = ExtInt::neg_inf();
  EXPECT_LT(n, ExtInt(-1000000));
  EXPECT_EQ(n + 5, n);
  EXPECT_EQ(max(n, ExtInt(3)), ExtInt(3));
  EXPECT_FALSE(n.is_finite());
  EXPECT_THROW(n.value(), DomainError);
  EXPECT_EQ(ExtInt(4) - 6, ExtInt(-2));
}

TEST(BiCrystal, ElementaryOperators) {
  EXPECT_EQ(bi_e({0, 0}, 0), (BiElement{0, 1}));
  EXPECT_FALSE(bi_e({0, 0}, 1).has_value());
  EXPECT_EQ(bi_f({0, 5}, 0), (BiElement{0, 4}));
  BiCrystal c(type_a(2));
  EXPECT_EQ(c.wt({1, -3}), (Weight{0, -3}));
  EXPECT_EQ(c.eps({1, -3}, 1), ExtInt(3));
  EXPECT_EQ(c.phi({1, -3}, 0), ExtInt::neg_inf());
}

TEST(TensorCrystal, DisplayedFormulas) {
  auto g = type_a(2);
  Pair t{BiCrystal(g), BiCrystal(g)};
  EXPECT_EQ(t.eps({{0, 0}, {0, 0}}, 0), ExtInt(0));
  EXPECT_EQ(t.eps({{0, 0}, {1, 0}}, 1), ExtInt(0));
  // eps_1(b_1(-2)) = 2 and <h_1, -2 alpha_1> = -4, so max(2, 0 + 4) = 4
  EXPECT_EQ(t.eps({{0, -2}, {0, 0}}, 0), ExtInt(4));
  EXPECT_EQ(t.e({{0, 0}, {0, 0}}, 0), (Pair::value_type{{0, 1}, {0, 0}}));
  EXPECT_EQ(t.f({{0, 0}, {0, 0}}, 0), (Pair::value_type{{0, 0}, {0, -1}}));
  EXPECT_FALSE(t.f({{0, 0}, {0, 0}}, 1).has_value());
  EXPECT_EQ(t.wt({{0, 2}, {1, -1}}), (Weight{2, -1}));
}

TEST(CheckAxioms, ElementaryCrystalsAreClean) {
  auto g = type_a(3);
  BiCrystal c(g);
  std::vector<BiElement> sample;
  for (Vertex i = 0; i < 3; ++i)
    for (int n = -10; n <= 10; ++n) sample.push_back({i, n});
  AxiomReport rep = check_axioms(c, sample);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, sample.size() * 3);
}

TEST(CheckAxioms, TensorClosureIsClean) {
  auto g = type_a(2);
  Pair t{BiCrystal(g), BiCrystal(g)};
  auto sample = ef_closure(t, {{{0, 0}, {1, 0}}}, 4);
  EXPECT_GT(sample.size(), 10u);
  AxiomReport rep = check_axioms(t, sample);
  EXPECT_TRUE(rep.ok()) << rep.violations.front();
}

TEST(CheckAxioms, CorruptedPhiIsReported) {
  auto g = type_a(2);
  CorruptedBi c(g);
  AxiomReport rep = check_axioms(c, std::vector<BiElement>{{0, 3}});
  ASSERT_FALSE(rep.ok());
  int phi_rule = 0;
  for (const auto& v : rep.violations) phi_rule += v.rfind("phi rule", 0) == 0;
  EXPECT_EQ(phi_rule, 1);
}

TEST(BiWord, ClosedFormMatchesIteratedBinaryRule) {
  auto g = type_a(3);
  Triple t{Pair{BiCrystal(g), BiCrystal(g)}, BiCrystal(g)};
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    BiElement a{int(rng() % 3), int(rng() % 7) - 3}, b{int(rng() % 3), int(rng() % 7) - 3},
        c{int(rng() % 3), int(rng() % 7) - 3};
    Triple::value_type v{{a, b}, c};
    for (Vertex i = 0; i < 3; ++i) {
      BiWord w(*g, {a, b, c});
      ASSERT_EQ(w.eps(i), t.eps(v, i));
      ASSERT_EQ(w.phi(i), t.phi(v, i));
      auto te = t.e(v, i);
      BiWord we = w;
      ASSERT_EQ(we.apply_e(i), te.has_value());
      if (te) {
        ASSERT_EQ(we.factors()[0], te->first.first);
        ASSERT_EQ(we.factors()[1], te->first.second);
        ASSERT_EQ(we.factors()[2], te->second);
      }
      auto tf = t.f(v, i);
      BiWord wf = w;
      ASSERT_EQ(wf.apply_f(i), tf.has_value());
      if (tf) {
        ASSERT_EQ(wf.factors()[0], tf->first.first);
        ASSERT_EQ(wf.factors()[1], tf->first.second);
        ASSERT_EQ(wf.factors()[2], tf->second);
      }
    }
  }
}

TEST(Morphisms, IdentityAndNegativeControl) {
  auto g = type_a(2);
  Pair t{BiCrystal(g), BiCrystal(g)};
  auto sample = ef_closure(t, {{{0, 0}, {1, 0}}}, 3);
  auto id = [](const Pair::value_type& x) { return x; };
  EXPECT_TRUE(is_strict_morphism(t, t, id, sample));
  EXPECT_TRUE(is_embedding(t, t, id, sample));
  // dropping the f_1 edge out of the seed breaks commutation
  auto broken = [](const Pair::value_type& x) {
    if (x == Pair::value_type{{0, 0}, {1, 0}}) return Pair::value_type{{0, 0}, {1, 0}};
    if (x == Pair::value_type{{0, -1}, {1, 0}}) return Pair::value_type{{0, -2}, {1, 0}};
    return x;
  };
  EXPECT_FALSE(is_strict_morphism(t, t, broken, sample));
}
