#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "quivercrystal/geometric.hpp"
#include "quivercrystal/string_model.hpp"

using namespace qc;

namespace {

long long dim_e(const DimVector& d) {
  long long s = 0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) s += static_cast<long long>(d[k]) * d[k + 1];
  return s;
}

// Parallel breadth-first walk through both models from the highest element along f_i.
struct Walk {
  std::map<OrbitKey, StringElement> geo_to_str;
  std::map<StringElement, OrbitKey> str_to_geo;
  bool consistent = true;
};

Walk walk(const GeometricModel& gm, const StringModel& sm, int depth) {
  Walk w;
  std::vector<std::pair<OrbitKey, StringElement>> layer{{gm.highest(), sm.highest()}};
  w.geo_to_str.emplace(gm.highest(), sm.highest());
  w.str_to_geo.emplace(sm.highest(), gm.highest());
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<OrbitKey, StringElement>> next;
    for (const auto& [k, s] : layer)
      for (Vertex i = 0; i < gm.graph().vertex_count(); ++i) {
        OrbitKey k2 = *gm.f(k, i);
        StringElement s2 = *sm.f(s, i);
        auto [a, fresh_a] = w.geo_to_str.emplace(k2, s2);
        auto [b, fresh_b] = w.str_to_geo.emplace(s2, k2);
        if (fresh_a != fresh_b || !(a->second == s2) || !(b->second == k2)) w.consistent = false;
        if (fresh_a) next.emplace_back(k2, s2);
      }
    layer = std::move(next);
  }
  return w;
}

}  // namespace

TEST(Geometric, SamplesAreGenericConormalPoints) {
  GeometricModel gm(4, 0b101);
  const TypeA& ta = gm.type_a();
  for (const auto& key : ta.enumerate_orbits(DimVector({1, 2, 2, 1}), 0b101)) {
    auto data = gm.component(key);
    // the conormal fiber has dimension dim E - dim O, so each component has dimension dim E
    EXPECT_EQ(static_cast<long long>(data->fiber.cols()), dim_e(key.dims()) - ta.orbit_dimension(key));
    for (int s = 0; s < 3; ++s) {
      Representation x = gm.sample(key, s);
      for (const auto& m : moment_map(x)) EXPECT_TRUE(m.is_zero());
      EXPECT_TRUE(is_nilpotent(x));
      EXPECT_EQ(ta.key_of(x.restrict_to(ta.orientation(key.orientation))), key);
    }
  }
}

TEST(Geometric, HighestAndSingleVertex) {
  GeometricModel gm(3, 0);
  OrbitKey u = gm.highest();
  for (Vertex i = 0; i < 3; ++i) {
    EXPECT_EQ(gm.eps(u, i), ExtInt(0));
    EXPECT_FALSE(gm.e(u, i).has_value());
  }
  OrbitKey k = gm.f_pow(u, 1, 3);
  EXPECT_EQ(k.dims(), DimVector({0, 3, 0}));
  EXPECT_EQ(gm.eps_value(k, 1), 3);
  EXPECT_EQ(gm.eps_star(k, 1), 3);
  EXPECT_EQ(*gm.e(k, 1), gm.f_pow(u, 1, 2));
}

TEST(Geometric, SatisfiesCrystalAxioms) {
  for (std::uint64_t mask : {0ull, 1ull, 2ull, 3ull}) {
    GeometricModel gm(3, mask);
    auto sample = f_closure(gm, {gm.highest()}, 4);
    auto report = check_axioms(gm, sample);
    EXPECT_TRUE(report.ok()) << (report.violations.empty() ? "" : report.violations.front());
    EXPECT_GT(report.checked, 0u);
  }
}

TEST(Geometric, AllComponentsAreReached) {
  GeometricModel gm(3, 0b10);
  auto reached = f_closure(gm, {gm.highest()}, 5);
  for (const auto& dims : {DimVector({1, 1, 1}), DimVector({1, 2, 1}), DimVector({2, 1, 2}), DimVector({0, 2, 2})}) {
    if (dims.total() > 5) continue;
    auto keys = gm.components(dims);
    for (const auto& k : keys) EXPECT_NE(std::find(reached.begin(), reached.end(), k), reached.end()) << k.canonical();
  }
}

TEST(Geometric, IsomorphicToStringModel) {
  for (int r : {2, 3, 4}) {
    const int depth = r == 4 ? 4 : 5;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (r - 1)); ++mask) {
      GeometricModel gm(r, mask);
      StringModel sm(gm.type_a().graph());
      Walk w = walk(gm, sm, depth);
      ASSERT_TRUE(w.consistent) << "rank " << r << " mask " << mask;
      for (const auto& [k, s] : w.geo_to_str)
        for (Vertex i = 0; i < r; ++i) {
          ASSERT_EQ(gm.eps(k, i), sm.eps(s, i));
          ASSERT_EQ(gm.phi(k, i), sm.phi(s, i));
          ASSERT_EQ(gm.eps_star(k, i), sm.star_eps(s, i));
          auto ek = gm.e(k, i);
          auto es = sm.e(s, i);
          ASSERT_EQ(ek.has_value(), es.has_value());
          if (ek && w.geo_to_str.count(*ek)) {
            ASSERT_EQ(w.geo_to_str.at(*ek), *es);
          }
        }
      // every orbit of every weight up to the walk depth appears exactly once
      std::map<std::vector<int>, int> per_weight;
      for (const auto& [k, s] : w.geo_to_str) ++per_weight[k.dims().values()];
      for (const auto& [d, n] : per_weight) {
        if (DimVector(d).total() > depth) continue;
        EXPECT_EQ(static_cast<std::size_t>(n), gm.components(DimVector(d)).size());
      }
    }
  }
}

TEST(Geometric, StarOperatorsMatchTheStringModel) {
  GeometricModel gm(3, 0b01);
  StringModel sm(gm.type_a().graph());
  Walk w = walk(gm, sm, 4);
  ASSERT_TRUE(w.consistent);
  for (const auto& [k, s] : w.geo_to_str) {
    OrbitKey kt = gm.transpose(k);
    ASSERT_TRUE(w.geo_to_str.count(kt));
    EXPECT_EQ(w.geo_to_str.at(kt), sm.star(s));
    EXPECT_EQ(gm.transpose(gm.transpose(k)), k);
    for (Vertex i = 0; i < 3; ++i) {
      OrbitKey kf = gm.star_f(k, i);
      if (w.geo_to_str.count(kf)) {
        EXPECT_EQ(w.geo_to_str.at(kf), sm.star_f(s, i));
      }
      EXPECT_EQ(w.geo_to_str.at(gm.star_e_max(k, i)), sm.star_e_max(s, i));
    }
  }
}

TEST(Geometric, FPowersMatchDirectConstruction) {
  std::mt19937_64 rng(21);
  for (std::uint64_t mask : {0ull, 0b101ull, 0b011ull}) {
    GeometricModel gm(4, mask);
    auto sample = f_closure(gm, {gm.highest()}, 4);
    for (const auto& k : sample)
      for (Vertex i = 0; i < 4; ++i) {
        if (gm.eps_value(k, i) != 0) continue;
        int c = 1 + static_cast<int>(rng() % 2);
        OrbitKey via_star = gm.f_pow(k, i, c);
        EXPECT_EQ(via_star, oracle::direct_f_pow(gm, k, i, c)) << k.canonical() << " i=" << i;
        EXPECT_EQ(gm.eps_value(via_star, i), c);
        EXPECT_EQ(gm.e_max(via_star, i), k);
      }
  }
}

TEST(Geometric, FStarPowersRaiseEpsStarOnly) {
  GeometricModel gm(3, 0b11);
  for (const auto& k : f_closure(gm, {gm.highest()}, 4))
    for (Vertex i = 0; i < 3; ++i) {
      OrbitKey base = gm.star_e_max(k, i);
      EXPECT_EQ(gm.eps_star(base, i), 0);
      for (int c = 0; c <= 2; ++c) {
        OrbitKey up = gm.f_pow_star(base, i, c);
        EXPECT_EQ(gm.eps_star(up, i), c);
        EXPECT_EQ(up.dims()[i], base.dims()[i] + c);
      }
      EXPECT_THROW(gm.f_pow_star(gm.f_pow_star(base, i, 1), i, 1), DomainError);
    }
}

TEST(Geometric, ReorientationIsCompatibleWithTheCrystal) {
  std::mt19937_64 rng(4);
  GeometricModel a(4, 0b000), b(4, 0b110);
  for (int trial = 0; trial < 25; ++trial) {
    OperatorWord w(1 + rng() % 5);
    for (auto& v : w) v = static_cast<Vertex>(rng() % 4);
    OrbitKey ka = a.element_of_word(w), kb = b.element_of_word(w);
    EXPECT_EQ(a.reorient(ka, 0b110), kb);
    EXPECT_EQ(b.reorient(kb, 0b000), ka);
  }
}

TEST(Geometric, ReflectionAgreesWithTheCrystalFormula) {
  std::mt19937_64 rng(9);
  for (std::uint64_t mask : {0b00ull, 0b01ull, 0b10ull, 0b11ull}) {
    GeometricModel gm(3, mask);
    Orientation o = gm.type_a().orientation(mask);
    for (const auto& k : f_closure(gm, {gm.highest()}, 4))
      for (Vertex i = 0; i < 3; ++i) {
        if (!o.is_sink(gm.graph(), i) || gm.eps_value(k, i) != 0) continue;
        OrbitKey xi = gm.reflection_functor(k, i);
        EXPECT_EQ(xi.orientation, o.reflected(gm.graph(), i).bitmask());
        EXPECT_EQ(xi.weight(), gm.graph().reflect(i, k.weight()));
        EXPECT_EQ(gm.reorient(gm.reflection_by_crystal(k, i), xi.orientation), xi) << k.canonical() << " i=" << i;
      }
  }
  GeometricModel gm(3, 0);
  EXPECT_THROW(gm.reflection_functor(gm.highest(), 2), DomainError);
}

TEST(Geometric, ReflectionMatchesTheStringModel) {
  GeometricModel gm(3, 0b10);
  StringModel sm(gm.type_a().graph());
  Walk w = walk(gm, sm, 4);
  ASSERT_TRUE(w.consistent);
  for (const auto& [k, s] : w.geo_to_str)
    for (Vertex i = 0; i < 3; ++i) {
      if (gm.eps_value(k, i) != 0) continue;
      OrbitKey r = gm.reflection_by_crystal(k, i);
      if (w.geo_to_str.count(r)) {
        EXPECT_EQ(w.geo_to_str.at(r), sm.s_reflection(s, i));
      }
    }
}

TEST(Geometric, DeterministicAcrossInstances) {
  GeometricModel a(4, 0b010), b(4, 0b010);
  OperatorWord w{1, 2, 0, 3, 2, 1, 1};
  EXPECT_EQ(a.element_of_word(w), b.element_of_word(w));
  OrbitKey k = a.element_of_word(w);
  Representation xa = a.sample(k, 2), xb = b.sample(k, 2);
  EXPECT_TRUE(xa == xb);
  GeoConfig other;
  other.seed = 77;
  GeometricModel c(4, 0b010, other);
  EXPECT_EQ(c.element_of_word(w), k);
}

TEST(Geometric, RejectsBadInput) {
  EXPECT_THROW(GeometricModel(3, 0, GeoConfig{{4}, 1, 3, 32}), InputError);
  EXPECT_THROW(GeometricModel(3, 0, GeoConfig{{}, 1, 3, 32}), InputError);
  EXPECT_THROW(GeometricModel(3, 0, GeoConfig{{kMersenne31}, 1, 3, 5}), InputError);
  GeometricModel gm(3, 0);
  GeometricModel other(4, 0);
  EXPECT_THROW(gm.eps(other.highest(), 0), InputError);
  EXPECT_THROW(gm.f_pow_star(gm.highest(), 0, -1), InputError);
}
