#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "quivercrystal/orbits.hpp"

using namespace qc;

namespace {

// All dimension vectors of length r with entries summing to at most total.
void dims_up_to(int r, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == r) {
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= total; ++d) {
    cur.push_back(d);
    dims_up_to(r, total - d, cur, out);
    cur.pop_back();
  }
}

long long dim_e(const TypeA& ta, const DimVector& d) {
  long long s = 0;
  for (int k = 0; k + 1 < ta.rank(); ++k) s += static_cast<long long>(d[k]) * d[k + 1];
  return s;
}

}  // namespace

TEST(Multisegments, SmallCounts) {
  EXPECT_EQ(enumerate_multisegments(DimVector({3})).size(), 1u);
  EXPECT_EQ(enumerate_multisegments(DimVector({1, 1})).size(), 2u);
  // (1,1,1): every set partition of the path into consecutive blocks, 4 of them
  EXPECT_EQ(enumerate_multisegments(DimVector({1, 1, 1})).size(), 4u);
  EXPECT_EQ(enumerate_multisegments(DimVector({0, 0})).size(), 1u);
  EXPECT_THROW(enumerate_multisegments(DimVector({2, 4, 4, 4, 2}), 10), InputError);
}

TEST(Multisegments, RankTableRoundTrip) {
  for (const auto& ms : enumerate_multisegments(DimVector({2, 3, 2, 1}))) {
    EXPECT_EQ(Multisegment::from_rank_table(ms.rank_table()), ms);
    EXPECT_EQ(ms.dims(), DimVector({2, 3, 2, 1}));
  }
  RankTable bad(2);
  bad.set(0, 0, 1);
  bad.set(1, 1, 1);
  bad.set(0, 1, 2);
  EXPECT_THROW(Multisegment::from_rank_table(bad), InputError);
}

TEST(Representatives, ReproduceTheirTables) {
  std::mt19937_64 rng(5);
  for (int r = 1; r <= 5; ++r) {
    TypeA ta(r);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<int> d(r);
      for (auto& x : d) x = static_cast<int>(rng() % 3);
      std::uint64_t mask = rng() % (std::uint64_t{1} << (r - 1));
      for (const auto& key : ta.enumerate_orbits(DimVector(d), mask))
        ASSERT_EQ(path_rank_table(ta.representative(key)), key.ranks);
    }
  }
}

TEST(Orbits, A1AndA2) {
  TypeA a1(1);
  EXPECT_EQ(a1.enumerate_orbits(DimVector({4}), 0).size(), 1u);
  TypeA a2(2);
  auto census = oracle::brute_force_orbits(a2.graph(), a2.orientation(1), DimVector({1, 1}), 2);
  EXPECT_EQ(census.orbits, 2u);
  EXPECT_EQ(a2.enumerate_orbits(DimVector({1, 1}), 1).size(), 2u);
}

TEST(Orbits, A5ContainsThePrintedPoints) {
  TypeA ta(5);
  std::uint64_t left = Orientation::equioriented(*ta.graph(), false).bitmask();
  auto keys = ta.enumerate_orbits(DimVector({2, 4, 4, 4, 2}), left);
  Representation b0 = ta.representative(keys.front());
  auto g = ta.graph();
  auto set = [&](Representation& b, int k, Matrix m) { b.set_map(g->find_arrow(k + 1, k), std::move(m)); };
  set(b0, 0, Matrix(2, 4, {1, 0, 0, 0, 0, 0, 1, 0}));
  set(b0, 1, Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}));
  set(b0, 2, Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}));
  set(b0, 3, Matrix(4, 2, {0, 0, 1, 0, 0, 0, 0, 1}));
  Representation b1 = b0;
  set(b1, 0, Matrix(2, 4, {0, 0, 1, 0, 0, 0, 0, 1}));
  set(b1, 1, Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  set(b1, 2, Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  set(b1, 3, Matrix(4, 2, {0, 0, 0, 0, 1, 0, 0, 1}));
  OrbitKey k0 = ta.key_of(b0), k1 = ta.key_of(b1);
  EXPECT_NE(std::find(keys.begin(), keys.end(), k0), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), k1), keys.end());
  EXPECT_NE(k0, k1);
}

TEST(Orbits, DimensionsAreConsistent) {
  std::mt19937_64 rng(8);
  for (int r = 2; r <= 4; ++r) {
    TypeA ta(r);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> d(r);
      for (auto& x : d) x = 1 + static_cast<int>(rng() % 3);
      std::uint64_t mask = rng() % (std::uint64_t{1} << (r - 1));
      long long best = -1;
      int at_max = 0;
      for (const auto& key : ta.enumerate_orbits(DimVector(d), mask)) {
        long long dim = ta.orbit_dimension(key);
        EXPECT_GE(dim, 0);
        if (dim > best) {
          best = dim;
          at_max = 1;
        } else if (dim == best) {
          ++at_max;
        }
      }
      // Dynkin quivers have a unique open orbit
      EXPECT_EQ(best, dim_e(ta, DimVector(d)));
      EXPECT_EQ(at_max, 1);
    }
  }
}

TEST(Orbits, MatchBruteForceCensusUpToRankFour) {
  for (int r = 1; r <= 4; ++r) {
    TypeA ta(r);
    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    dims_up_to(r, 5, cur, all);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (r - 1)); ++mask)
      for (const auto& d : all)
        for (std::uint32_t p : {2u, 3u}) {
          DimVector dims(d);
          auto census = oracle::brute_force_orbits(ta.graph(), ta.orientation(mask), dims, p);
          auto keys = ta.enumerate_orbits(dims, mask);
          ASSERT_TRUE(census.table_constant_on_orbits);
          ASSERT_EQ(census.orbits, keys.size());
          ASSERT_EQ(census.table_classes, census.orbits);
          for (const auto& key : keys) {
            ASSERT_TRUE(census.tables.count(key.ranks));
            ASSERT_EQ(static_cast<long double>(census.orbit_size.at(key.ranks)),
                      oracle::predicted_orbit_size(ta, key, static_cast<int>(p)));
          }
        }
  }
}
