#include <gtest/gtest.h>

#include <random>

#include "quivercrystal/field.hpp"

using namespace qc;

TEST(PrimeField, MersenneReductionMatchesPlainModulus) {
  PrimeField f;
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10000; ++k) {
    std::uint32_t a = f.random(rng), b = f.random(rng);
    std::uint64_t expected = (std::uint64_t{a} * b) % kMersenne31;
    ASSERT_EQ(f.mul(a, b), expected);
  }
  EXPECT_EQ(f.mul(kMersenne31 - 1, kMersenne31 - 1), 1u);
}

TEST(PrimeField, InverseAndSignedLift) {
  for (std::uint32_t p : {2u, 3u, 101u, kMersenne31, kLargestPrime32}) {
    PrimeField f(p);
    for (std::uint32_t a = 1; a < std::min<std::uint32_t>(p, 50); ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  }
  PrimeField f(101);
  EXPECT_EQ(f.from_int(-1), 100u);
  EXPECT_EQ(f.to_signed(100), -1);
  EXPECT_THROW(PrimeField(100), InputError);
  EXPECT_THROW(f.inv(0), DomainError);
}

TEST(Matrix, RankNullspaceAndInverse) {
  PrimeField f(kMersenne31);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6, k = rng() % (std::min(rows, cols) + 1);
    // product of random (rows x k) and (k x cols) has rank k with overwhelming probability
    Matrix m = multiply(f, random_matrix(f, rows, k, rng), random_matrix(f, k, cols, rng));
    EXPECT_EQ(rank(f, m), k);
    Matrix ns = nullspace(f, m);
    EXPECT_EQ(ns.cols(), cols - k);
    EXPECT_TRUE(multiply(f, m, ns).is_zero());
    Matrix cb = column_basis(f, m);
    EXPECT_EQ(cb.cols(), k);
    if (k > 0) {
      Matrix l = left_inverse(f, cb);
      EXPECT_EQ(multiply(f, l, cb), Matrix::identity(k));
    }
  }
  Matrix a = random_invertible(f, 5, rng);
  EXPECT_EQ(multiply(f, inverse(f, a), a), Matrix::identity(5));
}

TEST(Matrix, SmallFieldRank) {
  PrimeField f(2);
  Matrix m(3, 3, {1, 1, 0, 0, 1, 1, 1, 0, 1});
  EXPECT_EQ(rank(f, m), 2u);
  PrimeField g(3);
  EXPECT_EQ(rank(g, m), 3u);
}

TEST(Matrix, StackingAndShapes) {
  PrimeField f;
  std::vector<Matrix> blocks{Matrix(2, 1, {1, 2}), Matrix(2, 2, {3, 4, 5, 6})};
  Matrix h = hstack(blocks, 2);
  EXPECT_EQ(h, Matrix(2, 3, {1, 3, 4, 2, 5, 6}));
  Matrix v = vstack(std::vector<Matrix>{transpose(blocks[0]), Matrix(1, 2, {7, 8})}, 2);
  EXPECT_EQ(v, Matrix(2, 2, {1, 2, 7, 8}));
  EXPECT_THROW(multiply(f, Matrix(2, 3), Matrix(2, 3)), InputError);
  EXPECT_EQ(rank(f, Matrix(0, 4)), 0u);
  EXPECT_EQ(nullspace(f, Matrix(0, 3)).cols(), 3u);
}
