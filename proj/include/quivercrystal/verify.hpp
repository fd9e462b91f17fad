#pragma once

// The A_5 pair whose IC sheaf has reducible singular support, and the n = 8 flag-pair example.

#include <array>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "schubert.hpp"
#include "string_model.hpp"

namespace qc::a5 {

inline constexpr std::uint64_t kOrientation = 0;  // every arrow k+1 -> k

/// f-words in composition order, vertices numbered from 1.
inline const std::vector<int> kWordB{2, 1, 3, 2, 4, 4, 3, 3, 2, 1, 5, 5, 4, 4, 3, 2};
inline const std::vector<int> kWordBPrime{2, 2, 1, 1, 3, 3, 4, 4, 3, 3, 2, 2, 5, 5, 4, 4};

inline OperatorWord zero_based(const std::vector<int>& word) {
  OperatorWord w;
  for (int v : word) w.push_back(v - 1);
  return w;
}

inline GraphPtr graph() { return std::make_shared<QuiverGraph>(QuiverGraph::type_a(5)); }

/// Point with maps tau_1..tau_4, tau_k : V_{k+1} -> V_k.
inline Representation point(const GraphPtr& g, const std::array<Matrix, 4>& tau, PrimeField f = PrimeField()) {
  Representation e(g, Orientation::from_bitmask(*g, kOrientation), DimVector({2, 4, 4, 4, 2}), f, PointKind::kE);
  for (int k = 0; k < 4; ++k) e.set_map(g->find_arrow(k + 1, k), tau[k]);
  return e;
}

inline Representation b0(const GraphPtr& g) {
  return point(g, {Matrix(2, 4, {1, 0, 0, 0, 0, 0, 1, 0}),
                   Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}),
                   Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}),
                   Matrix(4, 2, {0, 0, 1, 0, 0, 0, 0, 1})});
}

inline Representation b0_prime(const GraphPtr& g) {
  return point(g, {Matrix(2, 4, {0, 0, 1, 0, 0, 0, 0, 1}),
                   Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                   Matrix(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                   Matrix(4, 2, {0, 0, 0, 0, 1, 0, 0, 1})});
}

/// Blocks of a slice point: tau_1 = (X1, I), tau_2 = [I Y1; 0 Y2], tau_3 = [I Z1; 0 Z2], tau_4 = [0; I].
struct SliceBlocks {
  Matrix x1{2, 2}, y1{2, 2}, y2{2, 2}, z1{2, 2}, z2{2, 2};
};

inline Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  Matrix m(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      m(r, s) = a(r, s);
      m(r, s + 2) = b(r, s);
      m(r + 2, s) = c(r, s);
      m(r + 2, s + 2) = d(r, s);
    }
  return m;
}

inline Representation slice_point(const GraphPtr& g, const SliceBlocks& s, PrimeField f = PrimeField()) {
  Matrix i2 = Matrix::identity(2), z = Matrix(2, 2);
  Matrix t1(2, 4);
  for (int r = 0; r < 2; ++r) {
    t1(r, 0) = s.x1(r, 0);
    t1(r, 1) = s.x1(r, 1);
    t1(r, 2 + r) = 1;
  }
  Matrix t4(4, 2);
  t4(2, 0) = 1;
  t4(3, 1) = 1;
  return point(g, {t1, block2x2(i2, s.y1, z, s.y2), block2x2(i2, s.z1, z, s.z2), t4}, f);
}

/// Reads the blocks back if e has the slice shape.
inline std::optional<SliceBlocks> slice_blocks(const GraphPtr& g, const Representation& e) {
  const Matrix& t1 = e.map(g->find_arrow(1, 0));
  const Matrix& t2 = e.map(g->find_arrow(2, 1));
  const Matrix& t3 = e.map(g->find_arrow(3, 2));
  const Matrix& t4 = e.map(g->find_arrow(4, 3));
  auto is = [](const Matrix& m, int r0, int c0, bool identity) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (m(r0 + r, c0 + c) != ((identity && r == c) ? 1u : 0u)) return false;
    return true;
  };
  auto take = [](const Matrix& m, int r0, int c0) {
    Matrix b(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) b(r, c) = m(r0 + r, c0 + c);
    return b;
  };
  if (!is(t1, 0, 2, true) || !is(t2, 0, 0, true) || !is(t2, 2, 0, false) || !is(t3, 0, 0, true) ||
      !is(t3, 2, 0, false) || !is(t4, 0, 0, false) || !is(t4, 2, 0, true))
    return std::nullopt;
  return SliceBlocks{take(t1, 0, 0), take(t2, 0, 2), take(t2, 2, 2), take(t3, 0, 2), take(t3, 2, 2)};
}

/// Adjugate of a 2x2 matrix.
inline Matrix cof(const PrimeField& f, const Matrix& a) { return Matrix(2, 2, {a(1, 1), f.neg(a(0, 1)), f.neg(a(1, 0)), a(0, 0)}); }

/// The ten rank conditions on a slice point, evaluated from the block formulas, in order.
inline std::array<std::size_t, 10> slice_ranks(const PrimeField& f, const SliceBlocks& s) {
  Matrix i2 = Matrix::identity(2), z = Matrix(2, 2);
  auto mul = [&](const Matrix& a, const Matrix& b) { return multiply(f, a, b); };
  auto plus = [&](const Matrix& a, const Matrix& b) { return add(f, a, b); };
  auto h = [&](const Matrix& a, const Matrix& b) {
    std::array<Matrix, 2> blocks{a, b};
    return hstack(blocks, a.rows());
  };
  auto v = [&](const Matrix& a, const Matrix& b) {
    std::array<Matrix, 2> blocks{a, b};
    return vstack(blocks, a.cols());
  };
  Matrix x1y1y2 = plus(mul(s.x1, s.y1), s.y2);
  Matrix full = plus(mul(s.x1, s.z1), mul(x1y1y2, s.z2));
  Matrix zt = plus(s.z1, mul(s.y1, s.z2));
  Matrix y2z2 = mul(s.y2, s.z2);
  return {rank(f, h(s.x1, i2)),
          rank(f, h(s.x1, x1y1y2)),
          rank(f, h(s.x1, full)),
          rank(f, full),
          rank(f, block2x2(i2, s.y1, z, s.y2)),
          rank(f, block2x2(i2, zt, z, y2z2)),
          rank(f, v(zt, y2z2)),
          rank(f, block2x2(i2, s.z1, z, s.z2)),
          rank(f, v(s.z1, s.z2)),
          rank(f, v(z, i2))};
}

inline constexpr std::array<std::size_t, 10> kSliceRanks{2, 1, 1, 0, 3, 2, 1, 3, 1, 2};

/// A point of S: rank-one A_1..A_4 with A_{k+1} A_k = 0 cyclically, A_k = u_k c_k perp(u_{k-1})^T.
struct SPoint {
  std::array<std::array<std::uint32_t, 2>, 4> u{};
  std::array<std::uint32_t, 4> c{};
  std::array<Matrix, 4> a;
};

inline std::array<std::uint32_t, 2> perp(const PrimeField& f, const std::array<std::uint32_t, 2>& u) {
  return {f.neg(u[1]), u[0]};
}

template <class Rng>
SPoint sample_s(const PrimeField& f, Rng& rng) {
  SPoint p;
  for (;;) {
    for (auto& u : p.u) u = {f.random(rng), f.random(rng)};
    for (auto& c : p.c) c = f.random(rng);
    bool ok = true;
    for (int k = 0; k < 4; ++k) ok = ok && p.c[k] != 0 && (p.u[k][0] || p.u[k][1]);
    if (ok) break;
  }
  for (int k = 0; k < 4; ++k) {
    auto q = perp(f, p.u[(k + 3) % 4]);
    p.a[k] = Matrix(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) p.a[k](r, s) = f.mul(p.u[k][r], f.mul(p.c[k], q[s]));
  }
  return p;
}

/// S -> slice: Z~1 = A_1, X1 = A_2, Y2 = cof A_3, Z2 = cof A_4, Y1 free, Z1 = Z~1 - Y1 Z2.
inline SliceBlocks slice_of(const PrimeField& f, const SPoint& p, const Matrix& y1) {
  SliceBlocks s;
  s.x1 = p.a[1];
  s.y2 = cof(f, p.a[2]);
  s.z2 = cof(f, p.a[3]);
  s.y1 = y1;
  s.z1 = add(f, p.a[0], scale(f, f.neg(1), multiply(f, y1, s.z2)));
  return s;
}

/// Tangent vectors of S at p (images of the 12 parameter directions), as rows over the 16
/// coordinates (k, r, s) of M.
inline Matrix tangent_rows(const PrimeField& f, const SPoint& p) {
  Matrix t(12, 16);
  auto at = [](int k, int r, int s) { return static_cast<std::size_t>(k * 4 + r * 2 + s); };
  for (int k = 0; k < 4; ++k) {
    auto q = perp(f, p.u[(k + 3) % 4]);
    for (int rr = 0; rr < 2; ++rr) {
      std::size_t row = k * 3 + rr;
      // d/du_k[rr]: row rr of A_k, and the perp factor of A_{k+1}
      for (int s = 0; s < 2; ++s) t(row, at(k, rr, s)) = f.add(t(row, at(k, rr, s)), f.mul(p.c[k], q[s]));
      std::array<std::uint32_t, 2> e{0, 0};
      e[rr] = 1;
      auto dq = perp(f, e);
      const int k1 = (k + 1) % 4;
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          t(row, at(k1, r, s)) = f.add(t(row, at(k1, r, s)), f.mul(p.u[k1][r], f.mul(p.c[k1], dq[s])));
    }
    std::size_t row = k * 3 + 2;
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) t(row, at(k, r, s)) = f.mul(p.u[k][r], q[s]);
  }
  return t;
}

/// f = (t11 - t22)^2 + 4 t12 t21 for Theta = A*_1 A*_2 A*_3 A*_4, where A*_k[s][r] is the
/// coordinate dual to A_k[r][s].
inline std::uint32_t polar_value(const PrimeField& f, const std::vector<std::uint32_t>& covector) {
  auto dual = [&](int k) {
    Matrix m(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) m(s, r) = covector[k * 4 + r * 2 + s];
    return m;
  };
  Matrix th = multiply(f, multiply(f, dual(0), dual(1)), multiply(f, dual(2), dual(3)));
  std::uint32_t d = f.sub(th(0, 0), th(1, 1));
  return f.add(f.mul(d, d), f.mul(4, f.mul(th(0, 1), th(1, 0))));
}

struct Report {
  std::uint64_t seed = 0;
  std::uint32_t prime = 0;
  OrbitKey key_b, key_b_prime;
  bool word_b_matches = false;
  bool word_b_prime_matches = false;
  bool string_replay_matches = false;
  int slice_samples = 0;
  int slice_in_orbit = 0;
  int slice_products_vanish = 0;
  int slice_rank_conditions = 0;
  bool b0_prime_in_slice = false;
  bool b0_prime_in_orbit = false;
  int tangent_rank = 0;
  int polar_samples = 0;
  int polar_vanishing = 0;
  int control_samples = 0;
  int control_nonvanishing = 0;
  PairVerdict verdict;

  /// Everything except the reduction verdict.
  bool checks_ok() const {
    return word_b_matches && word_b_prime_matches && string_replay_matches && slice_in_orbit == slice_samples &&
           slice_products_vanish == slice_samples && slice_rank_conditions == slice_samples && b0_prime_in_slice &&
           b0_prime_in_orbit && tangent_rank == 8 && polar_vanishing == polar_samples && control_nonvanishing > 0;
  }
  bool ok() const { return checks_ok() && verdict.outcome == Outcome::kSurvives; }
};

inline Report verify(std::uint64_t seed = 0x5A5A2024ull, int samples = 100, GeoConfig geo = {},
                     CheckerConfig checker_cfg = {}) {
  Report rep;
  rep.seed = seed;
  const PrimeField f(geo.primes.front());
  rep.prime = f.modulus();
  auto model = std::make_shared<GeometricModel>(5, kOrientation, geo);
  const TypeA& ta = model->type_a();
  GraphPtr g = ta.graph();

  // (a) words against the printed points, and a replay through the string model
  rep.key_b = model->element_of_word(zero_based(kWordB));
  rep.key_b_prime = model->element_of_word(zero_based(kWordBPrime));
  rep.word_b_matches = rep.key_b == ta.key_of(b0(g));
  rep.word_b_prime_matches = rep.key_b_prime == ta.key_of(b0_prime(g));
  StringModel sm(g);
  rep.string_replay_matches =
      model->element_of_word(sm.word_of(sm.element_of_word(zero_based(kWordB)))) == rep.key_b &&
      model->element_of_word(sm.word_of(sm.element_of_word(zero_based(kWordBPrime)))) == rep.key_b_prime;

  // (b) S inside the slice
  std::mt19937_64 rng(seed);
  rep.slice_samples = samples;
  for (int n = 0; n < samples; ++n) {
    SPoint p = sample_s(f, rng);
    SliceBlocks s = slice_of(f, p, random_matrix(f, 2, 2, rng));
    Matrix zt = add(f, s.z1, multiply(f, s.y1, s.z2));
    if (multiply(f, cof(f, s.y2), s.x1).is_zero() && multiply(f, s.x1, zt).is_zero() &&
        multiply(f, s.y2, s.z2).is_zero() && multiply(f, zt, cof(f, s.z2)).is_zero())
      ++rep.slice_products_vanish;
    if (slice_ranks(f, s) == kSliceRanks) ++rep.slice_rank_conditions;
    if (ta.key_of(slice_point(g, s, f)) == rep.key_b) ++rep.slice_in_orbit;
  }
  Representation bp = b0_prime(g);
  auto blocks = slice_blocks(g, bp);
  rep.b0_prime_in_slice = blocks && blocks->x1.is_zero() && blocks->y1.is_zero() && blocks->y2.is_zero() &&
                          blocks->z1.is_zero() && blocks->z2.is_zero();
  rep.b0_prime_in_orbit = ta.key_of(bp) == rep.key_b_prime;

  // (c) conormal covectors to S lie on the polar hypersurface
  rep.polar_samples = samples;
  rep.tangent_rank = 8;
  for (int n = 0; n < samples; ++n) {
    SPoint p = sample_s(f, rng);
    Matrix t = tangent_rows(f, p);
    const int r = static_cast<int>(rank(f, t));
    if (r != 8) rep.tangent_rank = r;
    Matrix normal = nullspace(f, t);  // 16 x (16 - r)
    std::vector<std::uint32_t> xi(16, 0);
    for (std::size_t col = 0; col < normal.cols(); ++col) {
      std::uint32_t w = f.random(rng);
      for (std::size_t k = 0; k < 16; ++k) xi[k] = f.add(xi[k], f.mul(w, normal(k, col)));
    }
    if (polar_value(f, xi) == 0) ++rep.polar_vanishing;
  }
  rep.control_samples = samples;
  for (int n = 0; n < samples; ++n) {
    std::vector<std::uint32_t> xi(16);
    for (auto& x : xi) x = f.random(rng);
    if (polar_value(f, xi) != 0) ++rep.control_nonvanishing;
  }

  // (d) the calculus cannot separate the pair
  SsChecker checker(model, checker_cfg);
  rep.verdict = checker.check_pair(rep.key_b, rep.key_b_prime);
  return rep;
}

}  // namespace qc::a5

namespace qc::a8 {

inline const std::vector<int> kWordW{1, 3, 2, 4, 3, 5, 4, 3, 2, 1, 6, 7, 6, 5, 4, 3};
inline const std::vector<int> kWordWPrime{1, 3, 4, 3, 5, 4, 3, 7};

inline const std::vector<std::vector<int>> kTableZ1{{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}};
inline const std::vector<std::vector<int>> kTableZ2{{2, 0, 0, 0}, {0, 0, 2, 0}, {0, 2, 0, 0}, {0, 0, 0, 2}};

struct Report {
  Permutation w, w_prime;
  OrbitKey key_w, key_w_prime;
  std::vector<std::vector<int>> table_w, table_w_prime;
  bool table_w_matches = false;
  bool table_w_prime_matches = false;
  PairVerdict verdict;
  std::uint64_t seed = 0;
  std::uint32_t prime = 0;

  bool ok() const { return table_w_matches && table_w_prime_matches && verdict.outcome == Outcome::kSurvives; }
};

inline Report verify(GeoConfig geo = {}, CheckerConfig checker_cfg = {}) {
  Report rep;
  rep.seed = geo.seed;
  rep.prime = geo.primes.front();
  rep.w = permutation_of_word(8, kWordW);
  rep.w_prime = permutation_of_word(8, kWordWPrime);
  rep.key_w = schubert_orbit(8, rep.w);
  rep.key_w_prime = schubert_orbit(8, rep.w_prime);
  rep.table_w = gr_table(rep.key_w, 2);
  rep.table_w_prime = gr_table(rep.key_w_prime, 2);
  rep.table_w_matches = rep.table_w == kTableZ1;
  rep.table_w_prime_matches = rep.table_w_prime == kTableZ2;
  auto model = std::make_shared<GeometricModel>(15, classical_orientation(8), geo);
  SsChecker checker(model, checker_cfg);
  rep.verdict = checker.check_pair(rep.key_w, rep.key_w_prime);
  return rep;
}

}  // namespace qc::a8
