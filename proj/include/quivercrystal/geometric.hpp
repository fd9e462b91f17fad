#pragma once

// Geometric B(infinity): irreducible components of the nilpotent variety on a type-A quiver,
// labelled by orbit keys. Crystal data are read off sampled generic points of each component
// (the conormal bundle of the labelling orbit) over a large prime field.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "crystal.hpp"
#include "memo.hpp"
#include "orbits.hpp"

namespace qc {

class GenericityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeoConfig {
  std::vector<std::uint32_t> primes{kMersenne31, kLargestPrime32};  // escalation order
  std::uint64_t seed = 0x51C0FFEE2024ull;
  int batch = 3;
  int max_samples = 32;  // per component and prime before escalating
};

/// 64-bit FNV-1a over a sequence of byte ranges.
class Fnv1a {
 public:
  Fnv1a& bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h_ ^= p[k];
      h_ *= 0x100000001b3ull;
    }
    return *this;
  }
  Fnv1a& u64(std::uint64_t v) { return bytes(&v, sizeof v); }
  Fnv1a& str(const std::string& s) { return u64(s.size()).bytes(s.data(), s.size()); }
  std::uint64_t value() const noexcept { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

namespace geo {

/// Stacked incoming arrows at i as one map (+)_{in t = i} V_out(t) -> V_i.
inline Matrix stacked_in(const Representation& x, Vertex i) {
  std::vector<Matrix> blocks;
  for (ArrowId t : x.graph().incoming(i))
    if (x.has(t)) blocks.push_back(x.map(t));
  return hstack(blocks, x.dims()[i]);
}

/// Stacked outgoing arrows at i as one map V_i -> (+)_{out t = i} V_in(t).
inline Matrix stacked_out(const Representation& x, Vertex i) {
  std::vector<Matrix> blocks;
  for (ArrowId t : x.graph().outgoing(i))
    if (x.has(t)) blocks.push_back(x.map(t));
  return vstack(blocks, x.dims()[i]);
}

inline int eps_at(const Representation& x, Vertex i) {
  return x.dims()[i] - static_cast<int>(rank(x.field(), stacked_in(x, i)));
}

inline int eps_star_at(const Representation& x, Vertex i) {
  return x.dims()[i] - static_cast<int>(rank(x.field(), stacked_out(x, i)));
}

/// Copy of x with V_i replaced by a space of dimension new_dim; arrows at i are supplied by the caller.
inline Representation resized(const Representation& x, Vertex i, int new_dim) {
  Representation y(x.graph_ptr(), x.orientation(), x.dims().with(i, new_dim), x.field(), x.kind());
  const auto& g = x.graph();
  for (ArrowId t = 0; t < g.arrow_count(); ++t)
    if (x.has(t) && g.arrow(t).in != i && g.arrow(t).out != i) y.set_map(t, x.map(t));
  return y;
}

/// Restriction of x to the subrepresentation whose i-th space is the image of all incoming arrows.
inline Representation e_max_at(const Representation& x, Vertex i) {
  const auto& g = x.graph();
  const auto& f = x.field();
  Matrix q = column_basis(f, stacked_in(x, i));
  Matrix l = q.cols() ? left_inverse(f, q) : Matrix(0, x.dims()[i]);
  Representation y = resized(x, i, static_cast<int>(q.cols()));
  for (ArrowId t : g.incoming(i))
    if (x.has(t)) y.set_map(t, multiply(f, l, x.map(t)));
  for (ArrowId t : g.outgoing(i))
    if (x.has(t)) y.set_map(t, multiply(f, x.map(t), q));
  return y;
}

/// (B*)_t = transpose(B_bar(t)).
inline Representation transpose_point(const Representation& x) {
  Representation y(x.graph_ptr(), x.orientation(), x.dims(), x.field(), PointKind::kX);
  for (ArrowId t = 0; t < x.graph().arrow_count(); ++t) y.set_map(t, transpose(x.map(x.graph().bar(t))));
  return y;
}

/// Generic point of (f_i^*)^c of the component through xbar, which must have eps_i^* = 0.
/// V_i grows to V̄_i (+) F^c; arrows out of i become [B̄ | 0] and arrows into i are
/// sign(t) Phi iota_t with Phi = [Psi; K], K random with K beta = 0, where beta stacks the
/// arrows out of i and Psi = (sign(t) B̄_bar(t)).
template <class Rng>
Representation f_star_at(const Representation& xbar, Vertex i, int c, Rng& rng) {
  const auto& g = xbar.graph();
  const auto& f = xbar.field();
  const int di = xbar.dims()[i];
  std::vector<ArrowId> outs;
  for (ArrowId t : g.outgoing(i)) outs.push_back(t);
  std::size_t tdim = 0;
  std::vector<std::size_t> toff;
  for (ArrowId t : outs) {
    toff.push_back(tdim);
    tdim += xbar.dims()[g.arrow(t).in];
  }
  Matrix beta = stacked_out(xbar, i);  // T x di
  // rows of K: random vectors in the left nullspace of beta
  Matrix left_null = nullspace(f, transpose(beta));  // T x m, columns span {k : k^T beta = 0}
  Matrix k(c, tdim);
  for (int r = 0; r < c; ++r) {
    for (std::size_t col = 0; col < left_null.cols(); ++col) {
      std::uint32_t w = f.random(rng);
      if (!w) continue;
      for (std::size_t s = 0; s < tdim; ++s) k(r, s) = f.add(k(r, s), f.mul(w, left_null(s, col)));
    }
  }
  Representation y = resized(xbar, i, di + c);
  for (std::size_t n = 0; n < outs.size(); ++n) {
    ArrowId t = outs[n];
    const Matrix& b = xbar.map(t);
    Matrix widened(b.rows(), di + c);
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t col = 0; col < b.cols(); ++col) widened(r, col) = b(r, col);
    y.set_map(t, std::move(widened));
    // bar(t) : V_j -> V_i is sign(t) Phi iota_t = [B̄_bar(t); sign(t) K iota_t]
    ArrowId tb = g.bar(t);
    const Matrix& bb = xbar.map(tb);
    const std::size_t dj = bb.cols();
    Matrix into(di + c, dj);
    for (int r = 0; r < di; ++r)
      for (std::size_t col = 0; col < dj; ++col) into(r, col) = bb(r, col);
    const bool negative = xbar.orientation().sign(t) < 0;
    for (int r = 0; r < c; ++r)
      for (std::size_t col = 0; col < dj; ++col) {
        std::uint32_t v = k(r, toff[n] + col);
        into(di + r, col) = negative ? f.neg(v) : v;
      }
    y.set_map(tb, std::move(into));
  }
  return y;
}

/// Reflection at a sink i of the Omega part: V_i becomes the kernel of the sum map and the
/// reversed arrows are the coordinate projections of that kernel.
inline Representation reflect_at_sink(const Representation& e, Vertex i) {
  const auto& g = e.graph();
  const auto& f = e.field();
  if (e.kind() != PointKind::kE) throw DomainError("reflection acts on E-points");
  if (!e.orientation().is_sink(g, i)) throw DomainError("reflection needs vertex " + std::to_string(i + 1) + " to be a sink");
  std::vector<ArrowId> ins;
  for (ArrowId t : g.incoming(i))
    if (e.orientation().contains(t)) ins.push_back(t);
  std::vector<Matrix> blocks;
  for (ArrowId t : ins) blocks.push_back(e.map(t));
  Matrix sum = hstack(blocks, e.dims()[i]);
  Matrix ker = nullspace(f, sum);
  Orientation o2 = e.orientation().reflected(g, i);
  Representation y(e.graph_ptr(), o2, e.dims().with(i, static_cast<int>(ker.cols())), f, PointKind::kE);
  for (ArrowId t : o2.arrows())
    if (g.arrow(t).in != i && g.arrow(t).out != i) y.set_map(t, e.map(t));
  std::size_t off = 0;
  for (ArrowId t : ins) {
    const std::size_t dj = e.dims()[g.arrow(t).out];
    Matrix proj(dj, ker.cols());
    for (std::size_t r = 0; r < dj; ++r)
      for (std::size_t col = 0; col < ker.cols(); ++col) proj(r, col) = ker(off + r, col);
    y.set_map(g.bar(t), std::move(proj));
    off += dj;
  }
  return y;
}

}  // namespace geo

/// Immutable per-component data: representative, conormal fiber basis, generic eps and eps^*.
struct ComponentData {
  Representation representative;
  Matrix fiber;                           // columns span the conormal fiber at the representative
  std::vector<std::pair<ArrowId, std::pair<std::size_t, std::size_t>>> layout;  // opposite arrow -> (offset, cols)
  std::vector<int> eps;
  std::vector<int> eps_star;
  int samples_used = 0;
};

class GeometricModel {
 public:
  using value_type = OrbitKey;

  GeometricModel(int rank, std::uint64_t orientation_mask, GeoConfig cfg = {})
      : ta_(std::make_shared<TypeA>(rank)), mask_(orientation_mask), cfg_(std::move(cfg)) {
    if (cfg_.primes.empty()) throw InputError("at least one prime is required");
    for (auto p : cfg_.primes) PrimeField check(p);
    if (cfg_.batch < 1 || cfg_.max_samples < 2 * cfg_.batch) throw InputError("sample cap must allow two batches");
  }

  const QuiverGraph& graph() const { return *ta_->graph(); }
  const TypeA& type_a() const { return *ta_; }
  std::uint64_t orientation_mask() const noexcept { return mask_; }
  const GeoConfig& config() const noexcept { return cfg_; }

  OrbitKey highest() const { return OrbitKey{ta_->rank(), mask_, RankTable(ta_->rank())}; }

  // ---- crystal interface ----

  Weight wt(const OrbitKey& k) const { return k.weight(); }
  ExtInt eps(const OrbitKey& k, Vertex i) const { return ExtInt(eps_value(k, i)); }
  ExtInt phi(const OrbitKey& k, Vertex i) const { return eps(k, i) + graph().pairing(i, k.weight()); }

  std::optional<OrbitKey> e(const OrbitKey& k, Vertex i) const {
    int c = eps_value(k, i);
    if (c == 0) return std::nullopt;
    return f_pow(e_max(k, i), i, c - 1);
  }
  std::optional<OrbitKey> f(const OrbitKey& k, Vertex i) const {
    int c = eps_value(k, i);
    return f_pow(e_max(k, i), i, c + 1);
  }

  // ---- component data ----

  int eps_value(const OrbitKey& k, Vertex i) const { return component(k)->eps.at(i); }
  int eps_star(const OrbitKey& k, Vertex i) const { return component(k)->eps_star.at(i); }
  std::vector<int> eps_vector(const OrbitKey& k) const { return component(k)->eps; }
  std::vector<int> eps_star_vector(const OrbitKey& k) const { return component(k)->eps_star; }

  std::shared_ptr<const ComponentData> component(const OrbitKey& k) const {
    check_key(k);
    return with_escalation([&](std::size_t level) { return component_at(k, level); });
  }

  /// Generic point number s of the component (deterministic in the configured seed).
  Representation sample(const OrbitKey& k, int s, std::size_t level = 0) const {
    return sample_from(*component_at(k, level), k, s, level);
  }

  // ---- operators on components ----

  OrbitKey e_max(const OrbitKey& k, Vertex i) const {
    graph().check_vertex(i);
    if (eps_value(k, i) == 0) return k;
    return memo_op(kOpEmax, k, i, 0, [&](std::size_t level) {
      auto data = component_at(k, level);
      const int c = data->eps[i];
      return identify(k, level, k.orientation, [&](const Representation& x, std::mt19937_64&) -> std::optional<Representation> {
        if (geo::eps_at(x, i) != c) return std::nullopt;
        return geo::e_max_at(x, i);
      });
    });
  }

  OrbitKey f_pow_star(const OrbitKey& k, Vertex i, int c) const {
    graph().check_vertex(i);
    if (c < 0) throw InputError("negative exponent");
    if (eps_star(k, i) != 0) throw DomainError("f_i^* powers need eps_i^* = 0");
    if (c == 0) return k;
    return memo_op(kOpFstar, k, i, c, [&](std::size_t level) {
      return identify(k, level, k.orientation, [&](const Representation& x, std::mt19937_64& rng) -> std::optional<Representation> {
        if (geo::eps_star_at(x, i) != 0) return std::nullopt;
        return geo::f_star_at(x, i, c, rng);
      });
    });
  }

  OrbitKey transpose(const OrbitKey& k) const {
    return memo_op(kOpTranspose, k, 0, 0, [&](std::size_t level) {
      return identify(k, level, k.orientation, [&](const Representation& x, std::mt19937_64&) -> std::optional<Representation> {
        return geo::transpose_point(x);
      });
    });
  }

  /// The same component labelled by an orbit for another orientation.
  OrbitKey reorient(const OrbitKey& k, std::uint64_t mask) const {
    if (mask == k.orientation) return k;
    return memo_op(kOpReorient, k, static_cast<int>(mask), 0, [&](std::size_t level) {
      return identify(k, level, mask, [&](const Representation& x, std::mt19937_64&) -> std::optional<Representation> {
        return x;
      });
    });
  }

  /// f_i^c on a component with eps_i = 0, as * f_i^{*c} *.
  OrbitKey f_pow(const OrbitKey& k, Vertex i, int c) const {
    if (c == 0) return k;
    if (eps_value(k, i) != 0) throw DomainError("f_i powers are taken from eps_i = 0");
    return transpose(f_pow_star(transpose(k), i, c));
  }

  OrbitKey star_e_max(const OrbitKey& k, Vertex i) const { return transpose(e_max(transpose(k), i)); }

  OrbitKey star_f(const OrbitKey& k, Vertex i) const {
    int c = eps_star(k, i);
    return f_pow_star(star_e_max(k, i), i, c + 1);
  }

  std::optional<OrbitKey> star_e(const OrbitKey& k, Vertex i) const {
    int c = eps_star(k, i);
    if (c == 0) return std::nullopt;
    return f_pow_star(star_e_max(k, i), i, c - 1);
  }

  /// The reflection Xi at a sink i, applied to the orbit representative; the result is labelled
  /// for the reflected orientation.
  OrbitKey reflection_functor(const OrbitKey& k, Vertex i) const {
    check_key(k);
    Representation e = ta_->representative(k, PrimeField(cfg_.primes.front()));
    return ta_->key_of(geo::reflect_at_sink(e, i));
  }

  /// S_i(b) = f_i^{phi_i^*(b)} (e_i^*)^max b, labelled for the key's own orientation.
  OrbitKey reflection_by_crystal(const OrbitKey& k, Vertex i) const {
    if (eps_value(k, i) != 0) throw DomainError("reflection S_i needs eps_i = 0");
    int phi_star = eps_star(k, i) + graph().pairing(i, k.weight());
    if (phi_star < 0) throw DomainError("negative phi_i^*");
    return f_pow(star_e_max(k, i), i, phi_star);
  }

  std::vector<OrbitKey> components(const DimVector& dims) const { return ta_->enumerate_orbits(dims, mask_); }

  OrbitKey element_of_word(const OperatorWord& w) const {
    OrbitKey k = highest();
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      graph().check_vertex(*it);
      k = *f(k, *it);
    }
    return k;
  }

  std::size_t cached_components() const { return components_.size(); }

 private:
  enum OpTag : int { kOpEmax = 1, kOpFstar = 2, kOpTranspose = 3, kOpReorient = 4 };
  using OpKey = std::tuple<int, std::size_t, OrbitKey, int, int>;

  void check_key(const OrbitKey& k) const {
    if (k.rank != ta_->rank()) throw InputError("orbit key of the wrong rank");
  }

  template <class Fn>
  std::invoke_result_t<Fn&, std::size_t> with_escalation(Fn&& fn) const {
    for (std::size_t level = 0;; ++level) {
      try {
        return fn(level);
      } catch (const GenericityError&) {
        if (level + 1 >= cfg_.primes.size()) throw;
      }
    }
  }

  template <class Fn>
  OrbitKey memo_op(int tag, const OrbitKey& k, int i, int c, Fn&& compute) const {
    check_key(k);
    return with_escalation([&](std::size_t level) {
      OpKey key{tag, level, k, i, c};
      if (auto hit = ops_.find(key)) return *hit;
      return ops_.insert(key, compute(level));
    });
  }

  std::uint64_t seed_for(const OrbitKey& k, std::size_t level, const char* tag, std::uint64_t a, std::uint64_t b) const {
    return Fnv1a().u64(cfg_.seed).u64(cfg_.primes[level]).str(k.canonical()).str(tag).u64(a).u64(b).value();
  }

  std::shared_ptr<const ComponentData> component_at(const OrbitKey& k, std::size_t level) const {
    auto key = std::make_pair(level, k);
    if (auto hit = components_.find(key)) return *hit;
    return components_.insert(key, build_component(k, level));
  }

  std::shared_ptr<const ComponentData> build_component(const OrbitKey& k, std::size_t level) const {
    auto data = std::make_shared<ComponentData>(ComponentData{ta_->representative(k, PrimeField(cfg_.primes[level])), {}, {}, {}, {}, 0});
    const Representation& b = data->representative;
    const auto& g = b.graph();
    const auto& f = b.field();
    const Orientation& o = b.orientation();
    // unknowns: entries of C_s for s in the opposite half, row-major
    std::vector<std::size_t> off(g.arrow_count(), 0);
    std::size_t unknowns = 0;
    for (ArrowId s = 0; s < g.arrow_count(); ++s)
      if (!o.contains(s)) {
        off[s] = unknowns;
        std::size_t cols = b.dims()[g.arrow(s).out];
        data->layout.push_back({s, {unknowns, cols}});
        unknowns += std::size_t(b.dims()[g.arrow(s).in]) * cols;
      }
    std::vector<std::size_t> row_off(g.vertex_count() + 1, 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) row_off[v + 1] = row_off[v] + std::size_t(b.dims()[v]) * b.dims()[v];
    Matrix sys(row_off.back(), unknowns);
    for (Vertex kv = 0; kv < g.vertex_count(); ++kv) {
      const std::size_t dk = b.dims()[kv];
      for (ArrowId t : g.outgoing(kv)) {
        const Arrow& ar = g.arrow(t);
        const std::size_t dj = b.dims()[ar.in];
        if (o.contains(t)) {
          // + C_bar(t) B_t, C_bar(t) is dk x dj
          const Matrix& bt = b.map(t);
          const ArrowId cb = g.bar(t);
          for (std::size_t r = 0; r < dk; ++r)
            for (std::size_t c = 0; c < dk; ++c)
              for (std::size_t s = 0; s < dj; ++s)
                if (bt(s, c)) {
                  auto& cell = sys(row_off[kv] + r * dk + c, off[cb] + r * dj + s);
                  cell = f.add(cell, bt(s, c));
                }
        } else {
          // - B_bar(t) C_t, C_t is dj x dk
          const Matrix& bb = b.map(g.bar(t));
          for (std::size_t r = 0; r < dk; ++r)
            for (std::size_t c = 0; c < dk; ++c)
              for (std::size_t s = 0; s < dj; ++s)
                if (bb(r, s)) {
                  auto& cell = sys(row_off[kv] + r * dk + c, off[t] + s * dk + c);
                  cell = f.sub(cell, bb(r, s));
                }
        }
      }
    }
    data->fiber = nullspace(f, sys);

    // generic eps / eps^*: per-batch minima, accepted once two consecutive batches agree
    const int r = g.vertex_count();
    std::vector<int> prev_eps, prev_star;
    int s = 0;
    while (s + cfg_.batch <= cfg_.max_samples) {
      std::vector<int> be(r, 1 << 30), bs(r, 1 << 30);
      for (int n = 0; n < cfg_.batch; ++n, ++s) {
        Representation x = sample_from(*data, k, s, level);
        for (Vertex i = 0; i < r; ++i) {
          be[i] = std::min(be[i], geo::eps_at(x, i));
          bs[i] = std::min(bs[i], geo::eps_star_at(x, i));
        }
      }
      if (!prev_eps.empty() && be == prev_eps && bs == prev_star) {
        data->eps = be;
        data->eps_star = bs;
        data->samples_used = s;
        return data;
      }
      prev_eps = std::move(be);
      prev_star = std::move(bs);
    }
    throw GenericityError("eps values did not stabilize for component " + k.canonical());
  }

  Representation sample_from(const ComponentData& data, const OrbitKey& k, int s, std::size_t level) const {
    const Representation& b = data.representative;
    const auto& f = b.field();
    std::mt19937_64 rng(seed_for(k, level, "sample", static_cast<std::uint64_t>(s), 0));
    std::vector<std::uint32_t> coeff(data.fiber.cols());
    for (auto& w : coeff) w = f.random(rng);
    std::vector<std::uint32_t> c(data.fiber.rows(), 0);
    for (std::size_t row = 0; row < data.fiber.rows(); ++row) {
      std::uint32_t acc = 0;
      auto fr = data.fiber.row(row);
      for (std::size_t col = 0; col < fr.size(); ++col)
        if (fr[col]) acc = f.add(acc, f.mul(fr[col], coeff[col]));
      c[row] = acc;
    }
    std::vector<std::pair<ArrowId, Matrix>> opposite;
    const auto& g = b.graph();
    for (const auto& [t, lay] : data.layout) {
      const std::size_t rows = b.dims()[g.arrow(t).in];
      const std::size_t cols = lay.second;
      Matrix m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t cc = 0; cc < cols; ++cc) m(r, cc) = c[lay.first + r * cols + cc];
      opposite.emplace_back(t, std::move(m));
    }
    return b.with_opposite(opposite);
  }

  /// Runs a point-level construction on generic samples of k and labels the outcome by the orbit
  /// of its target_mask half. Per batch the label of largest orbit dimension wins; two consecutive
  /// agreeing batches settle the answer.
  template <class Construct>
  OrbitKey identify(const OrbitKey& k, std::size_t level, std::uint64_t target_mask, Construct&& construct) const {
    auto data = component_at(k, level);
    Orientation target = ta_->orientation(target_mask);
    std::optional<OrbitKey> prev;
    int s = 0;
    while (s + cfg_.batch <= cfg_.max_samples) {
      std::optional<OrbitKey> best;
      long long best_dim = -1;
      for (int n = 0; n < cfg_.batch; ++n, ++s) {
        Representation x = sample_from(*data, k, s, level);
        std::mt19937_64 rng(seed_for(k, level, "construct", static_cast<std::uint64_t>(s), target_mask));
        std::optional<Representation> y = construct(x, rng);
        if (!y) continue;
        OrbitKey label = ta_->key_of(y->restrict_to(target));
        long long dim = ta_->orbit_dimension(label);
        if (dim > best_dim || (dim == best_dim && label < *best)) {
          best = label;
          best_dim = dim;
        }
      }
      if (best && prev && *best == *prev) return *best;
      prev = best;
    }
    throw GenericityError("component label did not stabilize for " + k.canonical());
  }

  std::shared_ptr<TypeA> ta_;
  std::uint64_t mask_;
  GeoConfig cfg_;
  mutable ConcurrentMemo<std::pair<std::size_t, OrbitKey>, std::shared_ptr<const ComponentData>> components_;
  mutable ConcurrentMemo<OpKey, OrbitKey> ops_;
};

}  // namespace qc
