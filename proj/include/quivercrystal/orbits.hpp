#pragma once

// Type-A orbit combinatorics: multisegments, interval-module representatives,
// orbit keys (orientation + rank table), and orbit dimensions.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "memo.hpp"
#include "quiver.hpp"

namespace qc {

struct Interval {
  Vertex a = 0;
  Vertex b = 0;
  bool contains(Vertex v) const noexcept { return a <= v && v <= b; }
  auto operator<=>(const Interval&) const = default;
};

/// Multiset of intervals, stored as a sorted map interval -> multiplicity (all positive).
class Multisegment {
 public:
  Multisegment() = default;
  explicit Multisegment(int rank) : rank_(rank) {}

  int rank() const noexcept { return rank_; }
  const std::map<Interval, int>& parts() const noexcept { return parts_; }

  void add(Interval iv, int mult = 1) {
    if (iv.a < 0 || iv.b >= rank_ || iv.a > iv.b) throw InputError("interval out of range");
    if (mult < 0) throw InputError("negative multiplicity");
    if (mult == 0) return;
    parts_[iv] += mult;
  }

  DimVector dims() const {
    std::vector<int> d(rank_, 0);
    for (const auto& [iv, m] : parts_)
      for (Vertex v = iv.a; v <= iv.b; ++v) d[v] += m;
    return DimVector(std::move(d));
  }

  /// r[a, b] = number of intervals (with multiplicity) containing [a, b].
  RankTable rank_table() const {
    RankTable t(rank_);
    for (const auto& [iv, m] : parts_)
      for (Vertex a = iv.a; a <= iv.b; ++a)
        for (Vertex b = a; b <= iv.b; ++b) t.set(a, b, t.at(a, b) + m);
    return t;
  }

  /// Inverse of rank_table by inclusion-exclusion.
  static Multisegment from_rank_table(const RankTable& t) {
    Multisegment ms(t.rank());
    for (Vertex a = 0; a < t.rank(); ++a)
      for (Vertex b = a; b < t.rank(); ++b) {
        int m = t.at(a, b) - t.get_or_zero(a - 1, b) - t.get_or_zero(a, b + 1) + t.get_or_zero(a - 1, b + 1);
        if (m < 0) throw InputError("rank table is not realizable");
        ms.add({a, b}, m);
      }
    if (!(ms.rank_table() == t)) throw InputError("rank table is not realizable");
    return ms;
  }

  bool operator==(const Multisegment&) const = default;

 private:
  int rank_ = 0;
  std::map<Interval, int> parts_;
};

/// All multisegments with the given dimension vector. Intervals are chosen in (a, b) order;
/// once every interval starting at a has been decided, vertex a must be exhausted.
inline std::vector<Multisegment> enumerate_multisegments(const DimVector& dims, std::size_t cap = 5'000'000) {
  const int r = static_cast<int>(dims.size());
  std::vector<Interval> order;
  for (Vertex a = 0; a < r; ++a)
    for (Vertex b = a; b < r; ++b) order.push_back({a, b});
  std::vector<Multisegment> out;
  std::vector<int> rem = dims.values();
  Multisegment cur(r);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      if (out.size() >= cap) throw InputError("orbit count exceeds the configured cap");
      out.push_back(cur);
      return;
    }
    const Interval iv = order[k];
    int most = rem[iv.a];
    for (Vertex v = iv.a; v <= iv.b; ++v) most = std::min(most, rem[v]);
    const bool last_from_a = iv.b == r - 1;
    for (int m = 0; m <= most; ++m) {
      if (last_from_a && rem[iv.a] != m) continue;  // vertex a must be used up
      for (Vertex v = iv.a; v <= iv.b; ++v) rem[v] -= m;
      Multisegment saved = cur;
      cur.add(iv, m);
      self(self, k + 1);
      cur = std::move(saved);
      for (Vertex v = iv.a; v <= iv.b; ++v) rem[v] += m;
    }
  };
  rec(rec, 0);
  return out;
}

/// Direct sum of interval modules: each interval contributes one basis vector at each of its
/// vertices, and every Omega arrow inside the interval maps one to the other.
inline Representation interval_representative(const GraphPtr& g, const Orientation& o, const Multisegment& ms,
                                              PrimeField field = PrimeField()) {
  if (!g->is_type_a()) throw DomainError("interval representatives need a type-A graph");
  DimVector dims = ms.dims();
  Representation e(g, o, dims, field, PointKind::kE);
  // basis position of each interval copy at each vertex
  std::vector<int> next(g->vertex_count(), 0);
  std::vector<std::pair<Interval, std::vector<int>>> copies;
  for (const auto& [iv, m] : ms.parts())
    for (int c = 0; c < m; ++c) {
      std::vector<int> pos(g->vertex_count(), -1);
      for (Vertex v = iv.a; v <= iv.b; ++v) pos[v] = next[v]++;
      copies.emplace_back(iv, std::move(pos));
    }
  for (ArrowId t : o.arrows()) {
    const Arrow& ar = g->arrow(t);
    Matrix m(dims[ar.in], dims[ar.out]);
    for (const auto& [iv, pos] : copies)
      if (iv.contains(ar.in) && iv.contains(ar.out)) m(pos[ar.in], pos[ar.out]) = 1;
    e.set_map(t, std::move(m));
  }
  return e;
}

/// Canonical identifier of a G_V-orbit in E_{V,Omega} on the path graph A_r.
struct OrbitKey {
  int rank = 0;
  std::uint64_t orientation = 0;  // Orientation::bitmask()
  RankTable ranks;

  DimVector dims() const {
    std::vector<int> d(rank);
    for (Vertex v = 0; v < rank; ++v) d[v] = ranks.at(v, v);
    return DimVector(std::move(d));
  }
  int total_dim() const { return dims().total(); }
  Weight weight() const { return dims().weight(); }
  Multisegment multisegment() const { return Multisegment::from_rank_table(ranks); }

  std::string canonical() const {
    std::ostringstream os;
    os << rank << '|' << orientation << '|';
    for (std::size_t k = 0; k < ranks.values().size(); ++k) os << (k ? "," : "") << ranks.values()[k];
    return os.str();
  }

  auto operator<=>(const OrbitKey&) const = default;
  bool operator==(const OrbitKey&) const = default;
};

/// Shared type-A context: the graph of rank r plus memoized hom dimensions between intervals.
class TypeA {
 public:
  explicit TypeA(int rank) : g_(std::make_shared<QuiverGraph>(QuiverGraph::type_a(rank))) {}

  const GraphPtr& graph() const noexcept { return g_; }
  int rank() const { return g_->vertex_count(); }
  Orientation orientation(std::uint64_t mask) const { return Orientation::from_bitmask(*g_, mask); }
  std::uint64_t mask(const Orientation& o) const { return o.bitmask(); }

  OrbitKey key_of(const Representation& e) const { return OrbitKey{rank(), e.orientation().bitmask(), path_rank_table(e)}; }

  OrbitKey key_of(const Multisegment& ms, std::uint64_t mask) const { return OrbitKey{rank(), mask, ms.rank_table()}; }

  Representation representative(const OrbitKey& key, PrimeField field = PrimeField()) const {
    return interval_representative(g_, orientation(key.orientation), key.multisegment(), field);
  }

  std::vector<OrbitKey> enumerate_orbits(const DimVector& dims, std::uint64_t mask,
                                         std::size_t cap = 5'000'000) const {
    if (static_cast<int>(dims.size()) != rank()) throw InputError("dimension vector size mismatch");
    std::vector<OrbitKey> keys;
    for (const auto& ms : enumerate_multisegments(dims, cap)) keys.push_back(key_of(ms, mask));
    return keys;
  }

  /// dim Hom(I, J) between interval modules for the given orientation.
  int hom_intervals(std::uint64_t mask, Interval x, Interval y) const {
    return hom_memo_->get_or_compute(std::make_tuple(mask, x, y), [&] {
      Orientation o = orientation(mask);
      Multisegment mx(rank()), my(rank());
      mx.add(x);
      my.add(y);
      return hom_dimension(interval_representative(g_, o, mx), interval_representative(g_, o, my));
    });
  }

  /// dim End(M) = sum over interval pairs of m_X m_Y dim Hom(X, Y).
  long long end_dimension(const OrbitKey& key) const {
    Multisegment ms = key.multisegment();
    long long s = 0;
    for (const auto& [x, mx] : ms.parts())
      for (const auto& [y, my] : ms.parts()) s += static_cast<long long>(mx) * my * hom_intervals(key.orientation, x, y);
    return s;
  }

  /// dim O = dim G_V - dim Aut = sum d_i^2 - dim End.
  long long orbit_dimension(const OrbitKey& key) const {
    long long g = 0;
    DimVector d = key.dims();
    for (std::size_t v = 0; v < d.size(); ++v) g += static_cast<long long>(d[v]) * d[v];
    return g - end_dimension(key);
  }

  /// dim Hom(M, N) of two E-points with the same orientation, by solving the commutation equations.
  static int hom_dimension(const Representation& m, const Representation& n) {
    const auto& g = m.graph();
    const auto& f = m.field();
    std::vector<std::size_t> off(g.vertex_count() + 1, 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) off[v + 1] = off[v] + std::size_t(m.dims()[v]) * n.dims()[v];
    const std::size_t unknowns = off.back();
    if (unknowns == 0) return 0;
    // phi_v is dn(v) x dm(v), unknown (r, c) at off[v] + r * dm(v) + c
    std::vector<std::vector<std::uint32_t>> rows;
    for (ArrowId t : m.orientation().arrows()) {
      const Arrow& ar = g.arrow(t);
      const Matrix& bm = m.map(t);
      const Matrix& bn = n.map(t);
      const int dmo = m.dims()[ar.out], dmi = m.dims()[ar.in], dno = n.dims()[ar.out], dni = n.dims()[ar.in];
      // (bn phi_out - phi_in bm)(r, c) = 0 for r < dni, c < dmo
      for (int r = 0; r < dni; ++r)
        for (int c = 0; c < dmo; ++c) {
          std::vector<std::uint32_t> row(unknowns, 0);
          for (int k = 0; k < dno; ++k)
            if (bn(r, k)) row[off[ar.out] + k * dmo + c] = f.add(row[off[ar.out] + k * dmo + c], bn(r, k));
          for (int k = 0; k < dmi; ++k)
            if (bm(k, c)) row[off[ar.in] + r * dmi + k] = f.sub(row[off[ar.in] + r * dmi + k], bm(k, c));
          rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) return static_cast<int>(unknowns);
    Matrix sys(rows.size(), unknowns);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < unknowns; ++c) sys(r, c) = rows[r][c];
    return static_cast<int>(unknowns - qc::rank(f, sys));
  }

 private:
  GraphPtr g_;
  std::shared_ptr<ConcurrentMemo<std::tuple<std::uint64_t, Interval, Interval>, int>> hom_memo_ =
      std::make_shared<ConcurrentMemo<std::tuple<std::uint64_t, Interval, Interval>, int>>();
};

}  // namespace qc
