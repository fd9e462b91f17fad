#pragma once

// Doubled quivers (I, H, out, in, bar), orientations, representations over F_p,
// and the invariants computed from them: moment map, nilpotency, symplectic form,
// and the interval rank table that classifies type-A orbits.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace qc {

using Vertex = int;      // 0-based internally, printed 1-based
using ArrowId = int;
using Weight = std::vector<int>;  // coefficients on the simple roots alpha_i

struct Arrow {
  Vertex out;
  Vertex in;
};

class QuiverGraph {
 public:
  /// Validating constructor from raw data: arrows with endpoints plus the bar involution.
  QuiverGraph(int vertex_count, std::vector<Arrow> arrows, std::vector<ArrowId> bar)
      : n_(vertex_count), arrows_(std::move(arrows)), bar_(std::move(bar)) {
    if (n_ <= 0) throw InputError("graph needs at least one vertex");
    if (bar_.size() != arrows_.size()) throw InputError("bar must be defined on every arrow");
    for (ArrowId t = 0; t < static_cast<ArrowId>(arrows_.size()); ++t) {
      const Arrow& a = arrows_[t];
      if (a.out < 0 || a.out >= n_ || a.in < 0 || a.in >= n_) throw InputError("arrow endpoint out of range");
      if (a.out == a.in) throw InputError("loops are not allowed");
      ArrowId b = bar_[t];
      if (b < 0 || b >= static_cast<ArrowId>(arrows_.size())) throw InputError("bar out of range");
      if (b == t) throw InputError("bar must be fixed-point free");
      if (bar_[b] != t) throw InputError("bar must be an involution");
      if (arrows_[b].in != a.out || arrows_[b].out != a.in) throw InputError("bar must reverse arrows");
    }
    build_adjacency();
  }

  /// Each undirected edge {u, v} yields arrows 2e = (u -> v) and 2e+1 = (v -> u).
  static QuiverGraph from_edges(int vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    std::vector<Arrow> arrows;
    std::vector<ArrowId> bar;
    for (const auto& [u, v] : edges) {
      ArrowId t = static_cast<ArrowId>(arrows.size());
      arrows.push_back({u, v});
      arrows.push_back({v, u});
      bar.push_back(t + 1);
      bar.push_back(t);
    }
    return QuiverGraph(vertex_count, std::move(arrows), std::move(bar));
  }

  /// Path graph 1 - 2 - ... - r; edge e joins vertices e and e+1.
  static QuiverGraph type_a(int rank) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int k = 0; k + 1 < rank; ++k) edges.emplace_back(k, k + 1);
    return from_edges(rank, edges);
  }

  int vertex_count() const noexcept { return n_; }
  int arrow_count() const noexcept { return static_cast<int>(arrows_.size()); }
  const Arrow& arrow(ArrowId t) const { return arrows_.at(t); }
  ArrowId bar(ArrowId t) const { return bar_.at(t); }
  const std::vector<ArrowId>& incoming(Vertex i) const { return incoming_.at(i); }
  const std::vector<ArrowId>& outgoing(Vertex i) const { return outgoing_.at(i); }

  void check_vertex(Vertex i) const {
    if (i < 0 || i >= n_) throw InputError("unknown vertex " + std::to_string(i + 1));
  }

  /// <h_i, alpha_j>: 2 on the diagonal, minus the arrow count from i to j otherwise.
  int cartan(Vertex i, Vertex j) const {
    check_vertex(i);
    check_vertex(j);
    if (i == j) return 2;
    int count = 0;
    for (ArrowId t : outgoing_[i])
      if (arrows_[t].in == j) ++count;
    return -count;
  }

  /// <h_i, nu> extended linearly.
  int pairing(Vertex i, const Weight& nu) const {
    int s = 0;
    for (Vertex j = 0; j < n_; ++j)
      if (nu.at(j) != 0) s += cartan(i, j) * nu[j];
    return s;
  }

  /// Simple reflection s_i(nu) = nu - <h_i, nu> alpha_i.
  Weight reflect(Vertex i, Weight nu) const {
    nu.at(i) -= pairing(i, nu);
    return nu;
  }

  /// True when the graph is the path 1 - 2 - ... - r with edges in the canonical order.
  bool is_type_a() const {
    if (arrow_count() != 2 * (n_ - 1)) return false;
    for (int e = 0; e + 1 < n_; ++e) {
      const Arrow& a = arrows_[2 * e];
      if (!(a.out == e && a.in == e + 1) || bar_[2 * e] != 2 * e + 1) return false;
    }
    return true;
  }

  /// Arrow id from u to v, or -1.
  ArrowId find_arrow(Vertex u, Vertex v) const {
    for (ArrowId t : outgoing_.at(u))
      if (arrows_[t].in == v) return t;
    return -1;
  }

  bool operator==(const QuiverGraph& o) const {
    if (n_ != o.n_ || bar_ != o.bar_ || arrows_.size() != o.arrows_.size()) return false;
    for (std::size_t t = 0; t < arrows_.size(); ++t)
      if (arrows_[t].out != o.arrows_[t].out || arrows_[t].in != o.arrows_[t].in) return false;
    return true;
  }

 private:
  void build_adjacency() {
    incoming_.assign(n_, {});
    outgoing_.assign(n_, {});
    for (ArrowId t = 0; t < arrow_count(); ++t) {
      outgoing_[arrows_[t].out].push_back(t);
      incoming_[arrows_[t].in].push_back(t);
    }
  }

  int n_;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> bar_;
  std::vector<std::vector<ArrowId>> incoming_;
  std::vector<std::vector<ArrowId>> outgoing_;
};

using GraphPtr = std::shared_ptr<const QuiverGraph>;

/// A half Omega of H: exactly one of t, bar(t) for each t.
class Orientation {
 public:
  Orientation() = default;

  Orientation(const QuiverGraph& g, std::vector<char> in_omega) : in_omega_(std::move(in_omega)) {
    if (static_cast<int>(in_omega_.size()) != g.arrow_count()) throw InputError("orientation size mismatch");
    for (ArrowId t = 0; t < g.arrow_count(); ++t)
      if (bool(in_omega_[t]) == bool(in_omega_[g.bar(t)]))
        throw InputError("orientation must contain exactly one of each arrow pair");
  }

  /// From a list of directed edges (from, to); every edge of g must appear exactly once.
  static Orientation from_directed(const QuiverGraph& g, const std::vector<std::pair<Vertex, Vertex>>& directed) {
    std::vector<char> in(g.arrow_count(), 0);
    for (const auto& [u, v] : directed) {
      ArrowId t = g.find_arrow(u, v);
      if (t < 0) throw InputError("orientation names a missing edge " + std::to_string(u + 1) + "->" + std::to_string(v + 1));
      if (in[t] || in[g.bar(t)]) throw InputError("edge oriented twice");
      in[t] = 1;
    }
    return Orientation(g, std::move(in));
  }

  /// Type A: every arrow k+1 -> k (left) or k -> k+1 (right).
  static Orientation equioriented(const QuiverGraph& g, bool rightward) {
    std::vector<char> in(g.arrow_count(), 0);
    for (ArrowId t = 0; t < g.arrow_count(); ++t) {
      const Arrow& a = g.arrow(t);
      in[t] = rightward ? (a.in == a.out + 1) : (a.out == a.in + 1);
    }
    return Orientation(g, std::move(in));
  }

  bool contains(ArrowId t) const { return in_omega_.at(t) != 0; }
  int sign(ArrowId t) const { return contains(t) ? 1 : -1; }

  std::vector<ArrowId> arrows() const {
    std::vector<ArrowId> out;
    for (ArrowId t = 0; t < static_cast<ArrowId>(in_omega_.size()); ++t)
      if (in_omega_[t]) out.push_back(t);
    return out;
  }

  bool is_sink(const QuiverGraph& g, Vertex i) const {
    for (ArrowId t : g.outgoing(i))
      if (contains(t)) return false;
    return true;
  }
  bool is_source(const QuiverGraph& g, Vertex i) const {
    for (ArrowId t : g.incoming(i))
      if (contains(t)) return false;
    return true;
  }

  /// s_i Omega: every arrow touching i is reversed.
  Orientation reflected(const QuiverGraph& g, Vertex i) const {
    Orientation o = *this;
    for (ArrowId t : g.outgoing(i)) std::swap(o.in_omega_[t], o.in_omega_[g.bar(t)]);
    return o;
  }

  /// Smallest change of Omega that makes i a sink.
  Orientation with_sink(const QuiverGraph& g, Vertex i) const {
    Orientation o = *this;
    for (ArrowId t : g.outgoing(i))
      if (o.in_omega_[t]) std::swap(o.in_omega_[t], o.in_omega_[g.bar(t)]);
    return o;
  }

  /// Bit e is set when arrow 2e (the canonical direction of edge e) lies in Omega.
  std::uint64_t bitmask() const {
    std::uint64_t m = 0;
    for (std::size_t e = 0; 2 * e < in_omega_.size(); ++e)
      if (in_omega_[2 * e]) m |= std::uint64_t{1} << e;
    return m;
  }

  static Orientation from_bitmask(const QuiverGraph& g, std::uint64_t mask) {
    std::vector<char> in(g.arrow_count(), 0);
    for (int e = 0; 2 * e < g.arrow_count(); ++e) {
      bool canonical = (mask >> e) & 1;
      in[2 * e] = canonical;
      in[2 * e + 1] = !canonical;
    }
    return Orientation(g, std::move(in));
  }

  std::size_t size() const noexcept { return in_omega_.size(); }
  bool operator==(const Orientation&) const = default;

 private:
  std::vector<char> in_omega_;
};

class DimVector {
 public:
  DimVector() = default;
  explicit DimVector(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_)
      if (d < 0) throw InputError("dimension vector entries must be nonnegative");
  }
  int operator[](Vertex i) const { return dims_.at(i); }
  std::size_t size() const noexcept { return dims_.size(); }
  int total() const {
    int s = 0;
    for (int d : dims_) s += d;
    return s;
  }
  /// nu = -sum dims(i) alpha_i.
  Weight weight() const {
    Weight w(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) w[i] = -dims_[i];
    return w;
  }
  static DimVector from_weight(const Weight& w) {
    std::vector<int> d(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) d[i] = -w[i];
    return DimVector(std::move(d));
  }
  DimVector with(Vertex i, int value) const {
    std::vector<int> d = dims_;
    d.at(i) = value;
    return DimVector(std::move(d));
  }
  const std::vector<int>& values() const noexcept { return dims_; }
  bool operator==(const DimVector&) const = default;

 private:
  std::vector<int> dims_;
};

enum class PointKind { kE, kX };

/// A point of E_{V,Omega} (Omega arrows only) or of X_V (all of H).
class Representation {
 public:
  Representation(GraphPtr graph, Orientation orientation, DimVector dims, PrimeField field, PointKind kind)
      : graph_(std::move(graph)), orientation_(std::move(orientation)), dims_(std::move(dims)),
        field_(field), kind_(kind), maps_(graph_->arrow_count()) {
    if (static_cast<int>(dims_.size()) != graph_->vertex_count()) throw InputError("dimension vector size mismatch");
    if (static_cast<int>(orientation_.size()) != graph_->arrow_count()) throw InputError("orientation size mismatch");
    for (ArrowId t = 0; t < graph_->arrow_count(); ++t)
      if (kind_ == PointKind::kX || orientation_.contains(t))
        maps_[t] = Matrix(dims_[graph_->arrow(t).in], dims_[graph_->arrow(t).out]);
  }

  const QuiverGraph& graph() const noexcept { return *graph_; }
  const GraphPtr& graph_ptr() const noexcept { return graph_; }
  const Orientation& orientation() const noexcept { return orientation_; }
  const DimVector& dims() const noexcept { return dims_; }
  const PrimeField& field() const noexcept { return field_; }
  PointKind kind() const noexcept { return kind_; }

  bool has(ArrowId t) const { return maps_.at(t).has_value(); }

  const Matrix& map(ArrowId t) const {
    if (!maps_.at(t)) throw DomainError("arrow " + std::to_string(t) + " is not populated on this point");
    return *maps_[t];
  }

  void set_map(ArrowId t, Matrix m) {
    if (!has(t)) throw DomainError("arrow " + std::to_string(t) + " is not populated on this point");
    const Arrow& a = graph_->arrow(t);
    if (m.rows() != static_cast<std::size_t>(dims_[a.in]) || m.cols() != static_cast<std::size_t>(dims_[a.out]))
      throw InputError("matrix shape does not match dimension vector");
    maps_[t] = std::move(m);
  }

  /// The Omega half as an E-point.
  Representation omega_part() const { return restrict_to(orientation_); }

  /// The half of an X-point selected by another orientation, as an E-point for it.
  Representation restrict_to(const Orientation& o) const {
    Representation e(graph_, o, dims_, field_, PointKind::kE);
    for (ArrowId t : o.arrows()) e.maps_[t] = map(t);
    return e;
  }

  /// X-point from an E-point and matrices on the opposite half.
  Representation with_opposite(const std::vector<std::pair<ArrowId, Matrix>>& opposite) const {
    Representation x(graph_, orientation_, dims_, field_, PointKind::kX);
    for (ArrowId t : orientation_.arrows()) x.maps_[t] = map(t);
    for (const auto& [t, m] : opposite) {
      if (orientation_.contains(t)) throw InputError("opposite half contains an Omega arrow");
      x.set_map(t, m);
    }
    return x;
  }

  bool operator==(const Representation& o) const {
    return *graph_ == *o.graph_ && orientation_ == o.orientation_ && dims_ == o.dims_ && field_ == o.field_ &&
           kind_ == o.kind_ && maps_ == o.maps_;
  }

 private:
  GraphPtr graph_;
  Orientation orientation_;
  DimVector dims_;
  PrimeField field_;
  PointKind kind_;
  std::vector<std::optional<Matrix>> maps_;
};

inline int cartan_pairing(const QuiverGraph& g, Vertex i, Vertex j) { return g.cartan(i, j); }

/// mu_i(B) = sum over out(t) = i of sign(t) B_bar(t) B_t.
inline std::vector<Matrix> moment_map(const Representation& b) {
  if (b.kind() != PointKind::kX) throw DomainError("moment map needs an X-point");
  const auto& g = b.graph();
  const auto& f = b.field();
  std::vector<Matrix> mu;
  for (Vertex i = 0; i < g.vertex_count(); ++i) {
    Matrix acc(b.dims()[i], b.dims()[i]);
    for (ArrowId t : g.outgoing(i)) {
      Matrix term = multiply(f, b.map(g.bar(t)), b.map(t));
      if (b.orientation().sign(t) < 0) term = scale(f, f.neg(1), std::move(term));
      acc = add(f, acc, term);
    }
    mu.push_back(std::move(acc));
  }
  return mu;
}

/// omega(B, B2) = sum_t sign(t) tr(B_bar(t) B2_t).
inline std::uint32_t symplectic_form(const Representation& b, const Representation& b2) {
  if (b.kind() != PointKind::kX || b2.kind() != PointKind::kX) throw DomainError("symplectic form needs X-points");
  if (!(b.dims() == b2.dims()) || !(b.field() == b2.field()) || !(b.orientation() == b2.orientation()))
    throw InputError("symplectic form of points from different spaces");
  const auto& g = b.graph();
  const auto& f = b.field();
  std::uint32_t s = 0;
  for (ArrowId t = 0; t < g.arrow_count(); ++t) {
    std::uint32_t tr = trace(f, multiply(f, b.map(g.bar(t)), b2.map(t)));
    s = b.orientation().sign(t) > 0 ? f.add(s, tr) : f.sub(s, tr);
  }
  return s;
}

/// Nilpotency via the descending chain W_0 = V, W_{k+1} = sum_t B_t(W_k).
/// All paths of length k vanish iff W_k = 0, and the chain is stationary once it stops shrinking.
inline bool is_nilpotent(const Representation& b) {
  const auto& g = b.graph();
  const auto& f = b.field();
  const int n = g.vertex_count();
  std::vector<Matrix> w(n);
  std::size_t total = 0;
  for (Vertex i = 0; i < n; ++i) {
    w[i] = Matrix::identity(b.dims()[i]);
    total += b.dims()[i];
  }
  for (;;) {
    if (total == 0) return true;
    std::vector<std::vector<Matrix>> images(n);
    for (ArrowId t = 0; t < g.arrow_count(); ++t) {
      if (!b.has(t)) continue;
      const Arrow& a = g.arrow(t);
      if (w[a.out].cols() == 0) continue;
      images[a.in].push_back(multiply(f, b.map(t), w[a.out]));
    }
    std::size_t next_total = 0;
    std::vector<Matrix> next(n);
    for (Vertex i = 0; i < n; ++i) {
      if (images[i].empty()) {
        next[i] = Matrix(b.dims()[i], 0);
      } else {
        next[i] = column_basis(f, hstack(images[i], b.dims()[i]));
      }
      next_total += next[i].cols();
    }
    if (next_total == total) return false;
    w = std::move(next);
    total = next_total;
  }
}

/// Triangular table r[a][b], a <= b, over the vertices of a type-A graph.
class RankTable {
 public:
  RankTable() = default;
  explicit RankTable(int rank) : r_(rank), values_(static_cast<std::size_t>(rank) * (rank + 1) / 2, 0) {}

  int rank() const noexcept { return r_; }
  int at(Vertex a, Vertex b) const { return values_.at(index(a, b)); }
  void set(Vertex a, Vertex b, int v) { values_.at(index(a, b)) = v; }
  /// Out-of-range intervals read as zero, which keeps inclusion-exclusion formulas uniform.
  int get_or_zero(Vertex a, Vertex b) const {
    if (a < 0 || b >= r_ || a > b) return 0;
    return at(a, b);
  }
  const std::vector<int>& values() const noexcept { return values_; }
  bool operator==(const RankTable&) const = default;
  auto operator<=>(const RankTable&) const = default;

 private:
  std::size_t index(Vertex a, Vertex b) const {
    if (a < 0 || b >= r_ || a > b) throw InputError("rank table index out of range");
    // rows by a; row a holds b = a..r-1
    return static_cast<std::size_t>(a) * r_ - static_cast<std::size_t>(a) * (a - 1) / 2 + (b - a);
  }

  int r_ = 0;
  std::vector<int> values_;
};

namespace detail {

/// Rank of the natural map lim -> colim of the representation restricted to [a, b].
/// On a consistently oriented segment this is the rank of the composite along it; in general
/// it counts the indecomposable summands whose support contains [a, b].
inline int limit_colimit_rank(const Representation& e, Vertex a, Vertex b) {
  const auto& g = e.graph();
  const auto& f = e.field();
  std::vector<std::size_t> off(b - a + 2, 0);
  for (Vertex k = a; k <= b; ++k) off[k - a + 1] = off[k - a] + e.dims()[k];
  const std::size_t total = off.back();
  if (total == 0) return 0;
  std::vector<ArrowId> inner;
  for (Vertex k = a; k < b; ++k) {
    ArrowId t = g.find_arrow(k, k + 1);
    inner.push_back(e.orientation().contains(t) ? t : g.bar(t));
  }
  // lim: B_t x_out = x_in for every arrow inside the interval
  std::size_t crow = 0;
  for (ArrowId t : inner) crow += e.dims()[g.arrow(t).in];
  Matrix constraint(crow, total);
  std::size_t row = 0;
  for (ArrowId t : inner) {
    const Arrow& ar = g.arrow(t);
    const Matrix& m = e.map(t);
    for (std::size_t r = 0; r < m.rows(); ++r, ++row) {
      for (std::size_t c = 0; c < m.cols(); ++c) constraint(row, off[ar.out - a] + c) = m(r, c);
      constraint(row, off[ar.in - a] + r) = f.sub(constraint(row, off[ar.in - a] + r), 1);
    }
  }
  Matrix lim = crow == 0 ? Matrix::identity(total) : nullspace(f, constraint);
  // colim relations: iota_out(x) - iota_in(B_t x)
  std::size_t rcols = 0;
  for (ArrowId t : inner) rcols += e.dims()[g.arrow(t).out];
  Matrix combined(total, rcols + lim.cols());
  std::size_t col = 0;
  for (ArrowId t : inner) {
    const Arrow& ar = g.arrow(t);
    const Matrix& m = e.map(t);
    for (std::size_t c = 0; c < m.cols(); ++c, ++col) {
      combined(off[ar.out - a] + c, col) = 1;
      for (std::size_t r = 0; r < m.rows(); ++r) combined(off[ar.in - a] + r, col) = f.neg(m(r, c));
    }
  }
  Matrix relations(total, rcols);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < rcols; ++c) relations(r, c) = combined(r, c);
  // lim vectors, read at vertex a only
  for (std::size_t k = 0; k < lim.cols(); ++k)
    for (std::size_t r = 0; r < off[1]; ++r) combined(r, rcols + k) = lim(r, k);
  return static_cast<int>(rank(f, combined) - rank(f, relations));
}

}  // namespace detail

/// Interval rank table of a type-A E-point. Directed segments use the composite along the path.
inline RankTable path_rank_table(const Representation& e) {
  const auto& g = e.graph();
  if (!g.is_type_a()) throw DomainError("rank tables are only supported on type-A graphs");
  if (e.kind() != PointKind::kE) throw DomainError("rank tables are computed on E-points");
  const auto& f = e.field();
  const int r = g.vertex_count();
  RankTable table(r);
  for (Vertex a = 0; a < r; ++a) {
    table.set(a, a, e.dims()[a]);
    // composite of the consistently oriented run starting at a, while it lasts
    std::optional<Matrix> composite;
    int direction = 0;  // +1: a -> a+1 -> ..., -1: ... -> a+1 -> a
    bool directed = true;
    for (Vertex b = a + 1; b < r; ++b) {
      ArrowId fwd = g.find_arrow(b - 1, b);
      int dir = e.orientation().contains(fwd) ? 1 : -1;
      if (direction == 0) direction = dir;
      if (dir != direction) directed = false;
      if (directed) {
        const Matrix& m = direction > 0 ? e.map(fwd) : e.map(g.bar(fwd));
        if (!composite) composite = m;
        else composite = direction > 0 ? multiply(f, m, *composite) : multiply(f, *composite, m);
        table.set(a, b, static_cast<int>(rank(f, *composite)));
      } else {
        table.set(a, b, detail::limit_colimit_rank(e, a, b));
      }
    }
  }
  return table;
}

}  // namespace qc
