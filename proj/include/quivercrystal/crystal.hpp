#pragma once

// Abstract crystals: the model concept, elementary crystals B_i, tensor products,
// axiom checking and morphism predicates.

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "quiver.hpp"

namespace qc {

/// Integer or -infinity, with max-plus arithmetic.
class ExtInt {
 public:
  constexpr ExtInt() = default;
  constexpr ExtInt(long long v) : v_(v) {}  // NOLINT: implicit from integers is intended
  static constexpr ExtInt neg_inf() { return ExtInt(kNegInf, 0); }

  constexpr bool is_finite() const noexcept { return v_ != kNegInf; }
  constexpr long long value() const {
    if (!is_finite()) throw DomainError("value of -infinity");
    return v_;
  }

  friend constexpr ExtInt operator+(ExtInt a, long long b) { return a.is_finite() ? ExtInt(a.v_ + b) : a; }
  friend constexpr ExtInt operator-(ExtInt a, long long b) { return a.is_finite() ? ExtInt(a.v_ - b) : a; }
  friend constexpr ExtInt max(ExtInt a, ExtInt b) { return a.v_ >= b.v_ ? a : b; }
  friend constexpr auto operator<=>(ExtInt a, ExtInt b) = default;
  friend constexpr bool operator==(ExtInt a, ExtInt b) = default;

  std::string str() const { return is_finite() ? std::to_string(v_) : "-inf"; }

 private:
  static constexpr long long kNegInf = std::numeric_limits<long long>::min();
  constexpr ExtInt(long long v, int) : v_(v) {}
  long long v_ = 0;
};

inline Weight add_weights(Weight a, const Weight& b) {
  if (a.size() != b.size()) throw InputError("weight size mismatch");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

inline Weight simple_root(int rank, Vertex i, int coefficient = 1) {
  Weight w(rank, 0);
  w.at(i) = coefficient;
  return w;
}

template <class M>
concept CrystalModel = requires(const M& m, const typename M::value_type& b, Vertex i) {
  typename M::value_type;
  { m.graph() } -> std::convertible_to<const QuiverGraph&>;
  { m.wt(b) } -> std::convertible_to<Weight>;
  { m.eps(b, i) } -> std::convertible_to<ExtInt>;
  { m.phi(b, i) } -> std::convertible_to<ExtInt>;
  { m.e(b, i) } -> std::convertible_to<std::optional<typename M::value_type>>;
  { m.f(b, i) } -> std::convertible_to<std::optional<typename M::value_type>>;
};

/// Operator word in composition order: {i_1, ..., i_l} means f_{i_1} ... f_{i_l} u, so i_l acts first.
using OperatorWord = std::vector<Vertex>;

/// b_i(n): wt = n alpha_i, phi_i = n, eps_i = -n, and -infinity at every other vertex.
struct BiElement {
  Vertex i = 0;
  int n = 0;
  auto operator<=>(const BiElement&) const = default;
};

class BiCrystal {
 public:
  using value_type = BiElement;
  explicit BiCrystal(GraphPtr g) : g_(std::move(g)) {}
  const QuiverGraph& graph() const { return *g_; }

  Weight wt(const BiElement& b) const { return simple_root(g_->vertex_count(), b.i, b.n); }
  ExtInt eps(const BiElement& b, Vertex j) const { return j == b.i ? ExtInt(-b.n) : ExtInt::neg_inf(); }
  ExtInt phi(const BiElement& b, Vertex j) const { return j == b.i ? ExtInt(b.n) : ExtInt::neg_inf(); }
  std::optional<BiElement> e(const BiElement& b, Vertex j) const {
    if (j != b.i) return std::nullopt;
    return BiElement{b.i, b.n + 1};
  }
  std::optional<BiElement> f(const BiElement& b, Vertex j) const {
    if (j != b.i) return std::nullopt;
    return BiElement{b.i, b.n - 1};
  }

 private:
  GraphPtr g_;
};

inline std::optional<BiElement> bi_e(const BiElement& b, Vertex j) {
  if (j != b.i) return std::nullopt;
  return BiElement{b.i, b.n + 1};
}
inline std::optional<BiElement> bi_f(const BiElement& b, Vertex j) {
  if (j != b.i) return std::nullopt;
  return BiElement{b.i, b.n - 1};
}

/// Tensor product C1 (x) C2 with the left factor first.
template <CrystalModel C1, CrystalModel C2>
class TensorCrystal {
 public:
  using left_type = typename C1::value_type;
  using right_type = typename C2::value_type;
  using value_type = std::pair<left_type, right_type>;

  TensorCrystal(C1 left, C2 right) : left_(std::move(left)), right_(std::move(right)) {}
  const QuiverGraph& graph() const { return left_.graph(); }
  const C1& left() const { return left_; }
  const C2& right() const { return right_; }

  int wt_i(const left_type& b, Vertex i) const { return graph().pairing(i, left_.wt(b)); }
  int wt_i_right(const right_type& b, Vertex i) const { return graph().pairing(i, right_.wt(b)); }

  Weight wt(const value_type& t) const { return add_weights(left_.wt(t.first), right_.wt(t.second)); }

  ExtInt eps(const value_type& t, Vertex i) const {
    return max(left_.eps(t.first, i), right_.eps(t.second, i) - wt_i(t.first, i));
  }
  ExtInt phi(const value_type& t, Vertex i) const {
    return max(left_.phi(t.first, i) + wt_i_right(t.second, i), right_.phi(t.second, i));
  }

  std::optional<value_type> e(const value_type& t, Vertex i) const {
    if (left_.phi(t.first, i) >= right_.eps(t.second, i)) {
      auto l = left_.e(t.first, i);
      if (!l) return std::nullopt;
      return value_type{std::move(*l), t.second};
    }
    auto r = right_.e(t.second, i);
    if (!r) return std::nullopt;
    return value_type{t.first, std::move(*r)};
  }

  std::optional<value_type> f(const value_type& t, Vertex i) const {
    if (left_.phi(t.first, i) > right_.eps(t.second, i)) {
      auto l = left_.f(t.first, i);
      if (!l) return std::nullopt;
      return value_type{std::move(*l), t.second};
    }
    auto r = right_.f(t.second, i);
    if (!r) return std::nullopt;
    return value_type{t.first, std::move(*r)};
  }

 private:
  C1 left_;
  C2 right_;
};

/// b_{j_1}(n_1) (x) ... (x) b_{j_N}(n_N), leftmost factor first, evaluated with the
/// closed form of the iterated tensor rule: eps_i = max_k (eps_i(b_k) - sum_{m<k} wt_i(b_m));
/// e acts on the leftmost maximizing factor and f on the rightmost one.
class BiWord {
 public:
  BiWord(const QuiverGraph& g, std::vector<BiElement> factors) : g_(&g), factors_(std::move(factors)) {}

  const std::vector<BiElement>& factors() const noexcept { return factors_; }
  std::vector<BiElement>& factors() noexcept { return factors_; }

  struct Scan {
    ExtInt eps = ExtInt::neg_inf();
    int total_wt = 0;
    int first_max = -1;  // leftmost factor index achieving eps
    int last_max = -1;   // rightmost one
  };

  Scan scan(Vertex i) const {
    Scan s;
    int prefix = 0;
    for (int k = 0; k < static_cast<int>(factors_.size()); ++k) {
      const BiElement& b = factors_[k];
      if (b.i == i) {
        ExtInt value = ExtInt(-b.n - prefix);
        if (value > s.eps) {
          s.eps = value;
          s.first_max = k;
          s.last_max = k;
        } else if (value == s.eps) {
          s.last_max = k;
        }
      }
      prefix += b.n * g_->cartan(i, b.i);
    }
    s.total_wt = prefix;
    return s;
  }

  ExtInt eps(Vertex i) const { return scan(i).eps; }
  ExtInt phi(Vertex i) const {
    Scan s = scan(i);
    return s.eps + s.total_wt;
  }

  /// Applies e_i in place; false when the result is null (no factor at vertex i).
  bool apply_e(Vertex i) {
    Scan s = scan(i);
    if (s.first_max < 0) return false;
    ++factors_[s.first_max].n;
    return true;
  }
  bool apply_f(Vertex i) {
    Scan s = scan(i);
    if (s.last_max < 0) return false;
    --factors_[s.last_max].n;
    return true;
  }

 private:
  const QuiverGraph* g_;
  std::vector<BiElement> factors_;
};

struct AxiomReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {
inline std::string weight_str(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < w.size(); ++k) os << (k ? "," : "") << w[k];
  os << ')';
  return os.str();
}
}  // namespace detail

/// Checks the crystal axioms (phi = eps + <h_i, wt>, weight and eps/phi shifts of e_i and f_i,
/// e_i and f_i mutually inverse, no operators where phi = -inf) at every sample element and vertex.
template <CrystalModel M>
AxiomReport check_axioms(const M& model, const std::vector<typename M::value_type>& sample) {
  AxiomReport rep;
  const auto& g = model.graph();
  const int r = g.vertex_count();
  for (std::size_t idx = 0; idx < sample.size(); ++idx) {
    const auto& b = sample[idx];
    const Weight w = model.wt(b);
    for (Vertex i = 0; i < r; ++i) {
      ++rep.checked;
      auto where = [&](const char* ax) {
        return std::string(ax) + " at sample " + std::to_string(idx) + ", vertex " + std::to_string(i + 1);
      };
      const ExtInt ep = model.eps(b, i), ph = model.phi(b, i);
      if (ep.is_finite() != ph.is_finite() || (ph.is_finite() && ph != ep + g.pairing(i, w)))
        rep.violations.push_back(where("phi rule") + ": phi=" + ph.str() + " eps=" + ep.str() + " wt=" + detail::weight_str(w));
      auto eb = model.e(b, i);
      auto fb = model.f(b, i);
      if (!ph.is_finite() && (eb || fb)) rep.violations.push_back(where("null rule") + ": operator defined where phi=-inf");
      if (eb) {
        if (model.wt(*eb) != add_weights(w, simple_root(r, i)) || model.eps(*eb, i) != ep - 1 ||
            model.phi(*eb, i) != ph + 1)
          rep.violations.push_back(where("e shift"));
        auto back = model.f(*eb, i);
        if (!back || !(*back == b)) rep.violations.push_back(where("inverse rule") + ": f(e b) != b");
      }
      if (fb) {
        if (model.wt(*fb) != add_weights(w, simple_root(r, i, -1)) || model.eps(*fb, i) != ep + 1 ||
            model.phi(*fb, i) != ph - 1)
          rep.violations.push_back(where("f shift"));
        auto back = model.e(*fb, i);
        if (!back || !(*back == b)) rep.violations.push_back(where("inverse rule") + ": e(f b) != b");
      }
    }
  }
  return rep;
}

/// A strict morphism preserves wt, eps, phi and commutes with every e_i and f_i (null included).
template <CrystalModel D, CrystalModel C, class Map>
bool is_strict_morphism(const D& dom, const C& cod, Map&& map, const std::vector<typename D::value_type>& sample) {
  const int r = dom.graph().vertex_count();
  for (const auto& b : sample) {
    const auto mb = map(b);
    if (cod.wt(mb) != dom.wt(b)) return false;
    for (Vertex i = 0; i < r; ++i) {
      if (cod.eps(mb, i) != dom.eps(b, i) || cod.phi(mb, i) != dom.phi(b, i)) return false;
      auto de = dom.e(b, i);
      auto ce = cod.e(mb, i);
      if (de.has_value() != ce.has_value() || (de && !(map(*de) == *ce))) return false;
      auto df = dom.f(b, i);
      auto cf = cod.f(mb, i);
      if (df.has_value() != cf.has_value() || (df && !(map(*df) == *cf))) return false;
    }
  }
  return true;
}

/// Strict morphism that is also injective on the sample.
template <CrystalModel D, CrystalModel C, class Map>
bool is_embedding(const D& dom, const C& cod, Map&& map, const std::vector<typename D::value_type>& sample) {
  if (!is_strict_morphism(dom, cod, map, sample)) return false;
  for (std::size_t a = 0; a < sample.size(); ++a)
    for (std::size_t b = a + 1; b < sample.size(); ++b)
      if (!(sample[a] == sample[b]) && map(sample[a]) == map(sample[b])) return false;
  return true;
}

namespace detail {
template <CrystalModel M, class Step>
std::vector<typename M::value_type> breadth_closure(const M& model, const std::vector<typename M::value_type>& seeds,
                                                    int depth, Step&& step) {
  using T = typename M::value_type;
  std::vector<T> all, frontier;
  auto add = [&](std::vector<T>& dst, std::set<T>& seen, const T& x) {
    if (seen.insert(x).second) dst.push_back(x);
  };
  std::set<T> seen;
  for (const auto& s : seeds) add(frontier, seen, s);
  all = frontier;
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<T> next;
    for (const auto& b : frontier)
      for (Vertex i = 0; i < model.graph().vertex_count(); ++i) step(b, i, [&](const T& x) { add(next, seen, x); });
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return all;
}
}  // namespace detail

/// All elements reachable from the seeds by at most depth f-operators.
template <CrystalModel M>
std::vector<typename M::value_type> f_closure(const M& model, const std::vector<typename M::value_type>& seeds,
                                              int depth) {
  return detail::breadth_closure(model, seeds, depth, [&](const auto& b, Vertex i, auto&& emit) {
    if (auto x = model.f(b, i)) emit(*x);
  });
}

/// All elements reachable from the seeds by at most depth e- or f-operators.
template <CrystalModel M>
std::vector<typename M::value_type> ef_closure(const M& model, const std::vector<typename M::value_type>& seeds,
                                               int depth) {
  return detail::breadth_closure(model, seeds, depth, [&](const auto& b, Vertex i, auto&& emit) {
    if (auto x = model.f(b, i)) emit(*x);
    if (auto x = model.e(b, i)) emit(*x);
  });
}

}  // namespace qc
