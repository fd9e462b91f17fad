#pragma once

// B(infinity) as integer strings along a cofinal index sequence. An element with
// coefficients a_1..a_N is the tensor word b_{i_N}(-a_N) (x) ... (x) b_{i_1}(-a_1),
// padded on the left by one zero cycle so that f never leaves the truncation.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crystal.hpp"
#include "memo.hpp"

namespace qc {

class CofinalSequence {
 public:
  CofinalSequence(const QuiverGraph& g, std::vector<Vertex> base) : base_(std::move(base)) {
    if (base_.empty()) throw InputError("cofinal sequence base must be nonempty");
    std::vector<char> seen(g.vertex_count(), 0);
    for (Vertex v : base_) {
      g.check_vertex(v);
      seen[v] = 1;
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (!seen[v]) throw InputError("cofinal sequence misses vertex " + std::to_string(v + 1));
  }

  /// (1, 2, ..., r) repeated.
  static CofinalSequence cyclic(const QuiverGraph& g) {
    std::vector<Vertex> base(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) base[v] = v;
    return CofinalSequence(g, std::move(base));
  }

  /// Vertex at 0-based position k.
  Vertex at(std::size_t k) const { return base_[k % base_.size()]; }
  std::size_t period() const noexcept { return base_.size(); }
  const std::vector<Vertex>& base() const noexcept { return base_; }
  bool operator==(const CofinalSequence&) const = default;

 private:
  std::vector<Vertex> base_;
};

using SequencePtr = std::shared_ptr<const CofinalSequence>;

class StringElement {
 public:
  StringElement(SequencePtr seq, std::vector<int> coeffs) : seq_(std::move(seq)), a_(std::move(coeffs)) {
    for (int x : a_)
      if (x < 0) throw InputError("string coefficients must be nonnegative");
    while (!a_.empty() && a_.back() == 0) a_.pop_back();
  }

  const CofinalSequence& sequence() const { return *seq_; }
  const SequencePtr& sequence_ptr() const { return seq_; }
  const std::vector<int>& coefficients() const noexcept { return a_; }
  bool is_highest() const noexcept { return a_.empty(); }

  bool operator==(const StringElement& o) const { return a_ == o.a_ && *seq_ == *o.seq_; }
  bool operator<(const StringElement& o) const { return a_ < o.a_; }

 private:
  SequencePtr seq_;
  std::vector<int> a_;
};


class StringModel {
 public:
  using value_type = StringElement;

  explicit StringModel(GraphPtr g)
      : g_(std::move(g)), seq_(std::make_shared<CofinalSequence>(CofinalSequence::cyclic(*g_))) {}
  StringModel(GraphPtr g, CofinalSequence seq)
      : g_(std::move(g)), seq_(std::make_shared<CofinalSequence>(std::move(seq))) {}

  const QuiverGraph& graph() const { return *g_; }
  const GraphPtr& graph_ptr() const { return g_; }
  const CofinalSequence& sequence() const { return *seq_; }
  int rank() const { return g_->vertex_count(); }

  StringElement highest() const { return StringElement(seq_, {}); }

  Weight wt(const StringElement& b) const {
    Weight w(rank(), 0);
    for (std::size_t k = 0; k < b.coefficients().size(); ++k) w[seq_->at(k)] -= b.coefficients()[k];
    return w;
  }

  /// The padded tensor word, leftmost factor first. extra_cycles >= 1 zero cycles are prepended.
  BiWord word(const StringElement& b, int extra_cycles = 1) const {
    const std::size_t n = b.coefficients().size();
    const std::size_t m = n + extra_cycles * seq_->period();
    std::vector<BiElement> factors(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
      std::size_t k = m - 1 - pos;  // sequence position of this factor
      factors[pos] = BiElement{seq_->at(k), k < n ? -b.coefficients()[k] : 0};
    }
    return BiWord(*g_, std::move(factors));
  }

  ExtInt eps(const StringElement& b, Vertex i) const { return word(b).eps(i); }
  ExtInt phi(const StringElement& b, Vertex i) const { return word(b).phi(i); }

  std::optional<StringElement> e(const StringElement& b, Vertex i) const {
    BiWord w = word(b);
    if (w.eps(i) == ExtInt(0)) return std::nullopt;
    w.apply_e(i);
    return from_word(w);
  }

  std::optional<StringElement> f(const StringElement& b, Vertex i) const {
    BiWord w = word(b);
    w.apply_f(i);
    return from_word(w);
  }

  StringElement f_pow(StringElement b, Vertex i, int c) const {
    for (int k = 0; k < c; ++k) b = *f(b, i);
    return b;
  }

  StringElement element_of_word(const OperatorWord& w) const {
    StringElement b = highest();
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      g_->check_vertex(*it);
      b = *f(b, *it);
    }
    return b;
  }

  /// Greedy unfolding by e_i at the smallest vertex with eps_i > 0.
  OperatorWord word_of(const StringElement& b) const {
    return word_memo_->get_or_compute(b.coefficients(), [&] {
      OperatorWord out;
      StringElement cur = b;
      while (!cur.is_highest()) {
        BiWord w = word(cur);
        Vertex pick = -1;
        for (Vertex i = 0; i < rank() && pick < 0; ++i)
          if (w.eps(i) > ExtInt(0)) pick = i;
        if (pick < 0) throw DomainError("string element is not in B(infinity)");
        w.apply_e(pick);
        cur = from_word(w);
        out.push_back(pick);
      }
      return out;
    });
  }

  /// Psi_i(b) = b' (x) f_i^n b_i, returned as (b', n).
  std::pair<StringElement, int> psi_embed(const StringElement& b, Vertex i) const {
    g_->check_vertex(i);
    auto key = std::make_pair(b.coefficients(), i);
    auto [coeffs, n] = psi_memo_->get_or_compute(key, [&] {
      TensorCrystal<StringModel, BiCrystal> t(*this, BiCrystal(g_));
      std::pair<StringElement, BiElement> cur{highest(), BiElement{i, 0}};
      const OperatorWord w = word_of(b);
      for (auto it = w.rbegin(); it != w.rend(); ++it) cur = *t.f(cur, *it);
      return std::make_pair(cur.first.coefficients(), -cur.second.n);
    });
    return {StringElement(seq_, coeffs), n};
  }

  int star_eps(const StringElement& b, Vertex i) const { return psi_embed(b, i).second; }

  /// f_i^* b: the preimage of b' (x) f_i^{n+1} b_i.
  StringElement star_f(const StringElement& b, Vertex i) const {
    auto [bp, n] = psi_embed(b, i);
    return from_image(bp, i, n + 1);
  }

  std::optional<StringElement> star_e(const StringElement& b, Vertex i) const {
    auto [bp, n] = psi_embed(b, i);
    if (n == 0) return std::nullopt;
    return from_image(bp, i, n - 1);
  }

  /// (e_i^*)^max b, which is the left factor of Psi_i(b).
  StringElement star_e_max(const StringElement& b, Vertex i) const { return psi_embed(b, i).first; }

  /// S_i(b) = f_i^{phi_i^*(b)} (e_i^*)^max b, defined when eps_i(b) = 0.
  StringElement s_reflection(const StringElement& b, Vertex i) const {
    if (eps(b, i) != ExtInt(0)) throw DomainError("reflection S_i needs eps_i(b) = 0");
    auto [bp, n] = psi_embed(b, i);
    int phi_star = n + g_->pairing(i, wt(b));
    if (phi_star < 0) throw DomainError("negative phi_i^* in reflection S_i");
    return f_pow(bp, i, phi_star);
  }

  /// Transpose * on B(infinity): the element whose word is read with f and f^* exchanged.
  StringElement star(const StringElement& b) const {
    const OperatorWord w = word_of(b);
    StringElement out = highest();
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = star_f(out, *it);
    return out;
  }

 private:
  StringElement from_word(const BiWord& w) const {
    const auto& fac = w.factors();
    const std::size_t m = fac.size();
    std::vector<int> a(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
      if (fac[pos].n > 0) throw DomainError("operator left B(infinity)");
      a[m - 1 - pos] = -fac[pos].n;
    }
    return StringElement(seq_, std::move(a));
  }

  /// Unfolds b' (x) b_i(-n) to u (x) b_i by e-operators, then replays the word on u.
  StringElement from_image(const StringElement& bp, Vertex i, int n) const {
    TensorCrystal<StringModel, BiCrystal> t(*this, BiCrystal(g_));
    std::pair<StringElement, BiElement> cur{bp, BiElement{i, -n}};
    OperatorWord w;
    for (;;) {
      if (cur.first.is_highest() && cur.second.n == 0) break;
      Vertex pick = -1;
      for (Vertex j = 0; j < rank() && pick < 0; ++j)
        if (t.eps(cur, j) > ExtInt(0)) pick = j;
      if (pick < 0) throw DomainError("tensor element is outside the image of Psi_i");
      cur = *t.e(cur, pick);
      w.push_back(pick);
    }
    return element_of_word(w);
  }

  GraphPtr g_;
  SequencePtr seq_;
  std::shared_ptr<ConcurrentMemo<std::vector<int>, OperatorWord>> word_memo_ =
      std::make_shared<ConcurrentMemo<std::vector<int>, OperatorWord>>();
  std::shared_ptr<ConcurrentMemo<std::pair<std::vector<int>, Vertex>, std::pair<std::vector<int>, int>>> psi_memo_ =
      std::make_shared<ConcurrentMemo<std::pair<std::vector<int>, Vertex>, std::pair<std::vector<int>, int>>>();
};

}  // namespace qc
