#pragma once

// Necessary-condition calculus for SS(L_b) containing Lambda_{b2}: eliminate when some
// eps_i(b) > eps_i(b2), otherwise reduce both components by e_i^max (equal eps_i > 0) or by
// the reflection S_i (eps_i = 0 on both) and keep exploring.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "geometric.hpp"

namespace qc {

/// Pair of components of equal weight, both labelled for the checker's base orientation.
struct ReductionState {
  OrbitKey b;
  OrbitKey b2;

  std::uint64_t orientation() const noexcept { return b.orientation; }
  auto operator<=>(const ReductionState&) const = default;
  bool operator==(const ReductionState&) const = default;
};

enum class MoveKind { kCrt1, kCrt2, kStarCrt1 };

struct Move {
  MoveKind kind = MoveKind::kCrt1;
  Vertex i = 0;
  bool operator==(const Move&) const = default;
};

enum class Outcome { kEliminated, kSurvives, kInconclusive };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kEliminated: return "eliminated";
    case Outcome::kSurvives: return "survives";
    case Outcome::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct PairVerdict {
  Outcome outcome = Outcome::kInconclusive;
  std::vector<Move> witness;       // moves from the root to the eliminating state
  Vertex eliminating_vertex = -1;  // i with eps_i(b) > eps_i(b2) there
  bool eliminated_by_star = false;
  std::size_t states_visited = 0;
  std::size_t max_depth = 0;
  std::string reason;  // set when inconclusive
};

enum class SearchOrder { kBreadthFirst, kDepthFirst };

/// kReduceFirst: when some crt1 reduction applies, follow only the one at the smallest vertex;
/// reflections branch only at states no reduction applies to. kExhaustive: every applicable move.
enum class Strategy { kReduceFirst, kExhaustive };

struct CheckerConfig {
  std::size_t budget = 1'000'000;  // states visited per pair
  double time_limit_s = 0;         // 0 = none
  bool star_moves = false;         // also compare eps_i^* and reduce by (e_i^*)^max
  SearchOrder order = SearchOrder::kBreadthFirst;
  Strategy strategy = Strategy::kReduceFirst;
};

class SsChecker {
 public:
  SsChecker(std::shared_ptr<const GeometricModel> model, CheckerConfig cfg = {})
      : model_(std::move(model)), cfg_(cfg) {
    if (!model_) throw InputError("checker needs a model");
    if (cfg_.budget == 0) throw InputError("budget must be positive");
  }

  const GeometricModel& model() const { return *model_; }
  const CheckerConfig& config() const noexcept { return cfg_; }

  std::optional<Vertex> crt1_eliminate(const ReductionState& s) const {
    check_state(s);
    auto e1 = model_->eps_vector(s.b);
    auto e2 = model_->eps_vector(s.b2);
    for (Vertex i = 0; i < static_cast<Vertex>(e1.size()); ++i)
      if (e1[i] > e2[i]) return i;
    return std::nullopt;
  }

  std::optional<Vertex> star_eliminate(const ReductionState& s) const {
    auto e1 = model_->eps_star_vector(s.b);
    auto e2 = model_->eps_star_vector(s.b2);
    for (Vertex i = 0; i < static_cast<Vertex>(e1.size()); ++i)
      if (e1[i] > e2[i]) return i;
    return std::nullopt;
  }

  ReductionState crt1_reduce(const ReductionState& s, Vertex i) const {
    check_state(s);
    int c = model_->eps_value(s.b, i);
    if (c == 0 || model_->eps_value(s.b2, i) != c) throw DomainError("crt1 needs eps_i(b) = eps_i(b2) > 0");
    return {model_->e_max(s.b, i), model_->e_max(s.b2, i)};
  }

  ReductionState star_crt1_reduce(const ReductionState& s, Vertex i) const {
    check_state(s);
    int c = model_->eps_star(s.b, i);
    if (c == 0 || model_->eps_star(s.b2, i) != c) throw DomainError("star reduction needs eps_i^*(b) = eps_i^*(b2) > 0");
    return {model_->star_e_max(s.b, i), model_->star_e_max(s.b2, i)};
  }

  ReductionState crt2_reduce(const ReductionState& s, Vertex i) const {
    check_state(s);
    if (model_->eps_value(s.b, i) != 0 || model_->eps_value(s.b2, i) != 0)
      throw DomainError("crt2 needs eps_i(b) = eps_i(b2) = 0");
    return {reflect(s.b, i), reflect(s.b2, i)};
  }

  /// S_i through the reflection functor: relabel for an orientation with i a sink, apply Xi,
  /// relabel back for the base orientation.
  OrbitKey reflect(const OrbitKey& k, Vertex i) const {
    const auto& g = model_->graph();
    Orientation base = model_->type_a().orientation(model_->orientation_mask());
    std::uint64_t sink_mask = base.with_sink(g, i).bitmask();
    OrbitKey at_sink = model_->reorient(k, sink_mask);
    OrbitKey xi = model_->reflection_functor(at_sink, i);
    return model_->reorient(xi, model_->orientation_mask());
  }

  /// Moves followed from a state with no elimination, in a fixed order.
  std::vector<std::pair<Move, ReductionState>> successors(const ReductionState& s) const {
    std::vector<std::pair<Move, ReductionState>> out;
    const int r = model_->graph().vertex_count();
    auto e1 = model_->eps_vector(s.b);
    auto e2 = model_->eps_vector(s.b2);
    const bool exhaustive = cfg_.strategy == Strategy::kExhaustive;
    for (Vertex i = 0; i < r; ++i)
      if (e1[i] == e2[i] && e1[i] > 0) {
        out.push_back({{MoveKind::kCrt1, i}, crt1_reduce(s, i)});
        if (!exhaustive) break;
      }
    if (cfg_.star_moves && (exhaustive || out.empty())) {
      auto s1 = model_->eps_star_vector(s.b);
      auto s2 = model_->eps_star_vector(s.b2);
      for (Vertex i = 0; i < r; ++i)
        if (s1[i] == s2[i] && s1[i] > 0) {
          out.push_back({{MoveKind::kStarCrt1, i}, star_crt1_reduce(s, i)});
          if (!exhaustive) break;
        }
    }
    if (!exhaustive && !out.empty()) return out;
    for (Vertex i = 0; i < r; ++i)
      if (e1[i] == 0 && e2[i] == 0) {
        ReductionState t = crt2_reduce(s, i);
        if (!(t == s)) out.push_back({{MoveKind::kCrt2, i}, std::move(t)});
      }
    return out;
  }

  PairVerdict check_pair(const OrbitKey& b, const OrbitKey& b2) const { return check_pair(b, b2, cfg_.order); }

  PairVerdict check_pair(const OrbitKey& b, const OrbitKey& b2, SearchOrder order) const {
    if (b == b2) throw InputError("check_pair needs distinct components");
    ReductionState root{b, b2};
    check_state(root);
    const auto start = std::chrono::steady_clock::now();
    PairVerdict v;
    // state -> (parent, move, depth) for witness replay
    struct Node {
      std::optional<ReductionState> parent;
      Move move;
      std::size_t depth = 0;
    };
    std::map<ReductionState, Node> seen;
    std::deque<ReductionState> frontier{root};
    seen.emplace(root, Node{std::nullopt, {}, 0});
    while (!frontier.empty()) {
      if (v.states_visited >= cfg_.budget) {
        v.outcome = Outcome::kInconclusive;
        v.reason = "state budget exhausted";
        return v;
      }
      ReductionState s;
      if (order == SearchOrder::kBreadthFirst) {
        s = std::move(frontier.front());
        frontier.pop_front();
      } else {
        s = std::move(frontier.back());
        frontier.pop_back();
      }
      ++v.states_visited;
      const Node& node = seen.at(s);
      v.max_depth = std::max(v.max_depth, node.depth);
      std::optional<Vertex> hit = crt1_eliminate(s);
      bool by_star = false;
      if (!hit && cfg_.star_moves) {
        hit = star_eliminate(s);
        by_star = hit.has_value();
      }
      if (hit) {
        v.outcome = Outcome::kEliminated;
        v.eliminating_vertex = *hit;
        v.eliminated_by_star = by_star;
        for (const ReductionState* cur = &s; seen.at(*cur).parent; cur = &*seen.at(*cur).parent)
          v.witness.insert(v.witness.begin(), seen.at(*cur).move);
        return v;
      }
      if (cfg_.time_limit_s > 0 &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > cfg_.time_limit_s) {
        v.outcome = Outcome::kInconclusive;
        v.reason = "time limit exceeded";
        return v;
      }
      const std::size_t depth = node.depth;
      for (auto& [move, t] : successors(s)) {
        if (seen.count(t)) continue;
        seen.emplace(t, Node{s, move, depth + 1});
        frontier.push_back(std::move(t));
      }
    }
    v.outcome = Outcome::kSurvives;
    return v;
  }

  /// Replays a witness from the root and returns the final state.
  ReductionState replay(const ReductionState& root, const std::vector<Move>& moves) const {
    ReductionState s = root;
    for (const Move& m : moves) {
      switch (m.kind) {
        case MoveKind::kCrt1: s = crt1_reduce(s, m.i); break;
        case MoveKind::kCrt2: s = crt2_reduce(s, m.i); break;
        case MoveKind::kStarCrt1: s = star_crt1_reduce(s, m.i); break;
      }
    }
    return s;
  }

 private:
  void check_state(const ReductionState& s) const {
    if (s.b.orientation != model_->orientation_mask() || s.b2.orientation != model_->orientation_mask())
      throw InputError("state is not labelled for the checker orientation");
    if (!(s.b.weight() == s.b2.weight())) throw InputError("state components have different weights");
  }

  std::shared_ptr<const GeometricModel> model_;
  CheckerConfig cfg_;
};

/// Runs fn(k) for k in [0, count) on up to jobs threads; results are stored by index.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qc
