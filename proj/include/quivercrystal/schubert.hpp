#pragma once

// Flag pairs in C^n as orbits on A_{2n-1} with dimension vector (1, 2, ..., n, ..., 2, 1):
// the left half carries the coordinate flag by inclusions, the right half the quotients by
// the w-permuted coordinate flag.

#include <algorithm>
#include <chrono>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "ss_checker.hpp"

namespace qc {

/// One-line permutation of {1..n}.
using Permutation = std::vector<int>;

inline void check_permutation(const Permutation& w) {
  std::vector<int> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != static_cast<int>(k) + 1) throw InputError("not a permutation of 1..n");
}

/// s_{a_1} s_{a_2} ... s_{a_m} as a function, so the last factor acts first.
inline Permutation permutation_of_word(int n, const std::vector<int>& word) {
  if (n < 1) throw InputError("n must be positive");
  Permutation w(n);
  std::iota(w.begin(), w.end(), 1);
  for (int a : word) {
    if (a < 1 || a >= n) throw InputError("generator s_" + std::to_string(a) + " out of range for n = " + std::to_string(n));
  }
  for (int x = 1; x <= n; ++x) {
    int y = x;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      if (y == *it) {
        y = *it + 1;
      } else if (y == *it + 1) {
        y = *it;
      }
    }
    w[x - 1] = y;
  }
  return w;
}

inline std::string permutation_string(const Permutation& w) {
  std::string s;
  for (int x : w) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

inline std::vector<Permutation> all_permutations(int n) {
  Permutation w(n);
  std::iota(w.begin(), w.end(), 1);
  std::vector<Permutation> out;
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

/// nu_cl(i) = i for i <= n and 2n - i after, listed for vertices 1..2n-1.
inline DimVector classical_dims(int n) {
  std::vector<int> d;
  for (int i = 1; i < 2 * n; ++i) d.push_back(i <= n ? i : 2 * n - i);
  return DimVector(std::move(d));
}

/// Equioriented A_{2n-1} with every arrow k -> k+1.
inline std::uint64_t classical_orientation(int n) { return (std::uint64_t{1} << (2 * n - 2)) - 1; }

inline Representation schubert_representative(int n, const Permutation& w, PrimeField field = PrimeField()) {
  if (static_cast<int>(w.size()) != n) throw InputError("permutation length differs from n");
  check_permutation(w);
  auto g = std::make_shared<QuiverGraph>(QuiverGraph::type_a(2 * n - 1));
  Orientation o = Orientation::from_bitmask(*g, classical_orientation(n));
  Representation e(g, o, classical_dims(n), field, PointKind::kE);
  for (int i = 1; i < n; ++i) {
    Matrix inc(i + 1, i);
    for (int k = 0; k < i; ++k) inc(k, k) = 1;
    e.set_map(g->find_arrow(i - 1, i), std::move(inc));
  }
  // V_{n+j} has coordinates w(j+1), ..., w(n); V_n has 1, ..., n
  auto coords = [&](int j) {
    std::vector<int> c;
    if (j == 0) {
      for (int x = 1; x <= n; ++x) c.push_back(x);
    } else {
      c.assign(w.begin() + j, w.end());
    }
    return c;
  };
  for (int j = 0; j + 1 < n; ++j) {
    std::vector<int> from = coords(j), to = coords(j + 1);
    Matrix proj(to.size(), from.size());
    for (std::size_t r = 0; r < to.size(); ++r)
      proj(r, std::find(from.begin(), from.end(), to[r]) - from.begin()) = 1;
    e.set_map(g->find_arrow(n - 1 + j, n + j), std::move(proj));
  }
  return e;
}

/// Left maps injective and right maps surjective, i.e. the orbit comes from a flag pair.
inline bool is_flag_pair_orbit(const OrbitKey& key) {
  const int n = (key.rank + 1) / 2;
  if (key.rank != 2 * n - 1 || !(key.dims() == classical_dims(n)) || key.orientation != classical_orientation(n))
    return false;
  for (int k = 0; k + 1 < 2 * n - 1; ++k)
    if (key.ranks.at(k, k + 1) != std::min(key.ranks.at(k, k), key.ranks.at(k + 1, k + 1))) return false;
  return true;
}

inline OrbitKey schubert_orbit(int n, const Permutation& w) {
  Representation e = schubert_representative(n, w);
  return OrbitKey{2 * n - 1, classical_orientation(n), path_rank_table(e)};
}

/// Table T[j-1][i-1] = dim Gr^F_i Gr^{F'}_j for the flag pair of an orbit on the classical
/// dimension vector, coarsened to the steps F_{block}, F_{2 block}, ...
inline std::vector<std::vector<int>> gr_table(const OrbitKey& key, int block = 1) {
  const int n = (key.rank + 1) / 2;
  if (key.rank != 2 * n - 1 || !(key.dims() == classical_dims(n))) throw InputError("not a flag-pair orbit");
  if (block < 1 || n % block) throw InputError("block size must divide n");
  // d(i, j) = dim F_i cap F'_j with F'_j = ker(V_n -> V_{n+j})
  auto d = [&](int i, int j) {
    if (i == 0 || j == 0) return 0;
    if (j == n) return i;
    return i - key.ranks.at(i - 1, n - 1 + j);
  };
  const int m = n / block;
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      t[b - 1][a - 1] = d(a * block, b * block) - d((a - 1) * block, b * block) - d(a * block, (b - 1) * block) +
                        d((a - 1) * block, (b - 1) * block);
  return t;
}

struct SurvivorEntry {
  Permutation w;
  OrbitKey b2;
  std::size_t reachable = 0;
  bool flag_pair = false;  // b2 itself comes from a flag pair
};

struct InconclusiveEntry {
  Permutation w;
  OrbitKey b2;
  std::string reason;
};

struct ConjectureReport {
  int n = 0;
  std::string candidates;
  std::string strategy;
  std::size_t pairs_total = 0;
  std::size_t eliminated = 0;
  std::vector<SurvivorEntry> survivors;
  std::vector<InconclusiveEntry> inconclusive;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> primes;
  std::size_t budget = 0;
  long long runtime_ms = 0;
};

enum class Candidates { kFlagPairs, kAllOrbits };

struct ConjectureOptions {
  unsigned jobs = 1;
  /// kFlagPairs: b2 ranges over b_v, v != w. kAllOrbits: every orbit on the classical dimension vector.
  Candidates candidates = Candidates::kFlagPairs;
  CheckerConfig checker{};
  GeoConfig geo{};
  /// Restrict to these permutations; empty means all of S_n.
  std::vector<Permutation> only_w;
  /// Explicit candidates b2, overriding the candidate mode when non-empty.
  std::vector<OrbitKey> only_b2;
};

/// For every w and every candidate b2 != b_w, asks whether the calculus rules out
/// Lambda_{b2} inside SS(L_{b_w}).
inline ConjectureReport check_conjecture(int n, const ConjectureOptions& opt = {}) {
  if (n < 1) throw InputError("n must be positive");
  const auto start = std::chrono::steady_clock::now();
  ConjectureReport rep;
  rep.n = n;
  rep.seed = opt.geo.seed;
  rep.primes = opt.geo.primes;
  rep.budget = opt.checker.budget;
  rep.candidates = !opt.only_b2.empty() ? "explicit" : opt.candidates == Candidates::kAllOrbits ? "all-orbits" : "flag-pairs";
  rep.strategy = opt.checker.strategy == Strategy::kExhaustive ? "exhaustive" : "reduce-first";
  auto model = std::make_shared<GeometricModel>(2 * n - 1, classical_orientation(n), opt.geo);
  SsChecker checker(model, opt.checker);
  std::vector<Permutation> ws = opt.only_w.empty() ? all_permutations(n) : opt.only_w;
  std::vector<OrbitKey> candidates = opt.only_b2;
  if (candidates.empty()) {
    if (opt.candidates == Candidates::kAllOrbits) {
      candidates = model->components(classical_dims(n));
    } else {
      for (const auto& v : all_permutations(n)) candidates.push_back(schubert_orbit(n, v));
    }
  }
  struct Job {
    std::size_t w;
    OrbitKey bw;
    OrbitKey b2;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    OrbitKey bw = schubert_orbit(n, ws[k]);
    for (const auto& b2 : candidates)
      if (!(b2 == bw)) jobs.push_back({k, bw, b2});
  }
  std::vector<PairVerdict> verdicts(jobs.size());
  parallel_for(jobs.size(), opt.jobs, [&](std::size_t k) { verdicts[k] = checker.check_pair(jobs[k].bw, jobs[k].b2); });
  rep.pairs_total = jobs.size();
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const PairVerdict& v = verdicts[k];
    switch (v.outcome) {
      case Outcome::kEliminated: ++rep.eliminated; break;
      case Outcome::kSurvives: rep.survivors.push_back({ws[jobs[k].w], jobs[k].b2, v.states_visited, is_flag_pair_orbit(jobs[k].b2)}); break;
      case Outcome::kInconclusive: rep.inconclusive.push_back({ws[jobs[k].w], jobs[k].b2, v.reason}); break;
    }
  }
  rep.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace qc
